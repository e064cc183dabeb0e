// placeholder; the CLI is assembled after the library modules
int main() { return 0; }
