#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "rbfheat/neighbor.hpp"
#include "rbfheat/point_set.hpp"

namespace rbfheat {

struct PointFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Text format, one record per line:
///
///   # dim=<2|3> n=<count>
///   # interface <id> <subdomain_1> <subdomain_2>     (one per interface)
///   x y [z] subdomain kind [id nx ny [nz]]
///
/// kind is I (interior), B (boundary) or F (interface). For F records the
/// trailing id is the interface id; for B records it is the boundary region.
/// Corner boundary points store a zero normal. Coordinates round-trip
/// bit-exactly (shortest-exact decimal).
inline void export_points(const PointSet& ps, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw PointFileError("cannot open " + path + " for writing");
    out << "# dim=" << ps.dim << " n=" << ps.size() << "\n";
    std::map<int, std::pair<int, int>> ifaces;
    for (int i = 0; i < ps.size(); ++i)
        if (ps.kind[i] == PointKind::interface) ifaces[ps.interface_id[i]] = ps.adjacent[i];
    for (auto& [id, adj] : ifaces)
        out << "# interface " << id << " " << adj.first << " " << adj.second << "\n";
    char buf[400];
    for (int i = 0; i < ps.size(); ++i) {
        int len = 0;
        for (int a = 0; a < ps.dim; ++a)
            len += std::snprintf(buf + len, sizeof(buf) - len, "%.17g ", ps.coords[i][a]);
        len += std::snprintf(buf + len, sizeof(buf) - len, "%d %c", ps.subdomain[i],
                             kind_tag(ps.kind[i]));
        if (ps.kind[i] != PointKind::interior) {
            int id = ps.kind[i] == PointKind::interface ? ps.interface_id[i]
                                                        : ps.boundary_region[i];
            len += std::snprintf(buf + len, sizeof(buf) - len, " %d", id);
            for (int a = 0; a < ps.dim; ++a)
                len += std::snprintf(buf + len, sizeof(buf) - len, " %.17g", ps.normal[i][a]);
        }
        out << buf << "\n";
    }
}

inline PointSet import_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PointFileError("cannot open " + path);
    PointSet ps;
    std::map<int, std::pair<int, int>> ifaces;
    std::string line;
    int lineno = 0;
    int declared_n = -1;
    bool header_seen = false;
    auto fail = [&](const std::string& what) {
        throw PointFileError(path + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            hs >> tok;
            if (tok == "interface") {
                int id, s1, s2;
                if (!(hs >> id >> s1 >> s2)) fail("malformed interface header");
                ifaces[id] = {s1, s2};
            } else if (tok.rfind("dim=", 0) == 0) {
                ps.dim = std::stoi(tok.substr(4));
                if (ps.dim != 2 && ps.dim != 3) fail("dim must be 2 or 3");
                std::string ntok;
                if (hs >> ntok && ntok.rfind("n=", 0) == 0)
                    declared_n = std::stoi(ntok.substr(2));
                header_seen = true;
            }
            continue;
        }
        if (!header_seen) fail("missing '# dim=... n=...' header");
        std::istringstream fs(line);
        Vec3 x = Vec3::Zero();
        for (int a = 0; a < ps.dim; ++a)
            if (!(fs >> x[a])) fail("expected " + std::to_string(ps.dim) + " coordinates");
        int sub;
        char kind;
        if (!(fs >> sub >> kind)) fail("expected subdomain id and kind tag");
        switch (kind) {
            case 'I':
                ps.push_interior(x, sub);
                break;
            case 'B': {
                int region = 0;
                Vec3 n = Vec3::Zero();
                if (fs >> region)
                    for (int a = 0; a < ps.dim; ++a)
                        if (!(fs >> n[a])) fail("expected boundary normal");
                double nn = n.norm();
                if (nn > 0) n /= nn;  // tolerate non-unit input, renormalize
                ps.push_boundary(x, sub, region, n);
                break;
            }
            case 'F': {
                int id;
                Vec3 n = Vec3::Zero();
                if (!(fs >> id)) fail("interface record needs an interface id");
                for (int a = 0; a < ps.dim; ++a)
                    if (!(fs >> n[a])) fail("expected interface normal");
                double nn = n.norm();
                if (nn == 0) fail("interface normal must be nonzero");
                auto it = ifaces.find(id);
                std::pair<int, int> adj =
                    it != ifaces.end() ? it->second : std::make_pair(sub, sub == 1 ? 2 : 1);
                ps.push_interface(x, id, n / nn, adj);
                break;
            }
            default:
                fail(std::string("unknown kind tag '") + kind + "'");
        }
    }
    if (ps.size() == 0) throw PointFileError(path + ": no point records");
    if (declared_n >= 0 && declared_n != ps.size())
        throw PointFileError(path + ": header declares n=" + std::to_string(declared_n) +
                             " but " + std::to_string(ps.size()) + " records found");
    validate(ps);  // throws with point indices on duplicates etc.
    return ps;
}

}  // namespace rbfheat
