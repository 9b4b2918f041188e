#include "oedg/mesh.hpp"

#include "oedg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace oedg {

std::string BoundaryTag::str() const {
    switch (kind) {
    case BoundaryKind::Periodic: return "P" + std::to_string(periodic_id);
    case BoundaryKind::Inflow: return "IN";
    case BoundaryKind::Outflow: return "OUT";
    case BoundaryKind::Wall: return "WALL";
    case BoundaryKind::Exact: return "EXACT";
    }
    return "?";
}

BoundaryTag BoundaryTag::parse(const std::string& s) {
    if (s == "IN") return {BoundaryKind::Inflow, -1};
    if (s == "OUT") return {BoundaryKind::Outflow, -1};
    if (s == "WALL") return {BoundaryKind::Wall, -1};
    if (s == "EXACT") return {BoundaryKind::Exact, -1};
    if (s.size() > 1 && s[0] == 'P' &&
        std::all_of(s.begin() + 1, s.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
        return {BoundaryKind::Periodic, std::stoi(s.substr(1))};
    throw std::invalid_argument("unknown boundary tag '" + s + "'");
}

namespace {

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
           std::vector<BoundarySegment> boundary)
    : vertices_(std::move(vertices)), cells_(std::move(cells)), boundary_(std::move(boundary)) {
    build();
}

std::array<double, 4> Mesh::bounding_box() const {
    std::array<double, 4> bb{HUGE_VAL, HUGE_VAL, -HUGE_VAL, -HUGE_VAL};
    for (const auto& p : vertices_) {
        bb[0] = std::min(bb[0], p.x);
        bb[1] = std::min(bb[1], p.y);
        bb[2] = std::max(bb[2], p.x);
        bb[3] = std::max(bb[3], p.y);
    }
    return bb;
}

void Mesh::build() {
    const int nv = static_cast<int>(vertices_.size());
    if (cells_.empty()) throw TopologyError("mesh has no cells");
    for (std::size_t c = 0; c < cells_.size(); ++c)
        for (int v : cells_[c])
            if (v < 0 || v >= nv)
                throw TopologyError("cell " + std::to_string(c) + " references vertex " + std::to_string(v) +
                                    " out of range");

    const auto bb = bounding_box();
    const double bb_area = (bb[2] - bb[0]) * (bb[3] - bb[1]);
    const std::size_t nc = cells_.size();
    area_.resize(nc);
    length_.resize(3 * nc);
    normal_.resize(3 * nc);
    jinv_.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        Point p0 = vertex(c, 0), p1 = vertex(c, 1), p2 = vertex(c, 2);
        double det = cross(p1 - p0, p2 - p0);
        if (!(det > 0.0) || 0.5 * det < 1e-14 * bb_area)
            throw GeometryError("cell " + std::to_string(c) + " is degenerate or not counter-clockwise");
        area_[c] = 0.5 * det;
        jinv_[c] = {(p2.y - p0.y) / det, -(p2.x - p0.x) / det, -(p1.y - p0.y) / det, (p1.x - p0.x) / det};
        for (int e = 0; e < 3; ++e) {
            Point d = vertex(c, (e + 2) % 3) - vertex(c, (e + 1) % 3);
            double l = norm(d);
            length_[3 * c + e] = l;
            normal_[3 * c + e] = {d.y / l, -d.x / l};
        }
    }

    // Faces from shared edges.
    cell_face_.assign(3 * nc, -1);
    std::map<std::uint64_t, int> open;
    for (std::size_t c = 0; c < nc; ++c) {
        for (int e = 0; e < 3; ++e) {
            int a = cells_[c][(e + 1) % 3], b = cells_[c][(e + 2) % 3];
            auto key = edge_key(a, b);
            auto it = open.find(key);
            if (it == open.end()) {
                Face f;
                f.left = static_cast<int>(c);
                f.left_edge = e;
                faces_.push_back(f);
                cell_face_[3 * c + e] = static_cast<int>(faces_.size()) - 1;
                open.emplace(key, static_cast<int>(faces_.size()) - 1);
            } else {
                Face& f = faces_[it->second];
                if (f.right >= 0)
                    throw TopologyError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                                        ") shared by more than two cells");
                if (cells_[f.left][(f.left_edge + 1) % 3] != b)
                    throw TopologyError("cells " + std::to_string(f.left) + " and " + std::to_string(c) +
                                        " have inconsistent orientation");
                f.right = static_cast<int>(c);
                f.right_edge = e;
                cell_face_[3 * c + e] = it->second;
            }
        }
    }

    std::vector<char> tagged(faces_.size(), 0);
    for (const auto& seg : boundary_) {
        auto it = open.find(edge_key(seg.v0, seg.v1));
        if (it == open.end() || faces_[it->second].right >= 0)
            throw TopologyError("boundary edge (" + std::to_string(seg.v0) + "," + std::to_string(seg.v1) +
                                ") is not a boundary edge of the mesh");
        if (tagged[it->second])
            throw TopologyError("boundary edge (" + std::to_string(seg.v0) + "," + std::to_string(seg.v1) +
                                ") tagged twice");
        tagged[it->second] = 1;
        faces_[it->second].tag = seg.tag;
    }
    std::vector<int> boundary_faces;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        if (faces_[f].right >= 0) continue;
        if (!tagged[f]) {
            const Face& fc = faces_[f];
            throw TopologyError("untagged boundary edge (" +
                                std::to_string(cells_[fc.left][(fc.left_edge + 1) % 3]) + "," +
                                std::to_string(cells_[fc.left][(fc.left_edge + 2) % 3]) + ")");
        }
        boundary_faces.push_back(static_cast<int>(f));
    }
    pair_periodic(boundary_faces);
}

void Mesh::pair_periodic(std::vector<int>& boundary_faces) {
    std::map<int, std::vector<int>> groups;
    for (int f : boundary_faces)
        if (faces_[f].tag.kind == BoundaryKind::Periodic) groups[faces_[f].tag.periodic_id].push_back(f);
    if (groups.empty()) return;

    const auto bb = bounding_box();
    const double tol = 1e-9 * std::max(bb[2] - bb[0], bb[3] - bb[1]);
    auto start = [&](int f) { return vertex(faces_[f].left, (faces_[f].left_edge + 1) % 3); };
    auto end = [&](int f) { return vertex(faces_[f].left, (faces_[f].left_edge + 2) % 3); };
    auto close = [&](Point a, Point b) { return norm(a - b) <= tol; };

    std::vector<int> removed;
    for (auto& [id, group] : groups) {
        if (group.size() % 2)
            throw TopologyError("periodic group P" + std::to_string(id) + " has an odd number of edges");
        // Midpoints sorted by x for tolerant lookup.
        std::vector<std::pair<Point, int>> mids;
        for (int f : group) mids.push_back({0.5 * (start(f) + end(f)), f});
        std::sort(mids.begin(), mids.end(), [](const auto& a, const auto& b) {
            return a.first.x < b.first.x || (a.first.x == b.first.x && a.first.y < b.first.y);
        });
        auto lookup = [&](Point p) {
            auto it = std::lower_bound(mids.begin(), mids.end(), p.x - tol,
                                       [](const auto& m, double x) { return m.first.x < x; });
            for (; it != mids.end() && it->first.x <= p.x + tol; ++it)
                if (close(it->first, p)) return it->second;
            return -1;
        };

        // A partner traverses the translated edge in the opposite direction.
        const int f0 = group.front();
        Point t0 = end(f0) - start(f0);
        t0 = (1.0 / norm(t0)) * t0;
        std::vector<Point> candidates;
        for (int p : group) {
            if (p == f0) continue;
            Point d = start(p) - end(f0);
            if (norm(d) <= tol || !close(end(p), start(f0) + d)) continue;
            candidates.push_back(d);
        }
        std::stable_sort(candidates.begin(), candidates.end(), [&](Point a, Point b) {
            double pa = std::abs(a.x * t0.x + a.y * t0.y), pb = std::abs(b.x * t0.x + b.y * t0.y);
            if (std::abs(pa - pb) > tol) return pa < pb;
            return norm(a) < norm(b);
        });

        std::vector<int> partner;
        bool matched = false;
        for (Point d : candidates) {
            std::map<int, int> pairing;
            bool ok = true;
            for (int f : group) {
                Point m = 0.5 * (start(f) + end(f));
                int p = lookup(m + d);
                if (p < 0) p = lookup(m - d);
                if (p < 0 || p == f) { ok = false; break; }
                Point shift = start(p) - end(f);
                if (!close(end(p), start(f) + shift) || !(close(shift, d) || close(shift, -1.0 * d))) {
                    ok = false;
                    break;
                }
                pairing[f] = p;
            }
            if (!ok) continue;
            for (auto [f, p] : pairing)
                if (pairing[p] != f) ok = false;
            if (!ok) continue;
            for (auto [f, p] : pairing) {
                if (f > p) continue;
                Face& a = faces_[f];
                const Face& b = faces_[p];
                a.right = b.left;
                a.right_edge = b.left_edge;
                cell_face_[3 * b.left + b.left_edge] = f;
                removed.push_back(p);
            }
            matched = true;
            break;
        }
        if (!matched)
            throw TopologyError("periodic group P" + std::to_string(id) + " cannot be paired by a translation");
    }

    // Compact the face list, keeping the original order.
    std::sort(removed.begin(), removed.end());
    std::vector<int> remap(faces_.size(), -1);
    std::vector<Face> kept;
    for (std::size_t f = 0, r = 0; f < faces_.size(); ++f) {
        if (r < removed.size() && removed[r] == static_cast<int>(f)) {
            ++r;
            continue;
        }
        remap[f] = static_cast<int>(kept.size());
        kept.push_back(faces_[f]);
    }
    for (auto& cf : cell_face_) cf = remap[cf];
    faces_ = std::move(kept);
}

Point Mesh::centroid(std::size_t c) const {
    return (1.0 / 3.0) * (vertex(c, 0) + vertex(c, 1) + vertex(c, 2));
}

double Mesh::perimeter(std::size_t c) const {
    return length_[3 * c] + length_[3 * c + 1] + length_[3 * c + 2];
}

Point Mesh::to_physical(std::size_t c, double xi, double eta) const {
    Point p0 = vertex(c, 0);
    return p0 + xi * (vertex(c, 1) - p0) + eta * (vertex(c, 2) - p0);
}

double Mesh::total_area() const {
    double s = 0.0;
    for (double a : area_) s += a;
    return s;
}

Mesh read_mesh(std::istream& in) {
    std::string raw;
    int lineno = 0;
    auto next = [&](std::istringstream& ss) {
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
            ss.clear();
            ss.str(raw);
            return;
        }
        throw ParseError("unexpected end of file", lineno + 1);
    };
    auto finish = [&](std::istringstream& ss) {
        std::string extra;
        if (ss >> extra) throw ParseError("unexpected token '" + extra + "'", lineno);
    };

    std::istringstream ss;
    next(ss);
    long nv, nc, nbe;
    if (!(ss >> nv >> nc >> nbe) || nv < 3 || nc < 1 || nbe < 0)
        throw ParseError("expected header 'NV NC NBE'", lineno);
    finish(ss);

    std::vector<Point> verts(nv);
    for (auto& p : verts) {
        next(ss);
        if (!(ss >> p.x >> p.y)) throw ParseError("expected vertex 'x y'", lineno);
        finish(ss);
    }
    std::vector<std::array<int, 3>> cells(nc);
    for (auto& c : cells) {
        next(ss);
        if (!(ss >> c[0] >> c[1] >> c[2])) throw ParseError("expected cell 'i0 i1 i2'", lineno);
        finish(ss);
        for (int v : c)
            if (v < 0 || v >= nv) throw ParseError("vertex index " + std::to_string(v) + " out of range", lineno);
    }
    std::vector<BoundarySegment> bnd(nbe);
    for (auto& b : bnd) {
        next(ss);
        std::string tag;
        if (!(ss >> b.v0 >> b.v1 >> tag)) throw ParseError("expected boundary edge 'iv0 iv1 TAG'", lineno);
        finish(ss);
        if (b.v0 < 0 || b.v0 >= nv || b.v1 < 0 || b.v1 >= nv)
            throw ParseError("boundary vertex index out of range", lineno);
        try {
            b.tag = BoundaryTag::parse(tag);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
    }
    while (std::getline(in, raw)) {
        ++lineno;
        raw = raw.substr(0, raw.find('#'));
        if (raw.find_first_not_of(" \t\r") != std::string::npos) throw ParseError("content after the last record", lineno);
    }
    return Mesh(std::move(verts), std::move(cells), std::move(bnd));
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out.precision(17);
    out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << mesh.boundary_segments().size() << '\n';
    for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        out << mesh.cell(c)[0] << ' ' << mesh.cell(c)[1] << ' ' << mesh.cell(c)[2] << '\n';
    for (const auto& b : mesh.boundary_segments()) out << b.v0 << ' ' << b.v1 << ' ' << b.tag.str() << '\n';
}

Mesh generate_structured(const StructuredOptions& o) {
    if (o.nx < 1 || o.ny < 1) throw ConfigError("structured mesh needs nx, ny >= 1");
    if (!(o.x1 > o.x0) || !(o.y1 > o.y0)) throw ConfigError("structured mesh needs a non-empty box");
    auto id = [&](int i, int j) { return j * (o.nx + 1) + i; };
    std::vector<Point> verts;
    for (int j = 0; j <= o.ny; ++j)
        for (int i = 0; i <= o.nx; ++i)
            verts.push_back({o.x0 + (o.x1 - o.x0) * i / o.nx, o.y0 + (o.y1 - o.y0) * j / o.ny});
    std::vector<std::array<int, 3>> cells;
    for (int j = 0; j < o.ny; ++j)
        for (int i = 0; i < o.nx; ++i) {
            int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            if (o.diagonal == Diagonal::Alternating && (i + j) % 2) {
                cells.push_back({a, b, d});
                cells.push_back({b, c, d});
            } else {
                cells.push_back({a, b, c});
                cells.push_back({a, c, d});
            }
        }
    BoundaryTag left = o.left, right = o.right, bottom = o.bottom, top = o.top;
    if (o.periodic_x) left = right = {BoundaryKind::Periodic, 0};
    if (o.periodic_y) bottom = top = {BoundaryKind::Periodic, 1};
    std::vector<BoundarySegment> bnd;
    for (int i = 0; i < o.nx; ++i) bnd.push_back({id(i, 0), id(i + 1, 0), bottom});
    for (int j = 0; j < o.ny; ++j) bnd.push_back({id(o.nx, j), id(o.nx, j + 1), right});
    for (int i = o.nx; i > 0; --i) bnd.push_back({id(i, o.ny), id(i - 1, o.ny), top});
    for (int j = o.ny; j > 0; --j) bnd.push_back({id(0, j), id(0, j - 1), left});
    return Mesh(std::move(verts), std::move(cells), std::move(bnd));
}

Mesh refine_uniform(const Mesh& mesh) {
    std::vector<Point> verts = mesh.vertices();
    std::map<std::uint64_t, int> mid;
    auto midpoint = [&](int a, int b) {
        auto key = edge_key(a, b);
        auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        verts.push_back(0.5 * (mesh.vertices()[a] + mesh.vertices()[b]));
        int idx = static_cast<int>(verts.size()) - 1;
        mid.emplace(key, idx);
        return idx;
    };
    std::vector<std::array<int, 3>> cells;
    cells.reserve(4 * mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        auto [a, b, d] = mesh.cell(c);
        int ab = midpoint(a, b), bd = midpoint(b, d), da = midpoint(d, a);
        cells.push_back({a, ab, da});
        cells.push_back({ab, b, bd});
        cells.push_back({da, bd, d});
        cells.push_back({ab, bd, da});
    }
    std::vector<BoundarySegment> bnd;
    for (const auto& s : mesh.boundary_segments()) {
        int m = midpoint(s.v0, s.v1);
        bnd.push_back({s.v0, m, s.tag});
        bnd.push_back({m, s.v1, s.tag});
    }
    return Mesh(std::move(verts), std::move(cells), std::move(bnd));
}

Mesh perturb_vertices(const Mesh& mesh, double amplitude, std::uint64_t seed) {
    std::vector<char> fixed(mesh.num_vertices(), 0);
    for (const auto& s : mesh.boundary_segments()) fixed[s.v0] = fixed[s.v1] = 1;
    std::vector<double> spacing(mesh.num_vertices(), HUGE_VAL);
    for (std::size_t c = 0; c < mesh.num_cells(); ++c)
        for (int e = 0; e < 3; ++e) {
            int v = mesh.cell(c)[e];
            double h = 2.0 * mesh.area(c) / std::max({mesh.edge_length(c, 0), mesh.edge_length(c, 1),
                                                       mesh.edge_length(c, 2)});
            spacing[v] = std::min(spacing[v], h);
        }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<Point> verts = mesh.vertices();
    for (std::size_t v = 0; v < verts.size(); ++v) {
        double dx = uni(rng), dy = uni(rng);
        if (fixed[v]) continue;
        verts[v] = verts[v] + (amplitude * spacing[v]) * Point{dx, dy};
    }
    std::vector<std::array<int, 3>> cells(mesh.num_cells());
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = mesh.cell(c);
    return Mesh(std::move(verts), std::move(cells), mesh.boundary_segments());
}

Mesh rotate_mesh(const Mesh& mesh, double angle) {
    const double cs = std::cos(angle), sn = std::sin(angle);
    std::vector<Point> verts;
    verts.reserve(mesh.num_vertices());
    for (const auto& p : mesh.vertices()) verts.push_back({cs * p.x + sn * p.y, -sn * p.x + cs * p.y});
    std::vector<std::array<int, 3>> cells(mesh.num_cells());
    for (std::size_t c = 0; c < cells.size(); ++c) cells[c] = mesh.cell(c);
    return Mesh(std::move(verts), std::move(cells), mesh.boundary_segments());
}

SortedEdges sort_edges(const std::array<Point, 3>& tri) {
    SortedEdges s;
    std::array<double, 3> len;
    for (int e = 0; e < 3; ++e) len[e] = norm(tri[(e + 2) % 3] - tri[(e + 1) % 3]);
    s.local = {0, 1, 2};
    std::stable_sort(s.local.begin(), s.local.end(), [&](int a, int b) { return len[a] > len[b]; });
    for (int i = 0; i < 3; ++i) s.length[i] = len[s.local[i]];
    return s;
}

SortedEdges sort_edges(const Mesh& mesh, std::size_t c) {
    return sort_edges(std::array<Point, 3>{mesh.vertex(c, 0), mesh.vertex(c, 1), mesh.vertex(c, 2)});
}

}  // namespace oedg
