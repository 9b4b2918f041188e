#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace oedg {

struct Point {
    double x = 0.0, y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

enum class BoundaryKind { Periodic, Inflow, Outflow, Wall, Exact };

struct BoundaryTag {
    BoundaryKind kind = BoundaryKind::Outflow;
    int periodic_id = -1;

    std::string str() const;
    static BoundaryTag parse(const std::string& s);
};

// Local edge i of a cell joins local vertices (i+1)%3 -> (i+2)%3 and is opposite vertex i.
struct Face {
    int left = -1, left_edge = -1;
    int right = -1, right_edge = -1;  // right < 0 on a physical boundary
    BoundaryTag tag;
    bool boundary() const { return right < 0; }
};

struct BoundarySegment {
    int v0, v1;
    BoundaryTag tag;
};

class Mesh {
public:
    Mesh() = default;
    Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> cells,
         std::vector<BoundarySegment> boundary);

    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_faces() const { return faces_.size(); }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::array<int, 3>& cell(std::size_t c) const { return cells_[c]; }
    const std::vector<BoundarySegment>& boundary_segments() const { return boundary_; }
    const std::vector<Face>& faces() const { return faces_; }

    Point vertex(std::size_t c, int local) const { return vertices_[cells_[c][local]]; }
    double area(std::size_t c) const { return area_[c]; }
    Point centroid(std::size_t c) const;
    double edge_length(std::size_t c, int e) const { return length_[3 * c + e]; }
    /// Outward unit normal of local edge e.
    Point normal(std::size_t c, int e) const { return normal_[3 * c + e]; }
    double perimeter(std::size_t c) const;
    int face_of(std::size_t c, int e) const { return cell_face_[3 * c + e]; }
    /// Inverse of the reference Jacobian, row-major {a11, a12, a21, a22}.
    const std::array<double, 4>& inverse_jacobian(std::size_t c) const { return jinv_[c]; }

    Point to_physical(std::size_t c, double xi, double eta) const;
    double total_area() const;
    std::array<double, 4> bounding_box() const;  // xmin, ymin, xmax, ymax

private:
    void build();
    void pair_periodic(std::vector<int>& boundary_faces);

    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<BoundarySegment> boundary_;
    std::vector<Face> faces_;
    std::vector<int> cell_face_;
    std::vector<double> area_, length_;
    std::vector<Point> normal_;
    std::vector<std::array<double, 4>> jinv_;
};

Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

enum class Diagonal { Uniform, Alternating };

struct StructuredOptions {
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
    int nx = 2, ny = 2;
    Diagonal diagonal = Diagonal::Uniform;
    BoundaryTag left, right, bottom, top;  // default outflow
    bool periodic_x = false, periodic_y = false;
};

Mesh generate_structured(const StructuredOptions& opts);

/// Splits every cell into four by edge midpoints. Boundary tags are inherited.
Mesh refine_uniform(const Mesh& mesh);

/// Moves interior vertices by up to `amplitude` times the local spacing, keeping boundaries fixed.
Mesh perturb_vertices(const Mesh& mesh, double amplitude, std::uint64_t seed);

/// Rigid rotation x -> M x with M = [[cos, sin], [-sin, cos]]; connectivity and ordering unchanged.
Mesh rotate_mesh(const Mesh& mesh, double angle);

/// Edge lengths of a cell sorted descending; ties keep the lower local index first.
struct SortedEdges {
    std::array<double, 3> length;
    std::array<int, 3> local;  // local edge index of sorted entry i
};
SortedEdges sort_edges(const Mesh& mesh, std::size_t c);
SortedEdges sort_edges(const std::array<Point, 3>& tri);

}  // namespace oedg
