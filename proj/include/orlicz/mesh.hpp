#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "orlicz/domain.hpp"
#include "orlicz/point.hpp"
#include "orlicz/scalar_field.hpp"

namespace orlicz {

/// Conforming simplicial mesh: segments in 1D, right triangles from a
/// structured square grid in 2D. Immutable; shared through `MeshPtr`.
class Mesh {
public:
    using Cell = std::array<int, 3>;  ///< 1D cells use the first two entries

    const DomainSpec& domain() const noexcept { return domain_; }
    int dimension() const noexcept { return domain_.dimension(); }
    int vertices_per_cell() const noexcept { return dimension() + 1; }
    int resolution() const noexcept { return resolution_; }
    /// Grid spacing (longest leg of a cell).
    double h() const noexcept { return h_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t cell_count() const noexcept { return cells_.size(); }

    const std::vector<Point>& nodes() const noexcept { return nodes_; }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    std::span<const int> cell_vertices(std::size_t c) const noexcept {
        return {cells_[c].data(), static_cast<std::size_t>(vertices_per_cell())};
    }
    const std::vector<double>& cell_measures() const noexcept { return measures_; }
    const std::vector<Point>& centroids() const noexcept { return centroids_; }
    /// Gradients of the barycentric (hat) functions of each cell's vertices.
    const std::array<Point, 3>& basis_gradients(std::size_t c) const noexcept { return basis_gradients_[c]; }
    const std::vector<bool>& boundary_mask() const noexcept { return boundary_; }
    bool is_boundary(std::size_t node) const noexcept { return boundary_[node]; }

    double total_measure() const noexcept;

    /// Assemble a mesh from explicit data (used by the text reader).
    static std::shared_ptr<const Mesh> from_data(const DomainSpec& domain, int resolution, std::vector<Point> nodes,
                                                 std::vector<Cell> cells);

private:
    friend std::shared_ptr<const Mesh> build_mesh(const DomainSpec& domain, int resolution);
    Mesh(const DomainSpec& domain, int resolution) : domain_(domain), resolution_(resolution) {}
    void finalize();

    DomainSpec domain_;
    int resolution_;
    double h_ = 0.0;
    std::vector<Point> nodes_;
    std::vector<Cell> cells_;
    std::vector<double> measures_;
    std::vector<Point> centroids_;
    std::vector<std::array<Point, 3>> basis_gradients_;
    std::vector<bool> boundary_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

/// Uniform mesh with `resolution` cells per unit side (per interval in 1D).
/// The L-shape rounds odd resolutions up so the re-entrant corner is a node.
MeshPtr build_mesh(const DomainSpec& domain, int resolution);

/// Quadrature point inside a cell: barycentric coordinates and weight.
struct SubcellPoint {
    Point position;
    std::array<double, 3> barycentric;
    double weight;
};

/// Centroids of the regular k-fold refinement of cell `c` (k sub-segments in
/// 1D, k^2 sub-triangles in 2D), each weighted by its measure.
std::vector<SubcellPoint> subcell_points(const Mesh& mesh, std::size_t c, int k);

/// Continuous piecewise-linear field given by nodal values.
class DiscreteField {
public:
    DiscreteField(MeshPtr mesh, std::vector<double> values);

    static DiscreteField constant(MeshPtr mesh, double value);
    static DiscreteField interpolate(MeshPtr mesh, const ScalarField& f);

    const MeshPtr& mesh() const noexcept { return mesh_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::size_t size() const noexcept { return values_.size(); }

    /// Exact gradient of the P1 interpolant on every cell.
    std::vector<Point> gradient() const;
    Point cell_gradient(std::size_t c) const;
    /// Interpolant value at each cell centroid.
    std::vector<double> centroid_values() const;
    double value_at(std::size_t c, const std::array<double, 3>& barycentric) const;

    DiscreteField operator-(const DiscreteField& other) const;
    DiscreteField operator+(const DiscreteField& other) const;
    DiscreteField scaled(double s) const;

    bool same_mesh(const DiscreteField& other) const noexcept { return mesh_ == other.mesh_; }

private:
    MeshPtr mesh_;
    std::vector<double> values_;
};

/// Cellwise Euclidean norms |g_c|.
std::vector<double> magnitudes(std::span<const Point> g);

/// Exact-ish gradient of a P1 field: convenience form of DiscreteField::gradient.
inline std::vector<Point> gradient(const DiscreteField& u) { return u.gradient(); }

/// Flat text format: header, node table, cell table, one value table per field.
void write_fields(std::ostream& os, const Mesh& mesh, const std::map<std::string, const DiscreteField*>& fields);

struct FieldBundle {
    MeshPtr mesh;
    std::map<std::string, DiscreteField> fields;
};
FieldBundle read_fields(std::istream& is);

}  // namespace orlicz
