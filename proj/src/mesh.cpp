#include "orlicz/mesh.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "orlicz/error.hpp"

namespace orlicz {

double Mesh::total_measure() const noexcept {
    // Pairwise-free Kahan sum keeps the 1e-12 total-measure invariant on fine meshes.
    double sum = 0.0;
    double carry = 0.0;
    for (double m : measures_) {
        const double y = m - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void Mesh::finalize() {
    const int nv = vertices_per_cell();
    measures_.resize(cells_.size());
    centroids_.resize(cells_.size());
    basis_gradients_.resize(cells_.size());
    h_ = 0.0;
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        if (nv == 2) {
            const Point& a = nodes_[cell[0]];
            const Point& b = nodes_[cell[1]];
            const double len = b.x - a.x;
            if (!(len > 0.0)) throw GeometryError("1D cell with non-positive length");
            measures_[c] = len;
            centroids_[c] = Point{0.5 * (a.x + b.x), 0.0};
            basis_gradients_[c] = {Point{-1.0 / len}, Point{1.0 / len}, Point{}};
            h_ = std::max(h_, len);
        } else {
            const Point& a = nodes_[cell[0]];
            const Point& b = nodes_[cell[1]];
            const Point& d = nodes_[cell[2]];
            const Point e1 = b - a;
            const Point e2 = d - a;
            const double det = e1.x * e2.y - e1.y * e2.x;
            if (!(det > 0.0)) throw GeometryError("triangle with non-positive orientation");
            measures_[c] = 0.5 * det;
            centroids_[c] = (a + b + d) * (1.0 / 3.0);
            // grad(lambda_1) = (e2.y, -e2.x)/det, grad(lambda_2) = (-e1.y, e1.x)/det.
            const Point g1{e2.y / det, -e2.x / det};
            const Point g2{-e1.y / det, e1.x / det};
            basis_gradients_[c] = {-(g1 + g2), g1, g2};
            h_ = std::max({h_, norm(e1), norm(e2), norm(b - d)});
        }
    }
    boundary_.resize(nodes_.size());
    const double tol = 1e-12 * std::max(1.0, domain_.diameter());
    for (std::size_t i = 0; i < nodes_.size(); ++i) boundary_[i] = domain_.on_boundary(nodes_[i], tol);
}

MeshPtr Mesh::from_data(const DomainSpec& domain, int resolution, std::vector<Point> nodes, std::vector<Cell> cells) {
    auto mesh = std::shared_ptr<Mesh>(new Mesh(domain, resolution));
    const int nv = domain.dimension() + 1;
    for (const auto& c : cells)
        for (int k = 0; k < nv; ++k)
            if (c[k] < 0 || static_cast<std::size_t>(c[k]) >= nodes.size())
                throw GeometryError("cell references a missing node");
    mesh->nodes_ = std::move(nodes);
    mesh->cells_ = std::move(cells);
    mesh->finalize();
    return mesh;
}

MeshPtr build_mesh(const DomainSpec& domain, int resolution) {
    if (resolution < 2) throw ConfigurationError("mesh resolution must be at least 2");
    auto mesh = std::shared_ptr<Mesh>(new Mesh(domain, resolution));
    const Box& b = domain.bounding_box();

    switch (domain.geometry()) {
        case Geometry::interval: {
            for (int i = 0; i <= resolution; ++i)
                mesh->nodes_.emplace_back(b.lo.x + (b.hi.x - b.lo.x) * i / resolution, 0.0);
            for (int i = 0; i < resolution; ++i) mesh->cells_.push_back({i, i + 1, 0});
            break;
        }
        case Geometry::rectangle:
        case Geometry::l_shape: {
            const bool l_shape = domain.geometry() == Geometry::l_shape;
            const int n = l_shape && resolution % 2 == 1 ? resolution + 1 : resolution;
            const Point corner = domain.reentrant_corner();
            std::vector<int> index((n + 1) * (n + 1), -1);
            auto grid_point = [&](int i, int j) {
                return Point{b.lo.x + (b.hi.x - b.lo.x) * i / n, b.lo.y + (b.hi.y - b.lo.y) * j / n};
            };
            auto removed = [&](int i, int j) {
                // Square (i, j) lies in the removed quadrant.
                return l_shape && 2 * i >= n && 2 * j >= n;
            };
            auto node = [&](int i, int j) {
                int& id = index[j * (n + 1) + i];
                if (id < 0) {
                    id = static_cast<int>(mesh->nodes_.size());
                    mesh->nodes_.push_back(grid_point(i, j));
                }
                return id;
            };
            // Nodes in lexicographic (y-major) order for determinism.
            for (int j = 0; j <= n; ++j)
                for (int i = 0; i <= n; ++i) {
                    const Point p = grid_point(i, j);
                    const bool used = !l_shape || !(p.x > corner.x + 1e-14 && p.y > corner.y + 1e-14);
                    if (used) node(i, j);
                }
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    if (removed(i, j)) continue;
                    const int v00 = node(i, j);
                    const int v10 = node(i + 1, j);
                    const int v01 = node(i, j + 1);
                    const int v11 = node(i + 1, j + 1);
                    mesh->cells_.push_back({v00, v10, v11});
                    mesh->cells_.push_back({v00, v11, v01});
                }
            break;
        }
    }
    mesh->finalize();
    return mesh;
}

std::vector<SubcellPoint> subcell_points(const Mesh& mesh, std::size_t c, int k) {
    if (k < 1) throw ConfigurationError("subcell refinement must be >= 1");
    const auto v = mesh.cell_vertices(c);
    const auto& nodes = mesh.nodes();
    const double measure = mesh.cell_measures()[c];
    std::vector<SubcellPoint> out;
    auto place = [&](double l1, double l2) {
        const double l0 = 1.0 - l1 - l2;
        Point p = nodes[v[0]] * l0 + nodes[v[1]] * l1;
        if (v.size() == 3) p += nodes[v[2]] * l2;
        return SubcellPoint{p, {l0, l1, l2}, 0.0};
    };
    if (mesh.dimension() == 1) {
        for (int i = 0; i < k; ++i) {
            SubcellPoint s = place((i + 0.5) / k, 0.0);
            s.weight = measure / k;
            out.push_back(s);
        }
        return out;
    }
    const double w = measure / (static_cast<double>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; i + j < k; ++j) {
            SubcellPoint up = place((i + 1.0 / 3.0) / k, (j + 1.0 / 3.0) / k);
            up.weight = w;
            out.push_back(up);
            if (i + j <= k - 2) {
                SubcellPoint down = place((i + 2.0 / 3.0) / k, (j + 2.0 / 3.0) / k);
                down.weight = w;
                out.push_back(down);
            }
        }
    return out;
}

DiscreteField::DiscreteField(MeshPtr mesh, std::vector<double> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (!mesh_) throw PreconditionError("field without a mesh");
    if (values_.size() != mesh_->node_count()) throw MeshMismatch("field size does not match the mesh node count");
    for (double v : values_)
        if (!std::isfinite(v)) throw PreconditionError("field values must be finite");
}

DiscreteField DiscreteField::constant(MeshPtr mesh, double value) {
    const std::size_t n = mesh->node_count();
    return DiscreteField(std::move(mesh), std::vector<double>(n, value));
}

DiscreteField DiscreteField::interpolate(MeshPtr mesh, const ScalarField& f) {
    std::vector<double> v;
    v.reserve(mesh->node_count());
    for (const auto& p : mesh->nodes()) v.push_back(f(p));
    return DiscreteField(std::move(mesh), std::move(v));
}

Point DiscreteField::cell_gradient(std::size_t c) const {
    const auto v = mesh_->cell_vertices(c);
    const auto& g = mesh_->basis_gradients(c);
    Point out;
    for (std::size_t k = 0; k < v.size(); ++k) out += g[k] * values_[v[k]];
    return out;
}

std::vector<Point> DiscreteField::gradient() const {
    std::vector<Point> out(mesh_->cell_count());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = cell_gradient(c);
    return out;
}

std::vector<double> DiscreteField::centroid_values() const {
    std::vector<double> out(mesh_->cell_count());
    const double w = 1.0 / mesh_->vertices_per_cell();
    for (std::size_t c = 0; c < out.size(); ++c) {
        double s = 0.0;
        for (int v : mesh_->cell_vertices(c)) s += values_[v];
        out[c] = s * w;
    }
    return out;
}

double DiscreteField::value_at(std::size_t c, const std::array<double, 3>& barycentric) const {
    const auto v = mesh_->cell_vertices(c);
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) s += barycentric[k] * values_[v[k]];
    return s;
}

DiscreteField DiscreteField::operator-(const DiscreteField& other) const {
    if (!same_mesh(other)) throw MeshMismatch("fields live on different meshes");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] - other.values_[i];
    return DiscreteField(mesh_, std::move(v));
}

DiscreteField DiscreteField::operator+(const DiscreteField& other) const {
    if (!same_mesh(other)) throw MeshMismatch("fields live on different meshes");
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = values_[i] + other.values_[i];
    return DiscreteField(mesh_, std::move(v));
}

DiscreteField DiscreteField::scaled(double s) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= s;
    return DiscreteField(mesh_, std::move(v));
}

std::vector<double> magnitudes(std::span<const Point> g) {
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = norm(g[i]);
    return out;
}

void write_fields(std::ostream& os, const Mesh& mesh, const std::map<std::string, const DiscreteField*>& fields) {
    const Box& b = mesh.domain().bounding_box();
    os << "# orlicz mesh/field table v1\n";
    os << std::setprecision(17);
    os << "domain " << to_string(mesh.domain().geometry()) << ' ' << b.lo.x << ' ' << b.lo.y << ' ' << b.hi.x << ' '
       << b.hi.y << '\n';
    os << "resolution " << mesh.resolution() << '\n';
    os << "nodes " << mesh.node_count() << '\n';
    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        os << i << ' ' << mesh.nodes()[i].x << ' ' << mesh.nodes()[i].y << ' ' << (mesh.is_boundary(i) ? 1 : 0)
           << '\n';
    os << "cells " << mesh.cell_count() << '\n';
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        os << c;
        for (int v : mesh.cell_vertices(c)) os << ' ' << v;
        os << '\n';
    }
    os << "fields " << fields.size() << '\n';
    for (const auto& [name, field] : fields) {
        if (field->mesh().get() != &mesh) throw MeshMismatch("field '" + name + "' is not on the written mesh");
        os << "field " << name << '\n';
        for (double v : field->values()) os << v << '\n';
    }
}

FieldBundle read_fields(std::istream& is) {
    auto fail = [](const std::string& what) -> void { throw ConfigurationError("field table: " + what); };
    std::string line;
    std::getline(is, line);
    if (line.rfind("# orlicz mesh/field table", 0) != 0) fail("missing header");

    std::string key;
    std::string geometry;
    Box box;
    int resolution = 0;
    is >> key >> geometry >> box.lo.x >> box.lo.y >> box.hi.x >> box.hi.y;
    if (key != "domain") fail("expected 'domain'");
    is >> key >> resolution;
    if (key != "resolution") fail("expected 'resolution'");

    DomainSpec domain = geometry == "interval"    ? DomainSpec::interval(box.lo.x, box.hi.x)
                        : geometry == "rectangle" ? DomainSpec::rectangle(box)
                                                  : DomainSpec::l_shape(box);
    if (geometry != "interval" && geometry != "rectangle" && geometry != "l_shape") fail("unknown geometry");

    std::size_t n = 0;
    is >> key >> n;
    if (key != "nodes") fail("expected 'nodes'");
    std::vector<Point> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t idx = 0;
        int boundary = 0;
        is >> idx >> nodes[i].x >> nodes[i].y >> boundary;
        if (!is || idx != i) fail("bad node row " + std::to_string(i));
    }
    std::size_t m = 0;
    is >> key >> m;
    if (key != "cells") fail("expected 'cells'");
    const int nv = domain.dimension() + 1;
    std::vector<Mesh::Cell> cells(m, Mesh::Cell{0, 0, 0});
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t idx = 0;
        is >> idx;
        for (int k = 0; k < nv; ++k) is >> cells[c][k];
        if (!is || idx != c) fail("bad cell row " + std::to_string(c));
    }
    FieldBundle out;
    out.mesh = Mesh::from_data(domain, resolution, std::move(nodes), std::move(cells));
    std::size_t k = 0;
    is >> key >> k;
    if (key != "fields") fail("expected 'fields'");
    for (std::size_t f = 0; f < k; ++f) {
        std::string name;
        is >> key >> name;
        if (key != "field") fail("expected 'field'");
        std::vector<double> values(n);
        for (auto& v : values) is >> v;
        if (!is) fail("truncated values for field '" + name + "'");
        out.fields.emplace(name, DiscreteField(out.mesh, std::move(values)));
    }
    return out;
}

}  // namespace orlicz
