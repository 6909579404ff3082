#include "orlicz/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "orlicz/error.hpp"

namespace orlicz {

const char* to_string(PerturbationLaw law) noexcept {
    switch (law) {
        case PerturbationLaw::none: return "none";
        case PerturbationLaw::exponent: return "exponent";
        case PerturbationLaw::coefficient: return "coefficient";
        case PerturbationLaw::multiplier: return "multiplier";
    }
    return "unknown";
}

PerturbationLaw parse_perturbation_law(std::string_view name) {
    if (name == "none") return PerturbationLaw::none;
    if (name == "exponent") return PerturbationLaw::exponent;
    if (name == "coefficient") return PerturbationLaw::coefficient;
    if (name == "multiplier") return PerturbationLaw::multiplier;
    throw ConfigurationError("unknown perturbation law '" + std::string(name) + "'");
}

double perturbation_epsilon(int index) {
    if (index < 1) throw PreconditionError("perturbation index must be positive");
    return std::ldexp(1.0, -index);
}

double OperatorHandle::weight(const Point& x) const {
    if (!multiplier_) return 1.0;
    const double m = (*multiplier_)(x);
    if (!(std::abs(m) <= 1.0)) throw ConfigurationError("multiplier field must satisfy |m(x)| <= 1");
    return 1.0 + epsilon_ * m;
}

Point OperatorHandle::eval(const Point& x, const Point& xi) const {
    const double r = norm(xi);
    if (r == 0.0) return {};
    return xi * (potential_rate(x, r) / r);
}

std::string OperatorHandle::describe() const {
    std::ostringstream os;
    os << "A[" << phi_.describe() << "]";
    if (law_ != PerturbationLaw::none) os << " law=" << to_string(law_) << " i=" << index_ << " eps=" << epsilon_;
    if (multiplier_) os << " m=" << multiplier_->description();
    return os.str();
}

OperatorHandle canonical_operator(const PhiFunction& phi) {
    if (!phi.is_convex()) throw UnsupportedOperation("canonical operator needs a convex phi: " + phi.describe());
    return OperatorHandle(phi, phi);
}

OperatorHandle perturbed_operator(const OperatorHandle& base, int index, const Perturbation& law) {
    if (base.law() != PerturbationLaw::none) throw PreconditionError("perturbations apply to an unperturbed operator");
    const double eps = perturbation_epsilon(index);
    OperatorHandle out = base;
    out.law_ = law.law;
    out.index_ = index;
    out.epsilon_ = law.law == PerturbationLaw::none ? 0.0 : eps;
    switch (law.law) {
        case PerturbationLaw::none: break;
        case PerturbationLaw::exponent: out.phi_ = base.phi().with_exponent_shift(eps); break;
        case PerturbationLaw::coefficient: out.phi_ = base.phi().with_coefficient_shift(eps); break;
        case PerturbationLaw::multiplier: out.multiplier_ = law.multiplier; break;
    }
    if (!out.phi_.is_convex()) throw UnsupportedOperation("perturbed phi is not convex");
    return out;
}

std::vector<Point> unit_directions(int dimension, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    std::vector<Point> out;
    out.reserve(count);
    for (int k = 0; k < count; ++k) {
        if (dimension == 1) {
            out.emplace_back(k % 2 == 0 ? 1.0 : -1.0, 0.0);
            continue;
        }
        Point d;
        do d = Point{gauss(rng), gauss(rng)};
        while (norm(d) < 1e-8);
        out.push_back(d * (1.0 / norm(d)));
    }
    return out;
}

StructureCertificate certify_structure(const OperatorHandle& op, const PhiFunction& phi, const SamplingPlan& plan,
                                       int directions, std::uint64_t seed) {
    const auto ts = plan.t_grid();
    const auto dirs = unit_directions(plan.dimension, directions, seed);

    StructureCertificate cert;
    cert.c1 = std::numeric_limits<double>::infinity();
    cert.margin = std::numeric_limits<double>::infinity();
    std::vector<Point> xi;
    std::vector<Point> a;
    for (const auto& x : plan.points) {
        xi.clear();
        a.clear();
        for (const auto& d : dirs)
            for (double t : ts) {
                const Point v = d * t;
                const Point av = op.eval(x, v);
                const double f = phi.eval(x, t);
                if (!(f > 0.0)) throw DegenerateComparison("structure check: phi(x,|xi|) = 0 for xi != 0");
                cert.c1 = std::min(cert.c1, dot(av, v) / f);
                cert.c2 = std::max(cert.c2, norm(av) * t / f);
                xi.push_back(v);
                a.push_back(av);
                ++cert.samples;
            }
        for (std::size_t i = 0; i < xi.size(); ++i)
            for (std::size_t j = i + 1; j < xi.size(); ++j) {
                const Point dx = xi[i] - xi[j];
                const double d2 = dot(dx, dx);
                if (d2 == 0.0) continue;
                cert.margin = std::min(cert.margin, dot(a[i] - a[j], dx) / d2);
            }
    }
    std::ostringstream os;
    os << plan.describe() << "; " << dirs.size() << " directions (seed " << seed << ")";
    cert.description = os.str();
    cert.pass = cert.c1 > 0.0 && std::isfinite(cert.c2) && cert.margin > 0.0;
    return cert;
}

double convergence_gap(const OperatorHandle& op_i, const OperatorHandle& op, const Box& compact, double t_cap,
                       const SamplingPlan& plan, int directions, std::uint64_t seed) {
    if (!(t_cap > 0.0) || !std::isfinite(t_cap)) throw PreconditionError("convergence gap needs a finite t_cap > 0");
    auto ts = plan.t_grid();
    std::erase_if(ts, [&](double t) { return t > t_cap; });
    ts.push_back(t_cap);
    const auto dirs = unit_directions(plan.dimension, directions, seed);

    double gap = 0.0;
    std::size_t used = 0;
    for (const auto& x : plan.points) {
        if (!compact.contains(x, plan.dimension)) continue;
        ++used;
        for (const auto& d : dirs)
            for (double t : ts) gap = std::max(gap, norm(op_i.eval(x, d * t) - op.eval(x, d * t)));
    }
    if (used == 0) throw GeometryError("convergence gap: no plan point inside the compact set");
    return gap;
}

}  // namespace orlicz
