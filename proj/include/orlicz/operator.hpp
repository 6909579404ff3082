#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "orlicz/certification.hpp"
#include "orlicz/phi_function.hpp"

namespace orlicz {

enum class PerturbationLaw { none, exponent, coefficient, multiplier };
const char* to_string(PerturbationLaw law) noexcept;
/// Accepts `none`, `exponent`, `coefficient`, `multiplier`.
PerturbationLaw parse_perturbation_law(std::string_view name);

/// Magnitude of the i-th perturbation, 2^{-i}.
double perturbation_epsilon(int index);

struct Perturbation {
    PerturbationLaw law = PerturbationLaw::none;
    /// Bounded factor m(x), |m| <= 1, used by the multiplier law.
    ScalarField multiplier = ScalarField::constant(1.0);
};

/// A(x, xi) = w(x) phi'(x, |xi|) xi / |xi|, the gradient in xi of the
/// potential w(x) phi(x, |xi|). The weight w is 1 + eps m(x) under the
/// multiplier law and 1 otherwise.
class OperatorHandle {
public:
    /// The growth function the operator is built on (phi_i for the exponent
    /// and coefficient laws, the base phi for the multiplier law).
    const PhiFunction& phi() const noexcept { return phi_; }
    const PhiFunction& base_phi() const noexcept { return base_; }
    PerturbationLaw law() const noexcept { return law_; }
    int index() const noexcept { return index_; }
    double epsilon() const noexcept { return epsilon_; }

    Point eval(const Point& x, const Point& xi) const;
    double weight(const Point& x) const;

    /// Potential F(x, r) and its first two derivatives in r = |xi|.
    double potential(const Point& x, double r) const { return weight(x) * phi_.eval(x, r); }
    double potential_rate(const Point& x, double r) const { return weight(x) * phi_.growth_rate(x, r); }
    double potential_curvature(const Point& x, double r) const { return weight(x) * phi_.growth_curvature(x, r); }

    std::string describe() const;

private:
    friend OperatorHandle canonical_operator(const PhiFunction& phi);
    friend OperatorHandle perturbed_operator(const OperatorHandle& base, int index, const Perturbation& law);
    OperatorHandle(PhiFunction phi, PhiFunction base) : phi_(std::move(phi)), base_(std::move(base)) {}

    PhiFunction phi_;
    PhiFunction base_;
    PerturbationLaw law_ = PerturbationLaw::none;
    int index_ = 0;
    double epsilon_ = 0.0;
    std::optional<ScalarField> multiplier_;
};

/// The phi-Laplacian operator of a convex phi.
OperatorHandle canonical_operator(const PhiFunction& phi);

/// i-th member of a perturbation sequence around an unperturbed operator.
OperatorHandle perturbed_operator(const OperatorHandle& base, int index, const Perturbation& law);

struct StructureCertificate {
    double c1 = 0.0;      ///< min A(x,xi).xi / phi(x,|xi|)
    double c2 = 0.0;      ///< max |A(x,xi)| |xi| / phi(x,|xi|)
    double margin = 0.0;  ///< min (A(xi) - A(eta)).(xi - eta) / |xi - eta|^2
    std::size_t samples = 0;
    std::string description;
    bool pass = false;
};

/// Samples xi = t d for t on the plan's grid and `directions` seeded unit
/// vectors d; monotonicity pairs are all distinct samples at each x.
StructureCertificate certify_structure(const OperatorHandle& op, const PhiFunction& phi, const SamplingPlan& plan,
                                       int directions = 16, std::uint64_t seed = 1234);

/// sup |A_i(x,xi) - A(x,xi)| over plan points in `compact` and |xi| <= t_cap.
double convergence_gap(const OperatorHandle& op_i, const OperatorHandle& op, const Box& compact, double t_cap,
                       const SamplingPlan& plan, int directions = 16, std::uint64_t seed = 1234);

/// Seeded unit vectors; in 1D these are +-1.
std::vector<Point> unit_directions(int dimension, int count, std::uint64_t seed);

}  // namespace orlicz
