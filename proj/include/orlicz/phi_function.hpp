#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/point.hpp"
#include "orlicz/scalar_field.hpp"

namespace orlicz {

enum class PhiFamily {
    power,              ///< scale * t^p
    variable_exponent,  ///< t^{p(x)}
    double_phase,       ///< t^p + a(x) t^q
    orlicz_log,         ///< t^p log(e + t)
    power_of,           ///< phi(x,t)^{1+delta}
    sum,                ///< phi_1 + ... + phi_k
    weighted,           ///< w(x) phi(x,t)
    conjugate,          ///< phi*(x,t), evaluated numerically
};

const char* to_string(PhiFamily family) noexcept;

/// Extended value: `capped` marks +infinity, represented by `kExtendedCap`.
struct PhiValue {
    static constexpr double kExtendedCap = 1e300;
    double value = 0.0;
    bool capped = false;
};

/// Tolerances for the numerical inverse and conjugate.
struct PhiTolerances {
    double inverse_abs = 1e-10;    ///< bisection width for phi^{-1}
    double conjugate_rel = 1e-12;  ///< golden-section width relative to the bracket
};

/// A generalized Phi-function phi : Omega x [0, inf) -> [0, inf].
///
/// Immutable value type backed by a shared expression tree, so copies are
/// cheap and evaluation is reentrant. Each instance carries the (aInc)_p /
/// (aDec)_q exponents it claims (`declared_p`, `declared_q`); those claims
/// are checked by the certification routines, never trusted.
class PhiFunction {
public:
    struct Node;

    static PhiFunction power(double p, double scale = 1.0);
    /// `p_lower` / `p_upper` are the claimed bounds of the exponent field;
    /// `p_infinity` (optional) is the limit exponent used by the (A2) witness.
    static PhiFunction variable_exponent(ScalarField exponent, double p_lower, double p_upper,
                                         std::optional<double> p_infinity = std::nullopt);
    static PhiFunction double_phase(double p, double q, ScalarField weight);
    static PhiFunction orlicz_log(double p);
    static PhiFunction power_of(const PhiFunction& inner, double delta);
    static PhiFunction sum(std::vector<PhiFunction> terms);
    static PhiFunction weighted(const PhiFunction& inner, ScalarField weight);
    static PhiFunction conjugate(const PhiFunction& inner);

    PhiFamily family() const noexcept;
    double declared_p() const noexcept;
    double declared_q() const noexcept;
    bool is_convex() const noexcept;
    std::string describe() const;

    /// phi(x, t); throws ConfigurationError on parameter-domain violations
    /// (negative weights, exponents below one) found at `x`.
    double eval(const Point& x, double t) const;
    PhiValue eval_extended(const Point& x, double t) const;

    /// Right derivative d/dt phi(x, t). Convex families only.
    double growth_rate(const Point& x, double t) const;
    /// Second derivative in t (right selection; may be +inf at t = 0).
    double growth_curvature(const Point& x, double t) const;

    /// Generalized inverse inf{t >= 0 : phi(x,t) >= tau} by monotone bisection.
    double inverse(const Point& x, double tau, const PhiTolerances& tol = {}) const;

    /// phi*(x, s) = sup_{t>0} (s t - phi(x,t)) by bracketing plus golden section.
    double conjugate_eval(const Point& x, double s, const PhiTolerances& tol = {}) const;
    /// Maximizer of s t - phi(x,t) (zero when the supremum is the t -> 0 limit).
    double conjugate_argmax(const Point& x, double s, const PhiTolerances& tol = {}) const;

    /// Exponent law: every power / variable-exponent atom gets p -> p + shift.
    PhiFunction with_exponent_shift(double shift) const;
    /// Coefficient law: every double-phase weight gets a -> a + shift.
    PhiFunction with_coefficient_shift(double shift) const;

    const Node& node() const noexcept { return *node_; }

private:
    explicit PhiFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// Free-function forms matching the operation names used across the project.
inline double eval(const PhiFunction& phi, const Point& x, double t) { return phi.eval(x, t); }
inline double eval_growth_rate(const PhiFunction& phi, const Point& x, double t) {
    return phi.growth_rate(x, t);
}
inline double inverse(const PhiFunction& phi, const Point& x, double tau, const PhiTolerances& tol = {}) {
    return phi.inverse(x, tau, tol);
}
inline double conjugate_eval(const PhiFunction& phi, const Point& x, double s,
                             const PhiTolerances& tol = {}) {
    return phi.conjugate_eval(x, s, tol);
}

/// Witness for condition (A2): phi(x, beta t) <= phi_inf(t) + h(x) and
/// phi_inf(beta t) <= phi(x, t) + h(x) on the sublevel sets {. <= s}.
struct A2Witness {
    PhiFunction phi_infinity;
    ScalarField h;
    double beta = 1.0;
    double s = 1.0;
};

/// The witness each built-in family ships with. Spatially constant families
/// use the identity witness; variable exponent needs `p_infinity`.
A2Witness canonical_a2_witness(const PhiFunction& phi, double s = 1.0);

}  // namespace orlicz
