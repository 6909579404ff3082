#include "orlicz/phi_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <variant>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

struct PowerAtom {
    double p;
    double scale;
};

struct VariableExponentAtom {
    ScalarField exponent;
    double p_lower;
    double p_upper;
    std::optional<double> p_infinity;
};

struct DoublePhaseAtom {
    double p;
    double q;
    ScalarField weight;
};

struct OrliczLogAtom {
    double p;
};

struct PowerOfNode {
    PhiFunction inner;
    double delta;
};

struct SumNode {
    std::vector<PhiFunction> terms;
};

struct WeightedNode {
    PhiFunction inner;
    ScalarField weight;
};

struct ConjugateNode {
    PhiFunction inner;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// t^e with the conventions needed at t = 0: 0^e = 0 for e > 0, 1 for e == 0,
// +inf for e < 0.
double pow0(double t, double e) {
    if (t == 0.0) return e > 0.0 ? 0.0 : (e == 0.0 ? 1.0 : kInf);
    return std::pow(t, e);
}

// c * t^e, treating c == 0 as an exact zero even where t^e is infinite.
double scaled_pow(double c, double t, double e) { return c == 0.0 ? 0.0 : c * pow0(t, e); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double exponent_at(const VariableExponentAtom& a, const Point& x) {
    const double p = a.exponent(x);
    if (!std::isfinite(p) || p < 1.0)
        throw ConfigurationError("variable exponent p(x) = " + fmt(p) + " outside [1, inf) at (" +
                                 fmt(x.x) + ", " + fmt(x.y) + ")");
    return p;
}

double weight_at(const ScalarField& w, const Point& x, const char* what) {
    const double v = w(x);
    if (!std::isfinite(v) || v < 0.0)
        throw ConfigurationError(std::string(what) + " = " + fmt(v) + " is negative or non-finite at (" +
                                 fmt(x.x) + ", " + fmt(x.y) + ")");
    return v;
}

}  // namespace

struct PhiFunction::Node {
    using Variant = std::variant<PowerAtom, VariableExponentAtom, DoublePhaseAtom, OrliczLogAtom,
                                 PowerOfNode, SumNode, WeightedNode, ConjugateNode>;
    Variant data;
    PhiFamily family;
    double declared_p;
    double declared_q;
    bool convex;
};

namespace {

bool spatially_constant(const PhiFunction& phi);

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

const char* to_string(PhiFamily family) noexcept {
    switch (family) {
        case PhiFamily::power: return "power";
        case PhiFamily::variable_exponent: return "variable_exponent";
        case PhiFamily::double_phase: return "double_phase";
        case PhiFamily::orlicz_log: return "orlicz_log";
        case PhiFamily::power_of: return "power_of";
        case PhiFamily::sum: return "sum";
        case PhiFamily::weighted: return "weighted";
        case PhiFamily::conjugate: return "conjugate";
    }
    return "unknown";
}

PhiFunction PhiFunction::power(double p, double scale) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigurationError("power family needs p >= 1, got " + fmt(p));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ConfigurationError("power family needs a positive scale, got " + fmt(scale));
    return PhiFunction(std::make_shared<const Node>(Node{PowerAtom{p, scale}, PhiFamily::power, p, p, true}));
}

PhiFunction PhiFunction::variable_exponent(ScalarField exponent, double p_lower, double p_upper,
                                           std::optional<double> p_infinity) {
    if (!(p_lower >= 1.0) || !(p_upper >= p_lower) || !std::isfinite(p_upper))
        throw ConfigurationError("variable exponent bounds need 1 <= p_lower <= p_upper < inf");
    if (p_infinity && !(*p_infinity >= 1.0))
        throw ConfigurationError("variable exponent p_infinity must be >= 1");
    return PhiFunction(std::make_shared<const Node>(
        Node{VariableExponentAtom{std::move(exponent), p_lower, p_upper, p_infinity},
             PhiFamily::variable_exponent, p_lower, p_upper, true}));
}

PhiFunction PhiFunction::double_phase(double p, double q, ScalarField weight) {
    if (!(p >= 1.0) || !(q >= p) || !std::isfinite(q))
        throw ConfigurationError("double phase needs 1 <= p <= q < inf, got p=" + fmt(p) + " q=" + fmt(q));
    if (auto c = weight.constant_value(); c && *c < 0.0)
        throw ConfigurationError("double phase weight a(x) must be non-negative");
    return PhiFunction(std::make_shared<const Node>(
        Node{DoublePhaseAtom{p, q, std::move(weight)}, PhiFamily::double_phase, p, q, true}));
}

PhiFunction PhiFunction::orlicz_log(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigurationError("orlicz-log family needs p >= 1");
    // t^p log(e+t) / t^{p+1} is decreasing, so (aDec)_{p+1} holds with L = 1.
    return PhiFunction(std::make_shared<const Node>(
        Node{OrliczLogAtom{p}, PhiFamily::orlicz_log, p, p + 1.0, true}));
}

PhiFunction PhiFunction::power_of(const PhiFunction& inner, double delta) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigurationError("power_of needs delta >= 0");
    const double e = 1.0 + delta;
    return PhiFunction(std::make_shared<const Node>(Node{PowerOfNode{inner, delta}, PhiFamily::power_of,
                                                         inner.declared_p() * e, inner.declared_q() * e,
                                                         inner.is_convex()}));
}

PhiFunction PhiFunction::sum(std::vector<PhiFunction> terms) {
    if (terms.empty()) throw ConfigurationError("sum family needs at least one term");
    double p = kInf;
    double q = 0.0;
    bool convex = true;
    for (const auto& t : terms) {
        p = std::min(p, t.declared_p());
        q = std::max(q, t.declared_q());
        convex = convex && t.is_convex();
    }
    return PhiFunction(std::make_shared<const Node>(Node{SumNode{std::move(terms)}, PhiFamily::sum, p, q, convex}));
}

PhiFunction PhiFunction::weighted(const PhiFunction& inner, ScalarField weight) {
    if (auto c = weight.constant_value(); c && !(*c > 0.0))
        throw ConfigurationError("weighted wrapper needs a positive weight");
    return PhiFunction(std::make_shared<const Node>(Node{WeightedNode{inner, std::move(weight)}, PhiFamily::weighted,
                                                         inner.declared_p(), inner.declared_q(),
                                                         inner.is_convex()}));
}

PhiFunction PhiFunction::conjugate(const PhiFunction& inner) {
    if (!inner.is_convex()) throw UnsupportedOperation("conjugate family needs a convex inner function");
    auto dual = [](double r) { return r > 1.0 ? r / (r - 1.0) : kInf; };
    // (aInc)_p <=> (aDec)_{p'} and (aDec)_q <=> (aInc)_{q'} for the conjugate.
    return PhiFunction(std::make_shared<const Node>(Node{ConjugateNode{inner}, PhiFamily::conjugate,
                                                         dual(inner.declared_q()), dual(inner.declared_p()),
                                                         true}));
}

PhiFamily PhiFunction::family() const noexcept { return node_->family; }
double PhiFunction::declared_p() const noexcept { return node_->declared_p; }
double PhiFunction::declared_q() const noexcept { return node_->declared_q; }
bool PhiFunction::is_convex() const noexcept { return node_->convex; }

std::string PhiFunction::describe() const {
    return std::visit(
        overloaded{
            [](const PowerAtom& a) {
                return (a.scale == 1.0 ? std::string() : fmt(a.scale) + "*") + "t^" + fmt(a.p);
            },
            [](const VariableExponentAtom& a) { return "t^(" + a.exponent.description() + ")"; },
            [](const DoublePhaseAtom& a) {
                return "t^" + fmt(a.p) + " + (" + a.weight.description() + ")*t^" + fmt(a.q);
            },
            [](const OrliczLogAtom& a) { return "t^" + fmt(a.p) + "*log(e+t)"; },
            [](const PowerOfNode& n) { return "(" + n.inner.describe() + ")^" + fmt(1.0 + n.delta); },
            [](const SumNode& n) {
                std::string s;
                for (std::size_t i = 0; i < n.terms.size(); ++i) s += (i ? " + " : "") + n.terms[i].describe();
                return "(" + s + ")";
            },
            [](const WeightedNode& n) { return "(" + n.weight.description() + ")*(" + n.inner.describe() + ")"; },
            [](const ConjugateNode& n) { return "conj(" + n.inner.describe() + ")"; },
        },
        node_->data);
}

double PhiFunction::eval(const Point& x, double t) const {
    if (!(t >= 0.0)) throw PreconditionError("phi evaluated at negative or NaN t");
    return std::visit(
        overloaded{
            [&](const PowerAtom& a) { return a.scale * pow0(t, a.p); },
            [&](const VariableExponentAtom& a) { return pow0(t, exponent_at(a, x)); },
            [&](const DoublePhaseAtom& a) {
                const double w = weight_at(a.weight, x, "double phase weight a(x)");
                return pow0(t, a.p) + scaled_pow(w, t, a.q);
            },
            [&](const OrliczLogAtom& a) { return pow0(t, a.p) * std::log(std::numbers::e + t); },
            [&](const PowerOfNode& n) { return pow0(n.inner.eval(x, t), 1.0 + n.delta); },
            [&](const SumNode& n) {
                double s = 0.0;
                for (const auto& term : n.terms) s += term.eval(x, t);
                return s;
            },
            [&](const WeightedNode& n) {
                return weight_at(n.weight, x, "weight w(x)") * n.inner.eval(x, t);
            },
            [&](const ConjugateNode& n) { return n.inner.conjugate_eval(x, t); },
        },
        node_->data);
}

PhiValue PhiFunction::eval_extended(const Point& x, double t) const {
    double v = 0.0;
    try {
        v = eval(x, t);
    } catch (const BracketExhausted&) {
        return {PhiValue::kExtendedCap, true};
    }
    if (!std::isfinite(v) || v >= PhiValue::kExtendedCap) return {PhiValue::kExtendedCap, true};
    return {v, false};
}

double PhiFunction::growth_rate(const Point& x, double t) const {
    if (!is_convex()) throw UnsupportedOperation("growth rate requested for non-convex " + describe());
    if (!(t >= 0.0)) throw PreconditionError("growth rate at negative t");
    return std::visit(
        overloaded{
            [&](const PowerAtom& a) { return a.scale * a.p * pow0(t, a.p - 1.0); },
            [&](const VariableExponentAtom& a) {
                const double p = exponent_at(a, x);
                return p * pow0(t, p - 1.0);
            },
            [&](const DoublePhaseAtom& a) {
                const double w = weight_at(a.weight, x, "double phase weight a(x)");
                return a.p * pow0(t, a.p - 1.0) + scaled_pow(w * a.q, t, a.q - 1.0);
            },
            [&](const OrliczLogAtom& a) {
                const double e = std::numbers::e;
                return a.p * pow0(t, a.p - 1.0) * std::log(e + t) + pow0(t, a.p) / (e + t);
            },
            [&](const PowerOfNode& n) {
                const double g = n.inner.eval(x, t);
                return scaled_pow((1.0 + n.delta) * n.inner.growth_rate(x, t), g, n.delta);
            },
            [&](const SumNode& n) {
                double s = 0.0;
                for (const auto& term : n.terms) s += term.growth_rate(x, t);
                return s;
            },
            [&](const WeightedNode& n) {
                return weight_at(n.weight, x, "weight w(x)") * n.inner.growth_rate(x, t);
            },
            // Danskin: the derivative of a supremum of affine maps is the maximizer.
            [&](const ConjugateNode& n) { return n.inner.conjugate_argmax(x, t); },
        },
        node_->data);
}

double PhiFunction::growth_curvature(const Point& x, double t) const {
    if (!is_convex()) throw UnsupportedOperation("curvature requested for non-convex " + describe());
    if (!(t >= 0.0)) throw PreconditionError("curvature at negative t");
    return std::visit(
        overloaded{
            [&](const PowerAtom& a) { return scaled_pow(a.scale * a.p * (a.p - 1.0), t, a.p - 2.0); },
            [&](const VariableExponentAtom& a) {
                const double p = exponent_at(a, x);
                return scaled_pow(p * (p - 1.0), t, p - 2.0);
            },
            [&](const DoublePhaseAtom& a) {
                const double w = weight_at(a.weight, x, "double phase weight a(x)");
                return scaled_pow(a.p * (a.p - 1.0), t, a.p - 2.0) +
                       scaled_pow(w * a.q * (a.q - 1.0), t, a.q - 2.0);
            },
            [&](const OrliczLogAtom& a) {
                const double e = std::numbers::e;
                return scaled_pow(a.p * (a.p - 1.0) * std::log(e + t), t, a.p - 2.0) +
                       2.0 * a.p * pow0(t, a.p - 1.0) / (e + t) - pow0(t, a.p) / ((e + t) * (e + t));
            },
            [&](const PowerOfNode& n) {
                const double g = n.inner.eval(x, t);
                const double g1 = n.inner.growth_rate(x, t);
                const double g2 = n.inner.growth_curvature(x, t);
                const double e = 1.0 + n.delta;
                return scaled_pow(e * n.delta * g1 * g1, g, n.delta - 1.0) + scaled_pow(e * g2, g, n.delta);
            },
            [&](const SumNode& n) {
                double s = 0.0;
                for (const auto& term : n.terms) s += term.growth_curvature(x, t);
                return s;
            },
            [&](const WeightedNode& n) {
                return weight_at(n.weight, x, "weight w(x)") * n.inner.growth_curvature(x, t);
            },
            [&](const ConjugateNode& n) {
                // (phi*)'' = 1 / phi''(argmax) for smooth strictly convex phi.
                const double tstar = n.inner.conjugate_argmax(x, t);
                const double c = n.inner.growth_curvature(x, tstar);
                return c > 0.0 ? 1.0 / c : kInf;
            },
        },
        node_->data);
}

double PhiFunction::inverse(const Point& x, double tau, const PhiTolerances& tol) const {
    if (!(tau >= 0.0)) throw PreconditionError("inverse needs tau >= 0");
    if (tau == 0.0) return 0.0;
    constexpr double kUpperLimit = 1e150;
    double hi = 1.0;
    while (eval(x, hi) < tau) {
        hi *= 2.0;
        if (hi > kUpperLimit)
            throw BracketExhausted("inverse: tau = " + fmt(tau) + " exceeds phi on [0, " + fmt(hi) + "]", 0.0, hi);
    }
    double lo = 0.0;
    // Invariant: phi(lo) < tau <= phi(hi). Width target is absolute, tightened
    // to relative below t = 1 so tiny inverses keep their digits.
    for (int it = 0; it < 2000; ++it) {
        const double width = hi - lo;
        if (width <= tol.inverse_abs * std::min(1.0, hi)) break;
        const double mid = lo + 0.5 * width;
        if (mid <= lo || mid >= hi) break;
        if (eval(x, mid) >= tau) hi = mid;
        else lo = mid;
    }
    return hi;
}

namespace {

struct ConjugateSolution {
    double value;
    double argmax;
};

ConjugateSolution maximize_conjugate(const PhiFunction& phi, const Point& x, double s, const PhiTolerances& tol) {
    if (!(s >= 0.0)) throw PreconditionError("conjugate needs s >= 0");
    if (s == 0.0) return {0.0, 0.0};
    auto objective = [&](double t) { return s * t - phi.eval(x, t); };

    // Bracket the maximizer of the (concave) objective by geometric scanning
    // from t = 1; the supremum also includes the t -> 0 limit value 0.
    constexpr double kTop = 1e120;
    constexpr double kBottom = 1e-120;
    double lo = 0.0;
    double hi = 0.0;
    if (objective(2.0) > objective(1.0)) {
        double a = 1.0;
        double mid = 2.0;
        double f_mid = objective(mid);
        for (;;) {
            const double next = 2.0 * mid;
            if (next > kTop)
                throw BracketExhausted("conjugate: s = " + fmt(s) + " exceeds the growth of " + phi.describe(), 0.0,
                                       next);
            const double f_next = objective(next);
            if (f_next <= f_mid) {
                lo = a;
                hi = next;
                break;
            }
            a = mid;
            mid = next;
            f_mid = f_next;
        }
    } else {
        double b = 2.0;
        double mid = 1.0;
        double f_mid = objective(mid);
        for (;;) {
            const double prev = 0.5 * mid;
            if (prev < kBottom) {
                lo = 0.0;
                hi = b;
                break;
            }
            const double f_prev = objective(prev);
            if (f_prev <= f_mid) {
                lo = prev;
                hi = b;
                break;
            }
            b = mid;
            mid = prev;
            f_mid = f_prev;
        }
    }

    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < 400 && (b - a) > tol.conjugate_rel * hi; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }
    const double t_best = fc >= fd ? c : d;
    const double f_best = std::max(fc, fd);
    if (f_best <= 0.0) return {0.0, f_best == 0.0 ? t_best : 0.0};
    return {f_best, t_best};
}

}  // namespace

double PhiFunction::conjugate_eval(const Point& x, double s, const PhiTolerances& tol) const {
    return maximize_conjugate(*this, x, s, tol).value;
}

double PhiFunction::conjugate_argmax(const Point& x, double s, const PhiTolerances& tol) const {
    return maximize_conjugate(*this, x, s, tol).argmax;
}

PhiFunction PhiFunction::with_exponent_shift(double shift) const {
    bool applied = false;
    auto rebuild = [&](const auto& self, const PhiFunction& phi) -> PhiFunction {
        return std::visit(
            overloaded{
                [&](const PowerAtom& a) {
                    applied = true;
                    return PhiFunction::power(a.p + shift, a.scale);
                },
                [&](const VariableExponentAtom& a) {
                    applied = true;
                    std::optional<double> pinf;
                    if (a.p_infinity) pinf = *a.p_infinity + shift;
                    return PhiFunction::variable_exponent(a.exponent.shifted(shift), a.p_lower + shift,
                                                          a.p_upper + shift, pinf);
                },
                [&](const DoublePhaseAtom&) { return phi; },
                [&](const OrliczLogAtom&) { return phi; },
                [&](const PowerOfNode& n) { return PhiFunction::power_of(self(self, n.inner), n.delta); },
                [&](const SumNode& n) {
                    std::vector<PhiFunction> terms;
                    for (const auto& t : n.terms) terms.push_back(self(self, t));
                    return PhiFunction::sum(std::move(terms));
                },
                [&](const WeightedNode& n) { return PhiFunction::weighted(self(self, n.inner), n.weight); },
                [&](const ConjugateNode& n) { return PhiFunction::conjugate(self(self, n.inner)); },
            },
            phi.node().data);
    };
    PhiFunction out = rebuild(rebuild, *this);
    if (!applied)
        throw ConfigurationError("exponent law needs a power or variable-exponent atom, got " + describe());
    return out;
}

PhiFunction PhiFunction::with_coefficient_shift(double shift) const {
    bool applied = false;
    auto rebuild = [&](const auto& self, const PhiFunction& phi) -> PhiFunction {
        return std::visit(
            overloaded{
                [&](const DoublePhaseAtom& a) {
                    applied = true;
                    return PhiFunction::double_phase(a.p, a.q, a.weight.shifted(shift));
                },
                [&](const PowerOfNode& n) { return PhiFunction::power_of(self(self, n.inner), n.delta); },
                [&](const SumNode& n) {
                    std::vector<PhiFunction> terms;
                    for (const auto& t : n.terms) terms.push_back(self(self, t));
                    return PhiFunction::sum(std::move(terms));
                },
                [&](const WeightedNode& n) { return PhiFunction::weighted(self(self, n.inner), n.weight); },
                [&](const ConjugateNode& n) { return PhiFunction::conjugate(self(self, n.inner)); },
                [&](const auto&) { return phi; },
            },
            phi.node().data);
    };
    PhiFunction out = rebuild(rebuild, *this);
    if (!applied) throw ConfigurationError("coefficient law needs a double-phase atom, got " + describe());
    return out;
}

namespace {

bool spatially_constant(const PhiFunction& phi) {
    return std::visit(overloaded{
                          [](const PowerAtom&) { return true; },
                          [](const OrliczLogAtom&) { return true; },
                          [](const VariableExponentAtom& a) { return a.exponent.constant_value().has_value(); },
                          [](const DoublePhaseAtom& a) { return a.weight.constant_value().has_value(); },
                          [](const PowerOfNode& n) { return spatially_constant(n.inner); },
                          [](const SumNode& n) {
                              return std::all_of(n.terms.begin(), n.terms.end(), spatially_constant);
                          },
                          [](const WeightedNode& n) {
                              return n.weight.constant_value().has_value() && spatially_constant(n.inner);
                          },
                          [](const ConjugateNode& n) { return spatially_constant(n.inner); },
                      },
                      phi.node().data);
}

// sup over 0 <= t <= T of (t^a - t^b)^+ for exponents a, b > 0.
double power_gap_sup(double a, double b, double T) {
    if (a == b || T <= 0.0) return 0.0;
    if (a < b) {
        // Positive on (0,1); interior maximizer (a/b)^{1/(b-a)} < 1.
        const double tstar = std::pow(a / b, 1.0 / (b - a));
        const double t = std::min(tstar, T);
        return std::max(0.0, std::pow(t, a) - std::pow(t, b));
    }
    // a > b: positive only on (1, inf), increasing there.
    return std::max(0.0, std::pow(T, a) - std::pow(T, b));
}

}  // namespace

A2Witness canonical_a2_witness(const PhiFunction& phi, double s) {
    if (!(s > 0.0)) throw ConfigurationError("(A2) witness needs s > 0");
    if (spatially_constant(phi)) return A2Witness{phi, ScalarField::constant(0.0), 1.0, s};

    if (const auto* a = std::get_if<VariableExponentAtom>(&phi.node().data)) {
        if (!a->p_infinity)
            throw UnsupportedOperation("variable exponent (A2) witness needs p_infinity");
        const double pinf = *a->p_infinity;
        ScalarField exponent = a->exponent;
        // With phi_inf = t^{p_inf} and beta = 1 both displayed inequalities
        // reduce to sup of a power gap over the relevant sublevel interval.
        auto h = ScalarField::from_function(
            [exponent, pinf, s](const Point& x) {
                const double px = exponent(x);
                const double first = power_gap_sup(px, pinf, std::pow(s, 1.0 / pinf));
                const double second = power_gap_sup(pinf, px, std::pow(s, 1.0 / px));
                return std::max(first, second) * (1.0 + 1e-12);
            },
            "h_varexp(p_inf=" + fmt(pinf) + ")");
        return A2Witness{PhiFunction::power(pinf), h, 1.0, s};
    }
    if (const auto* a = std::get_if<DoublePhaseAtom>(&phi.node().data)) {
        ScalarField weight = a->weight;
        const double bound = std::pow(s, a->q / a->p);
        auto h = ScalarField::from_function([weight, bound](const Point& x) { return weight(x) * bound; },
                                            "a(x)*s^(q/p)");
        return A2Witness{PhiFunction::power(a->p), h, 1.0, s};
    }
    throw UnsupportedOperation("no canonical (A2) witness for " + phi.describe());
}

}  // namespace orlicz
