#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/phi_function.hpp"
#include "orlicz/point.hpp"

namespace orlicz {

/// Where and on what grid structural conditions are checked.
///
/// The t-grid is log-spaced on [t_min, t_max] with `t_count` points.
/// `pair_count` random in-ball samples are drawn per (center, radius) for
/// the two-point condition (A1). When `bounds` is set, in-ball samples are
/// kept inside it.
struct SamplingPlan {
    int dimension = 1;
    std::vector<Point> points;
    double t_min = 1e-2;
    double t_max = 1e2;
    int t_count = 32;
    int pair_count = 64;
    std::optional<Box> bounds;
    /// Balls with radius below this value are rejected (mesh resolution).
    double min_radius = 0.0;
    std::uint64_t seed = 20240611;

    /// Evenly spread interior points of `box` (a row in 1D, a square lattice in 2D).
    static SamplingPlan on_box(const Box& box, int dimension, int spatial_count, double t_min = 1e-2,
                               double t_max = 1e2, int t_count = 32);

    std::vector<double> t_grid() const;
    void validate() const;
    std::string describe() const;
};

enum class Condition { a0, a1, a2, ainc_adec, domination };
const char* to_string(Condition c) noexcept;

struct ViolationSite {
    Point x;
    Point y;
    double t = 0.0;
    double amount = 0.0;
};

/// Immutable outcome of one sampled condition check.
struct GrowthCertificate {
    Condition condition = Condition::a0;
    double measured = 0.0;  ///< beta (A0/A1), worst excess (A2), max(L_p, L_q), or L
    std::map<std::string, double> parameters;
    std::string grid;
    bool pass = false;
    std::optional<ViolationSite> worst;
};

/// Whether phi(x, beta) <= 1 <= phi(x, 1/beta) at every plan point.
bool a0_holds(const PhiFunction& phi, const SamplingPlan& plan, double beta);

/// Largest beta in (0, 1] with phi(x,beta) <= 1 <= phi(x,1/beta) on the plan.
GrowthCertificate certify_a0(const PhiFunction& phi, const SamplingPlan& plan, double beta_min = 1e-3);

/// Minimal ratio phi^{-1}(y,t) / phi^{-1}(x,t) over sampled balls B centred at
/// plan points, x, y in B and t in [1, 1/|B|].
GrowthCertificate certify_a1(const PhiFunction& phi, const SamplingPlan& plan, const std::vector<double>& ball_radii,
                             double beta_min = 0.1);

/// Checks a supplied (A2) witness; does not search for one.
GrowthCertificate certify_a2(const PhiFunction& phi, const A2Witness& witness, const SamplingPlan& plan,
                             double tolerance = 1e-12);

/// Measured almost-monotonicity constants L_p of phi/t^p and L_q of phi/t^q.
GrowthCertificate certify_ainc_adec(const PhiFunction& phi, double p, double q, const SamplingPlan& plan,
                                    double ceiling = 1.05);

struct YoungOptions {
    double tolerance = 1e-9;
    /// Closed-form conjugate; the numerical conjugate is used when empty.
    std::function<double(const Point&, double)> conjugate;
};

struct YoungReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_excess = 0.0;  ///< max of st - phi(s) - phi*(t) - tol (1 + st)
    Point worst_x;
    double worst_s = 0.0;
    double worst_t = 0.0;
    /// phi*(x, phi(x,t)/t) <= phi(x,t): only checked for convex phi.
    std::size_t convex_checked = 0;
    std::size_t convex_violations = 0;
    double worst_convex_ratio = 0.0;
    bool pass() const noexcept { return violations == 0 && convex_violations == 0; }
};

YoungReport check_young(const PhiFunction& phi, const SamplingPlan& plan, const YoungOptions& options = {});

struct DominationResult {
    double l_forward = 0.0;          ///< sup_{t>=t0} phi_i / phi^{1+theta}
    double l_backward = 0.0;         ///< sup_{t>=t0} phi / phi_i^{1+theta}
    double additive_forward = 0.0;   ///< sup_t phi_i / (phi^{1+theta} + 1), all grid t
    double additive_backward = 0.0;  ///< sup_t phi / (phi_i^{1+theta} + 1)
    ViolationSite worst_forward;
    ViolationSite worst_backward;
};

DominationResult domination_constant(const PhiFunction& phi_i, const PhiFunction& phi, double theta, double t0,
                                     const SamplingPlan& plan);

}  // namespace orlicz
