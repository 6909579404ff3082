#include "orlicz/certification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> g;
    if (count == 1 || hi <= lo) return {lo};
    g.reserve(count);
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < count; ++i) g.push_back(std::exp(a + (b - a) * i / (count - 1)));
    g.front() = lo;
    g.back() = hi;
    return g;
}

double ball_measure(int dimension, double r) { return dimension == 1 ? 2.0 * r : std::numbers::pi * r * r; }

}  // namespace

const char* to_string(Condition c) noexcept {
    switch (c) {
        case Condition::a0: return "A0";
        case Condition::a1: return "A1";
        case Condition::a2: return "A2";
        case Condition::ainc_adec: return "aInc_aDec";
        case Condition::domination: return "domination";
    }
    return "unknown";
}

SamplingPlan SamplingPlan::on_box(const Box& box, int dimension, int spatial_count, double t_min, double t_max,
                                  int t_count) {
    SamplingPlan plan;
    plan.dimension = dimension;
    plan.t_min = t_min;
    plan.t_max = t_max;
    plan.t_count = t_count;
    plan.bounds = box;
    if (dimension == 1) {
        for (int i = 0; i < spatial_count; ++i) {
            const double s = (i + 0.5) / spatial_count;
            plan.points.emplace_back(box.lo.x + s * (box.hi.x - box.lo.x), 0.0);
        }
    } else {
        const int side = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spatial_count)))));
        for (int j = 0; j < side; ++j)
            for (int i = 0; i < side; ++i) {
                if (static_cast<int>(plan.points.size()) == spatial_count) break;
                plan.points.emplace_back(box.lo.x + (i + 0.5) / side * (box.hi.x - box.lo.x),
                                         box.lo.y + (j + 0.5) / side * (box.hi.y - box.lo.y));
            }
    }
    return plan;
}

std::vector<double> SamplingPlan::t_grid() const {
    validate();
    return log_grid(t_min, t_max, t_count);
}

void SamplingPlan::validate() const {
    if (points.empty()) throw ConfigurationError("sampling plan has no spatial points");
    if (!(t_min > 0.0) || !(t_max > t_min) || t_count < 2)
        throw ConfigurationError("sampling plan t-grid needs 0 < t_min < t_max and at least 2 points");
    if (dimension != 1 && dimension != 2) throw ConfigurationError("sampling plan dimension must be 1 or 2");
    if (bounds)
        for (const auto& p : points)
            if (!bounds->contains(p, dimension))
                throw ConfigurationError("sampling plan point outside the domain bounds");
}

std::string SamplingPlan::describe() const {
    std::ostringstream os;
    os.precision(6);
    os << points.size() << " points (dim " << dimension << ") x " << t_count << " log-t in [" << t_min << ", "
       << t_max << "], pairs " << pair_count << ", seed " << seed;
    return os.str();
}

bool a0_holds(const PhiFunction& phi, const SamplingPlan& plan, double beta) {
    if (!(beta > 0.0) || beta > 1.0) return false;
    // One part in 1e12 of slack so that e.g. 100 * 0.1^2 counts as 1.
    constexpr double slack = 1e-12;
    for (const auto& x : plan.points)
        if (!(phi.eval(x, beta) <= 1.0 + slack && phi.eval(x, 1.0 / beta) >= 1.0 - slack)) return false;
    return true;
}

GrowthCertificate certify_a0(const PhiFunction& phi, const SamplingPlan& plan, double beta_min) {
    plan.validate();
    // beta <= phi^{-1}(x,1) <= 1/beta at every x gives the candidate; the
    // direct inequality is then confirmed, backing off by one part in 1e9.
    double lower = kInf;
    double upper = 0.0;
    Point worst;
    for (const auto& x : plan.points) {
        const double r = phi.inverse(x, 1.0);
        if (r < lower) {
            lower = r;
            worst = x;
        }
        upper = std::max(upper, r);
    }
    double beta = std::min({1.0, lower, 1.0 / upper});
    int backoff = 0;
    while (beta > 0.0 && !a0_holds(phi, plan, beta) && backoff < 200) {
        beta *= 1.0 - 1e-9 * std::pow(2.0, backoff);
        ++backoff;
    }
    if (!a0_holds(phi, plan, beta)) beta = 0.0;

    GrowthCertificate cert;
    cert.condition = Condition::a0;
    cert.measured = beta;
    cert.parameters = {{"beta", beta}, {"beta_min", beta_min}, {"min_inverse_at_1", lower},
                       {"max_inverse_at_1", upper}};
    cert.grid = plan.describe();
    cert.pass = beta >= beta_min;
    cert.worst = ViolationSite{worst, worst, 1.0, beta};
    return cert;
}

GrowthCertificate certify_a1(const PhiFunction& phi, const SamplingPlan& plan, const std::vector<double>& ball_radii,
                             double beta_min) {
    plan.validate();
    if (ball_radii.empty()) throw ConfigurationError("(A1) needs at least one ball radius");
    for (double r : ball_radii)
        if (!(r > 0.0) || r < plan.min_radius)
            throw ConfigurationError("(A1) ball radius below the mesh resolution or non-positive");

    std::mt19937_64 rng(plan.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    double min_ratio = 1.0;
    ViolationSite worst{};
    std::size_t balls = 0;
    for (double r : ball_radii) {
        const double measure = ball_measure(plan.dimension, r);
        const double t_hi = std::max(1.0, 1.0 / measure);
        const std::vector<double> ts = log_grid(1.0, t_hi, t_hi > 1.0 ? plan.t_count : 1);
        for (const auto& c : plan.points) {
            std::vector<Point> samples{c};
            const double edge = 0.999 * r;
            samples.emplace_back(c.x - edge, c.y);
            samples.emplace_back(c.x + edge, c.y);
            if (plan.dimension == 2) {
                samples.emplace_back(c.x, c.y - edge);
                samples.emplace_back(c.x, c.y + edge);
            }
            for (int k = 0; k < plan.pair_count; ++k) {
                Point offset;
                do {
                    offset = Point{unit(rng), plan.dimension == 2 ? unit(rng) : 0.0};
                } while (norm(offset) > 1.0);
                samples.push_back(c + offset * r);
            }
            if (plan.bounds)
                std::erase_if(samples, [&](const Point& p) { return !plan.bounds->contains(p, plan.dimension); });
            if (samples.size() < 2) continue;
            ++balls;
            for (double t : ts) {
                double lo = kInf;
                double hi = 0.0;
                Point at_lo;
                Point at_hi;
                for (const auto& p : samples) {
                    const double v = phi.inverse(p, t);
                    if (v < lo) {
                        lo = v;
                        at_lo = p;
                    }
                    if (v > hi) {
                        hi = v;
                        at_hi = p;
                    }
                }
                const double ratio = hi > 0.0 ? lo / hi : 1.0;
                if (ratio < min_ratio) {
                    min_ratio = ratio;
                    worst = ViolationSite{at_hi, at_lo, t, ratio};
                }
            }
        }
    }
    if (balls == 0) throw ConfigurationError("(A1) no ball contained two in-domain samples");

    GrowthCertificate cert;
    cert.condition = Condition::a1;
    cert.measured = min_ratio;
    cert.parameters = {{"beta_min", beta_min}, {"balls", static_cast<double>(balls)}};
    for (std::size_t i = 0; i < ball_radii.size(); ++i) cert.parameters["radius_" + std::to_string(i)] = ball_radii[i];
    cert.grid = plan.describe();
    cert.pass = min_ratio >= beta_min;
    cert.worst = worst;
    return cert;
}

GrowthCertificate certify_a2(const PhiFunction& phi, const A2Witness& witness, const SamplingPlan& plan,
                             double tolerance) {
    plan.validate();
    if (!(witness.beta > 0.0) || witness.beta > 1.0 || !(witness.s > 0.0))
        throw WitnessInvalid("(A2) witness needs beta in (0,1] and s > 0");
    std::vector<double> h(plan.points.size());
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
        h[i] = witness.h(plan.points[i]);
        if (!std::isfinite(h[i]) || h[i] < 0.0) throw WitnessInvalid("(A2) witness h is not finite and non-negative");
    }

    const auto ts = plan.t_grid();
    double worst_excess = -kInf;
    ViolationSite worst{};
    std::size_t checked = 0;
    for (std::size_t i = 0; i < plan.points.size(); ++i) {
        const Point& x = plan.points[i];
        for (double t : ts) {
            const double finf = witness.phi_infinity.eval(x, t);
            if (finf <= witness.s) {
                const double excess = phi.eval(x, witness.beta * t) - finf - h[i];
                ++checked;
                if (excess > worst_excess) {
                    worst_excess = excess;
                    worst = ViolationSite{x, x, t, excess};
                }
            }
            const double fx = phi.eval(x, t);
            if (fx <= witness.s) {
                const double excess = witness.phi_infinity.eval(x, witness.beta * t) - fx - h[i];
                ++checked;
                if (excess > worst_excess) {
                    worst_excess = excess;
                    worst = ViolationSite{x, x, t, excess};
                }
            }
        }
    }

    GrowthCertificate cert;
    cert.condition = Condition::a2;
    cert.measured = checked ? worst_excess : 0.0;
    cert.parameters = {{"beta", witness.beta}, {"s", witness.s}, {"checked", static_cast<double>(checked)}};
    cert.grid = plan.describe();
    cert.pass = checked == 0 || worst_excess <= tolerance * (1.0 + witness.s);
    cert.worst = worst;
    return cert;
}

GrowthCertificate certify_ainc_adec(const PhiFunction& phi, double p, double q, const SamplingPlan& plan,
                                    double ceiling) {
    if (!(p > 1.0) || !(q >= p)) throw PreconditionError("(aInc)/(aDec) check needs 1 < p <= q");
    const auto ts = plan.t_grid();

    double lp = 1.0;
    double lq = 1.0;
    ViolationSite worst_p{};
    ViolationSite worst_q{};
    for (const auto& x : plan.points) {
        // L_p = max_{s<t} g(s)/g(t) for g = phi/t^p, via the running maximum.
        double run_max = 0.0;
        double run_min = kInf;
        for (double t : ts) {
            const double f = phi.eval(x, t);
            const double g = f / std::pow(t, p);
            const double h = f / std::pow(t, q);
            run_max = std::max(run_max, g);
            run_min = std::min(run_min, h);
            const double rp = g > 0.0 ? run_max / g : (run_max > 0.0 ? kInf : 1.0);
            const double rq = run_min > 0.0 ? h / run_min : (h > 0.0 ? kInf : 1.0);
            if (rp > lp) {
                lp = rp;
                worst_p = ViolationSite{x, x, t, rp};
            }
            if (rq > lq) {
                lq = rq;
                worst_q = ViolationSite{x, x, t, rq};
            }
        }
    }

    GrowthCertificate cert;
    cert.condition = Condition::ainc_adec;
    cert.measured = std::max(lp, lq);
    cert.parameters = {{"p", p}, {"q", q}, {"L_p", lp}, {"L_q", lq}, {"ceiling", ceiling}};
    cert.grid = plan.describe();
    cert.pass = std::isfinite(lp) && std::isfinite(lq) && lp <= ceiling && lq <= ceiling;
    cert.worst = lp >= lq ? worst_p : worst_q;
    return cert;
}

YoungReport check_young(const PhiFunction& phi, const SamplingPlan& plan, const YoungOptions& options) {
    const auto ts = plan.t_grid();
    auto conj = [&](const Point& x, double s) {
        return options.conjugate ? options.conjugate(x, s) : phi.conjugate_eval(x, s);
    };

    YoungReport report;
    report.worst_excess = -kInf;
    for (const auto& x : plan.points) {
        std::vector<double> f(ts.size());
        std::vector<double> fc(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            f[i] = phi.eval(x, ts[i]);
            fc[i] = conj(x, ts[i]);
        }
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const double st = ts[i] * ts[j];
                const double excess = st - f[i] - fc[j] - options.tolerance * (1.0 + st);
                ++report.checked;
                if (excess > 0.0) ++report.violations;
                if (excess > report.worst_excess) {
                    report.worst_excess = excess;
                    report.worst_x = x;
                    report.worst_s = ts[i];
                    report.worst_t = ts[j];
                }
            }
        if (phi.is_convex()) {
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (f[i] <= 0.0) continue;
                const double lhs = conj(x, f[i] / ts[i]);
                const double ratio = lhs / f[i];
                ++report.convex_checked;
                report.worst_convex_ratio = std::max(report.worst_convex_ratio, ratio);
                if (lhs > f[i] * (1.0 + options.tolerance)) ++report.convex_violations;
            }
        }
    }
    return report;
}

DominationResult domination_constant(const PhiFunction& phi_i, const PhiFunction& phi, double theta, double t0,
                                     const SamplingPlan& plan) {
    if (!(theta > 0.0)) throw PreconditionError("domination check needs theta > 0");
    if (!(t0 > 0.0)) throw PreconditionError("domination check needs t0 > 0");
    std::vector<double> ts = plan.t_grid();
    if (std::find(ts.begin(), ts.end(), t0) == ts.end()) ts.push_back(t0);
    std::sort(ts.begin(), ts.end());
    const double e = 1.0 + theta;

    DominationResult out;
    for (const auto& x : plan.points) {
        for (double t : ts) {
            const double a = phi_i.eval(x, t);
            const double b = phi.eval(x, t);
            out.additive_forward = std::max(out.additive_forward, a / (std::pow(b, e) + 1.0));
            out.additive_backward = std::max(out.additive_backward, b / (std::pow(a, e) + 1.0));
            if (t < t0) continue;
            if (a == 0.0 || b == 0.0)
                throw DegenerateComparison("domination check: phi vanishes at t = " + std::to_string(t) + " >= t0");
            const double fwd = a / std::pow(b, e);
            const double bwd = b / std::pow(a, e);
            if (fwd > out.l_forward) {
                out.l_forward = fwd;
                out.worst_forward = ViolationSite{x, x, t, fwd};
            }
            if (bwd > out.l_backward) {
                out.l_backward = bwd;
                out.worst_backward = ViolationSite{x, x, t, bwd};
            }
        }
    }
    return out;
}

}  // namespace orlicz
