#include "orlicz/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"experiment", {"id", "seed"}},
        {"domain", {"geometry", "box"}},
        {"mesh", {"resolution"}},
        {"phi", {"family", "p", "q", "a", "exponent", "p_lower", "p_upper", "p_infinity", "weight", "ainc_p", "adec_q"}},
        {"operator", {"law", "multiplier", "i_max", "t_cap"}},
        {"data", {"f", "psi"}},
        {"conditions", {"spatial_samples", "t_min", "t_max", "t_count", "directions", "beta_min", "a1_radii",
                        "a1_beta_min", "ceiling", "theta", "t0", "gamma_proxy", "delta", "alpha", "rho_target",
                        "compacts", "gammas", "balls", "boundary_balls"}},
        {"solver", {"max_iter", "tol_pg", "tol_vi_rel", "step_rule", "fixed_step", "initial", "armijo",
                    "hessian_floor"}},
        {"output", {"dir", "csv", "field"}},
    };
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end) return std::nullopt;
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto piece = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (!piece.empty()) out.push_back(piece);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string> words(std::string_view s) {
    std::istringstream is{std::string(s)};
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

/// Typed access to the property tree; every problem becomes a violation.
class Reader {
public:
    explicit Reader(const pt::ptree& root) : root_(root) {
        for (const auto& [name, sec] : root_) {
            const auto it = schema().find(name);
            if (it == schema().end()) {
                if (sec.empty() && !sec.data().empty()) fail("key '" + name + "' outside any section");
                else fail("unknown section '" + name + "'");
                continue;
            }
            for (const auto& [key, _] : sec)
                if (!it->second.contains(key)) fail("unknown key '" + name + "." + key + "'");
        }
    }

    bool has(const std::string& section) const { return root_.find(section) != root_.not_found(); }

    std::optional<std::string> text(const std::string& section, const std::string& key) const {
        if (auto v = root_.get_optional<std::string>(pt::ptree::path_type(section + "." + key, '.'))) return trim(*v);
        return std::nullopt;
    }

    double number(const std::string& section, const std::string& key, double fallback) {
        const auto t = text(section, key);
        if (!t) return fallback;
        if (auto v = to_double(*t)) return *v;
        fail(section + "." + key + ": '" + *t + "' is not a number");
        return fallback;
    }

    std::optional<double> optional_number(const std::string& section, const std::string& key) {
        const auto t = text(section, key);
        if (!t) return std::nullopt;
        if (auto v = to_double(*t)) return *v;
        fail(section + "." + key + ": '" + *t + "' is not a number");
        return std::nullopt;
    }

    double required_number(const std::string& section, const std::string& key) {
        if (!text(section, key)) {
            fail(section + "." + key + " is required");
            return 0.0;
        }
        return number(section, key, 0.0);
    }

    long long integer(const std::string& section, const std::string& key, long long fallback) {
        const auto t = text(section, key);
        if (!t) return fallback;
        long long v = 0;
        const auto r = std::from_chars(t->data(), t->data() + t->size(), v);
        if (r.ec == std::errc() && r.ptr == t->data() + t->size()) return v;
        fail(section + "." + key + ": '" + *t + "' is not an integer");
        return fallback;
    }

    std::vector<double> numbers(const std::string& section, const std::string& key, std::string_view text_value) {
        std::vector<double> out;
        for (const auto& w : words(text_value)) {
            if (auto v = to_double(w)) out.push_back(*v);
            else fail(section + "." + key + ": '" + w + "' is not a number");
        }
        return out;
    }

    std::optional<ScalarField> expression(const std::string& section, const std::string& key,
                                          std::optional<std::string> fallback = std::nullopt) {
        auto t = text(section, key);
        if (!t) t = fallback;
        if (!t) {
            fail(section + "." + key + " is required");
            return std::nullopt;
        }
        try {
            return ScalarField::from_expression(*t);
        } catch (const ExpressionError& e) {
            fail(section + "." + key + ": " + e.what() + " at position " + std::to_string(e.position()));
        }
        return std::nullopt;
    }

    void fail(std::string message) { violations.push_back(std::move(message)); }
    void require(bool ok, std::string message) {
        if (!ok) fail(std::move(message));
    }

    std::vector<std::string> violations;

private:
    const pt::ptree& root_;
};

DomainSpec read_domain(Reader& r, bool& ok) {
    ok = false;
    if (!r.has("domain")) {
        r.fail("missing section 'domain'");
        return DomainSpec::interval(0.0, 1.0);
    }
    const std::string geometry = r.text("domain", "geometry").value_or("interval");
    const bool one_d = geometry == "interval";
    const auto box = r.numbers("domain", "box", r.text("domain", "box").value_or(one_d ? "0 1" : "0 0 1 1"));
    try {
        if (geometry == "interval") {
            if (box.size() != 2) throw ConfigurationError("domain.box needs 2 numbers for an interval");
            ok = true;
            return DomainSpec::interval(box[0], box[1]);
        }
        if (geometry != "rectangle" && geometry != "l_shape")
            throw ConfigurationError("domain.geometry must be interval, rectangle or l_shape");
        if (box.size() != 4) throw ConfigurationError("domain.box needs 4 numbers (x0 y0 x1 y1)");
        const Box b{{box[0], box[1]}, {box[2], box[3]}};
        ok = true;
        return geometry == "rectangle" ? DomainSpec::rectangle(b) : DomainSpec::l_shape(b);
    } catch (const Error& e) {
        r.fail(e.what());
    }
    return DomainSpec::interval(0.0, 1.0);
}

std::optional<PhiFunction> read_phi(Reader& r) {
    if (!r.has("phi")) {
        r.fail("missing section 'phi'");
        return std::nullopt;
    }
    const auto family = r.text("phi", "family");
    if (!family) {
        r.fail("phi.family is required");
        return std::nullopt;
    }
    const std::size_t before = r.violations.size();
    std::optional<PhiFunction> phi;
    try {
        if (*family == "power") {
            const double p = r.required_number("phi", "p");
            if (r.violations.size() == before) phi = PhiFunction::power(p);
        } else if (*family == "double_phase") {
            const double p = r.required_number("phi", "p");
            const double q = r.required_number("phi", "q");
            const auto a = r.expression("phi", "a");
            if (r.violations.size() == before) phi = PhiFunction::double_phase(p, q, *a);
        } else if (*family == "variable_exponent") {
            const auto e = r.expression("phi", "exponent");
            const double lo = r.required_number("phi", "p_lower");
            const double hi = r.required_number("phi", "p_upper");
            const auto inf = r.optional_number("phi", "p_infinity");
            if (r.violations.size() == before) phi = PhiFunction::variable_exponent(*e, lo, hi, inf);
        } else if (*family == "orlicz_log") {
            const double p = r.required_number("phi", "p");
            if (r.violations.size() == before) phi = PhiFunction::orlicz_log(p);
        } else {
            r.fail("phi.family '" + *family + "' is not one of power, double_phase, variable_exponent, orlicz_log");
        }
        if (phi && r.text("phi", "weight")) {
            if (auto w = r.expression("phi", "weight")) phi = PhiFunction::weighted(*phi, *w);
        }
    } catch (const Error& e) {
        r.fail(std::string("phi: ") + e.what());
        phi.reset();
    }
    return phi;
}

std::vector<Box> read_boxes(Reader& r, const std::string& key, int dim) {
    std::vector<Box> out;
    const auto t = r.text("conditions", key);
    if (!t) return out;
    for (const auto& piece : split(*t, ',')) {
        const auto v = r.numbers("conditions", key, piece);
        if (dim == 1 && v.size() == 2) out.push_back(Box{{v[0], 0.0}, {v[1], 0.0}});
        else if (dim == 2 && v.size() == 4) out.push_back(Box{{v[0], v[1]}, {v[2], v[3]}});
        else r.fail("conditions." + key + ": '" + piece + "' needs " + (dim == 1 ? "2" : "4") + " numbers");
    }
    return out;
}

std::vector<Ball> read_balls(Reader& r, const std::string& key, int dim) {
    std::vector<Ball> out;
    const auto t = r.text("conditions", key);
    if (!t) return out;
    for (const auto& piece : split(*t, ',')) {
        const auto v = r.numbers("conditions", key, piece);
        if (dim == 1 && v.size() == 2) out.push_back(Ball{{v[0], 0.0}, v[1]});
        else if (dim == 2 && v.size() == 3) out.push_back(Ball{{v[0], v[1]}, v[2]});
        else r.fail("conditions." + key + ": '" + piece + "' needs " + (dim == 1 ? "2" : "3") + " numbers");
    }
    for (const auto& b : out) r.require(b.radius > 0.0, "conditions." + key + ": radius must be positive");
    return out;
}

/// The middle half of the bounding box, or for the L-shape the middle half
/// of its lower-left quadrant.
Box default_compact(const DomainSpec& d) {
    Box b = d.bounding_box();
    if (d.geometry() == Geometry::l_shape) b.hi = 0.5 * (b.lo + b.hi);
    const Point size = b.hi - b.lo;
    Box k{b.lo + size * 0.25, b.lo + size * 0.75};
    if (d.dimension() == 1) k.lo.y = k.hi.y = 0.0;
    return k;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree root;
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error& e) {
        throw SchemaError({std::string("malformed document: ") + e.message() + " (line " + std::to_string(e.line()) + ")"});
    }
    Reader r(root);
    ExperimentConfig cfg;

    cfg.id = r.text("experiment", "id").value_or("experiment");
    const long long seed = r.integer("experiment", "seed", 1234);
    r.require(seed >= 0, "experiment.seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);

    bool domain_ok = false;
    cfg.domain = read_domain(r, domain_ok);
    const int dim = cfg.domain.dimension();

    if (!r.has("mesh")) r.fail("missing section 'mesh'");
    cfg.resolution = static_cast<int>(r.integer("mesh", "resolution", 32));
    r.require(cfg.resolution >= 2, "mesh.resolution must be at least 2");

    if (auto phi = read_phi(r)) {
        cfg.phi = *phi;
        cfg.ainc_p = r.number("phi", "ainc_p", phi->declared_p());
        cfg.adec_q = r.number("phi", "adec_q", phi->declared_q());
        r.require(cfg.ainc_p >= 1.0 && cfg.adec_q >= cfg.ainc_p, "phi: need 1 <= ainc_p <= adec_q");
        if (!phi->is_convex()) r.fail("phi: the operator needs a convex phi");
    }

    const std::string law = r.text("operator", "law").value_or("none");
    try {
        cfg.perturbation.law = parse_perturbation_law(law);
    } catch (const ConfigurationError& e) {
        r.fail(std::string("operator.law: ") + e.what());
    }
    if (auto m = r.expression("operator", "multiplier", std::string("1"))) cfg.perturbation.multiplier = *m;
    cfg.i_max = static_cast<int>(r.integer("operator", "i_max", 8));
    r.require(cfg.i_max >= 4, "operator.i_max must be at least 4");
    cfg.t_cap = r.number("operator", "t_cap", 10.0);
    r.require(cfg.t_cap > 0.0, "operator.t_cap must be positive");

    if (!r.has("data")) r.fail("missing section 'data'");
    else {
        if (r.expression("data", "f")) cfg.f_text = *r.text("data", "f");
        if (auto psi = r.text("data", "psi"); psi && *psi != "none") {
            if (r.expression("data", "psi")) cfg.psi_text = *psi;
        }
    }

    const std::string c = "conditions";
    cfg.spatial_samples = static_cast<int>(r.integer(c, "spatial_samples", cfg.spatial_samples));
    r.require(cfg.spatial_samples >= 1, "spatial_samples must be positive");
    cfg.t_min = r.number(c, "t_min", cfg.t_min);
    cfg.t_max = r.number(c, "t_max", cfg.t_max);
    r.require(cfg.t_min > 0.0 && cfg.t_max > cfg.t_min, "need 0 < t_min < t_max");
    cfg.t_count = static_cast<int>(r.integer(c, "t_count", cfg.t_count));
    r.require(cfg.t_count >= 2, "t_count must be at least 2");
    cfg.directions = static_cast<int>(r.integer(c, "directions", cfg.directions));
    r.require(cfg.directions >= 1, "directions must be positive");
    cfg.beta_min = r.number(c, "beta_min", cfg.beta_min);
    r.require(cfg.beta_min > 0.0 && cfg.beta_min <= 1.0, "beta_min must lie in (0, 1]");
    if (auto t = r.text(c, "a1_radii")) cfg.a1_radii = r.numbers(c, "a1_radii", *t);
    for (double rad : cfg.a1_radii) r.require(rad > 0.0, "a1_radii must be positive");
    cfg.a1_beta_min = r.number(c, "a1_beta_min", cfg.a1_beta_min);
    r.require(cfg.a1_beta_min > 0.0 && cfg.a1_beta_min <= 1.0, "a1_beta_min must lie in (0, 1]");
    cfg.ceiling = r.number(c, "ceiling", cfg.ceiling);
    r.require(cfg.ceiling >= 1.0, "ceiling must be at least 1");
    cfg.theta = r.optional_number(c, "theta");
    if (cfg.theta) r.require(*cfg.theta > 0.0, "theta must be positive");
    cfg.t0 = r.number(c, "t0", cfg.t0);
    r.require(cfg.t0 > 0.0, "t0 must be positive");
    cfg.gamma_proxy = r.number(c, "gamma_proxy", cfg.gamma_proxy);
    r.require(cfg.gamma_proxy > 0.0, "gamma_proxy must be positive");
    cfg.delta = r.number(c, "delta", cfg.delta);
    r.require(cfg.delta > 0.0, "delta must be positive");
    if (cfg.delta > 0.0 && !cfg.theta)
        r.require(cfg.delta < cfg.gamma_proxy / 4.0, "delta must be below gamma_proxy/4 when theta is scheduled");
    cfg.alpha = r.number(c, "alpha", cfg.alpha);
    r.require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, "alpha must lie in (0, 1]");
    cfg.rho_target = r.number(c, "rho_target", cfg.rho_target);
    r.require(cfg.rho_target > 0.0, "rho_target must be positive");
    if (auto t = r.text(c, "gammas")) cfg.gammas = r.numbers(c, "gammas", *t);
    for (double g : cfg.gammas) r.require(g > 0.0 && g < 1.0, "gammas must lie in (0, 1)");
    if (domain_ok) {
        cfg.compacts = read_boxes(r, "compacts", dim);
        if (cfg.compacts.empty()) cfg.compacts.push_back(default_compact(cfg.domain));
        for (const auto& k : cfg.compacts)
            r.require(cfg.domain.contains_box(k, 0.0), "conditions.compacts: compact set outside the domain");
        cfg.balls = read_balls(r, "balls", dim);
        cfg.boundary_balls = read_balls(r, "boundary_balls", dim);
    }

    const std::string s = "solver";
    cfg.solver = SolverConfig::defaults(dim);
    cfg.solver.max_iter = static_cast<int>(r.integer(s, "max_iter", cfg.solver.max_iter));
    r.require(cfg.solver.max_iter >= 1, "solver.max_iter must be positive");
    cfg.solver.tol_pg = r.number(s, "tol_pg", cfg.solver.tol_pg);
    r.require(cfg.solver.tol_pg > 0.0, "solver.tol_pg must be positive");
    cfg.solver.tol_vi_rel = r.number(s, "tol_vi_rel", cfg.solver.tol_vi_rel);
    r.require(cfg.solver.tol_vi_rel > 0.0, "solver.tol_vi_rel must be positive");
    cfg.solver.fixed_step = r.number(s, "fixed_step", cfg.solver.fixed_step);
    r.require(cfg.solver.fixed_step > 0.0, "solver.fixed_step must be positive");
    cfg.solver.armijo = r.number(s, "armijo", cfg.solver.armijo);
    r.require(cfg.solver.armijo > 0.0 && cfg.solver.armijo < 1.0, "solver.armijo must lie in (0, 1)");
    cfg.solver.hessian_floor = r.number(s, "hessian_floor", cfg.solver.hessian_floor);
    r.require(cfg.solver.hessian_floor > 0.0, "solver.hessian_floor must be positive");
    try {
        if (auto t = r.text(s, "step_rule")) cfg.solver.step_rule = parse_step_rule(*t);
        if (auto t = r.text(s, "initial")) cfg.solver.initial = parse_initial_rule(*t);
    } catch (const ConfigurationError& e) {
        r.fail(std::string("solver: ") + e.what());
    }

    cfg.out_dir = r.text("output", "dir").value_or("out");
    cfg.csv_name = r.text("output", "csv").value_or("report.csv");
    cfg.field_name = r.text("output", "field").value_or("solution.txt");

    if (!r.violations.empty()) throw SchemaError(std::move(r.violations));
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot read configuration file '" + path.string() + "'");
    return parse_config(in);
}

SamplingPlan sampling_plan(const ExperimentConfig& cfg) {
    const DomainSpec& d = cfg.domain;
    SamplingPlan plan = SamplingPlan::on_box(d.bounding_box(), d.dimension(), cfg.spatial_samples, cfg.t_min,
                                             cfg.t_max, cfg.t_count);
    std::erase_if(plan.points, [&](const Point& p) { return d.dimension() == 2 && d.distance_to_boundary(p) <= 0.0; });
    plan.bounds = d.bounding_box();
    plan.seed = cfg.seed;
    plan.min_radius = 1.0 / cfg.resolution;
    return plan;
}

ObstacleProblem make_problem(const ExperimentConfig& cfg) {
    const MeshPtr mesh = build_mesh(cfg.domain, cfg.resolution);
    std::optional<DiscreteField> psi;
    if (cfg.psi_text) psi = DiscreteField::interpolate(mesh, ScalarField::from_expression(*cfg.psi_text));
    return ObstacleProblem{mesh,
                           cfg.phi,
                           canonical_operator(cfg.phi),
                           DiscreteField::interpolate(mesh, ScalarField::from_expression(cfg.f_text)),
                           std::move(psi),
                           cfg.solver};
}

StabilityExperiment make_experiment(const ExperimentConfig& cfg) {
    StabilityExperiment e;
    e.id = cfg.id;
    e.domain = cfg.domain;
    e.resolution = cfg.resolution;
    e.phi = cfg.phi;
    e.perturbation = cfg.perturbation;
    e.i_max = cfg.i_max;
    e.f = ScalarField::from_expression(cfg.f_text);
    if (cfg.psi_text) e.psi = ScalarField::from_expression(*cfg.psi_text);
    e.delta = cfg.delta;
    e.alpha = cfg.alpha;
    e.gamma_proxy = cfg.gamma_proxy;
    e.theta = cfg.theta;
    e.t0 = cfg.t0;
    e.t_cap = cfg.t_cap;
    e.rho_target = cfg.rho_target;
    e.compacts = cfg.compacts;
    e.gammas = cfg.gammas;
    e.plan = sampling_plan(cfg);
    e.solver = cfg.solver;
    return e;
}

}  // namespace orlicz
