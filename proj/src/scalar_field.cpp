#include "orlicz/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "orlicz/error.hpp"

namespace orlicz {

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

ScalarField ScalarField::constant(double value) {
    auto fn = std::make_shared<const std::function<double(const Point&)>>(
        [value](const Point&) { return value; });
    return ScalarField(std::move(fn), format_number(value), value);
}

ScalarField ScalarField::from_expression(const Expression& expression) {
    if (expression.is_constant()) {
        ScalarField f = constant(expression(Point{}));
        f.description_ = expression.text();
        return f;
    }
    auto fn = std::make_shared<const std::function<double(const Point&)>>(
        [expression](const Point& p) { return expression(p); });
    return ScalarField(std::move(fn), expression.text(), std::nullopt);
}

ScalarField ScalarField::from_grid(GridSamples s) {
    if (s.nx < 2 || s.ny < 1 || s.values.size() != static_cast<std::size_t>(s.nx) * s.ny)
        throw ConfigurationError("grid samples: need nx >= 2 and nx*ny values");
    if (s.ny > 1 && s.box.hi.y <= s.box.lo.y)
        throw ConfigurationError("grid samples: degenerate y range");
    if (s.box.hi.x <= s.box.lo.x) throw ConfigurationError("grid samples: degenerate x range");
    for (double v : s.values)
        if (!std::isfinite(v)) throw ConfigurationError("grid samples: non-finite value");

    const std::string description = "grid(" + std::to_string(s.nx) + "x" + std::to_string(s.ny) + ")";
    auto samples = std::make_shared<const GridSamples>(std::move(s));
    auto fn = std::make_shared<const std::function<double(const Point&)>>([samples](const Point& p) {
        const GridSamples& g = *samples;
        auto locate = [](double v, double lo, double hi, int n, int& i, double& frac) {
            const double u = std::clamp((v - lo) / (hi - lo), 0.0, 1.0) * (n - 1);
            i = std::min(static_cast<int>(u), n - 2);
            frac = u - i;
        };
        int i = 0;
        double fx = 0.0;
        locate(p.x, g.box.lo.x, g.box.hi.x, g.nx, i, fx);
        auto at = [&](int ix, int iy) { return g.values[static_cast<std::size_t>(iy) * g.nx + ix]; };
        if (g.ny == 1) return (1.0 - fx) * at(i, 0) + fx * at(i + 1, 0);
        int j = 0;
        double fy = 0.0;
        locate(p.y, g.box.lo.y, g.box.hi.y, g.ny, j, fy);
        return (1.0 - fx) * (1.0 - fy) * at(i, j) + fx * (1.0 - fy) * at(i + 1, j) +
               (1.0 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
    });
    return ScalarField(std::move(fn), description, std::nullopt);
}

ScalarField ScalarField::from_function(std::function<double(const Point&)> fn, std::string description) {
    return ScalarField(std::make_shared<const std::function<double(const Point&)>>(std::move(fn)),
                       std::move(description), std::nullopt);
}

ScalarField ScalarField::shifted(double delta) const {
    if (constant_) {
        ScalarField f = constant(*constant_ + delta);
        return f;
    }
    auto inner = fn_;
    auto fn = std::make_shared<const std::function<double(const Point&)>>(
        [inner, delta](const Point& p) { return (*inner)(p) + delta; });
    return ScalarField(std::move(fn), "(" + description_ + ")+" + format_number(delta), std::nullopt);
}

}  // namespace orlicz
