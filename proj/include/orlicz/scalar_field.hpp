#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/expression.hpp"
#include "orlicz/point.hpp"

namespace orlicz {

/// Samples of a coefficient on a regular grid over `box`; values are stored
/// x-fastest, `ny == 1` for one-dimensional data. Evaluated by (bi)linear
/// interpolation with clamping outside the box.
struct GridSamples {
    Box box;
    int nx = 0;
    int ny = 1;
    std::vector<double> values;
};

/// Immutable spatial coefficient x -> value (exponent fields, weights,
/// multipliers, boundary data). Cheap to copy.
class ScalarField {
public:
    ScalarField() : ScalarField(constant(0.0)) {}

    static ScalarField constant(double value);
    static ScalarField from_expression(const Expression& expression);
    static ScalarField from_expression(std::string_view text) {
        return from_expression(Expression::parse(text));
    }
    static ScalarField from_grid(GridSamples samples);
    static ScalarField from_function(std::function<double(const Point&)> fn,
                                     std::string description);

    double operator()(const Point& p) const { return (*fn_)(p); }

    /// Set for fields known to be spatially constant.
    std::optional<double> constant_value() const noexcept { return constant_; }
    const std::string& description() const noexcept { return description_; }

    /// Pointwise sum with a constant shift.
    ScalarField shifted(double delta) const;

private:
    ScalarField(std::shared_ptr<const std::function<double(const Point&)>> fn,
                std::string description, std::optional<double> constant)
        : fn_(std::move(fn)), description_(std::move(description)), constant_(constant) {}

    std::shared_ptr<const std::function<double(const Point&)>> fn_;
    std::string description_;
    std::optional<double> constant_;
};

}  // namespace orlicz
