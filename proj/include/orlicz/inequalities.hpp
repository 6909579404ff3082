#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/domain.hpp"
#include "orlicz/mesh.hpp"
#include "orlicz/phi_function.hpp"

namespace orlicz {

/// One measured estimate LHS <= C RHS, reported with C = 1.
///
/// The ratio is 0 when both sides vanish and +inf when only the right side
/// does; `note` says why in the second case.
struct InequalityReport {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    Point center;
    double radius = 0.0;
    double gamma = 0.0;  ///< exponent margin (higher integrability only)
    int resolution = 0;
    std::string note;

    bool finite() const noexcept;
};

struct Ball {
    Point center;
    double radius = 0.0;
};

/// Mean of phi(|grad u|) over B against the mean over 2B of
/// phi(|u - u_2B| / diam 2B) + phi(|psi - psi_2B| / diam 2B) + phi(|grad psi|).
/// Throws GeometryError unless 2B lies in the domain.
InequalityReport caccioppoli_interior(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& psi,
                                      const Ball& ball);

/// |B|^-1 of the integral of phi(|grad u|) over B n Omega against |2B|^-1 of
/// the integral of phi(|grad f|) + phi(|u - f| / diam 2B) over 2B n Omega.
/// Throws PreconditionError when the centre is outside the closed domain or
/// 2B does not reach the complement.
InequalityReport caccioppoli_boundary(const PhiFunction& phi, const DiscreteField& u, const DiscreteField& f,
                                      const Ball& ball);

/// Modular of grad u_i against the modular of grad f. With an obstacle the
/// data is first replaced by max(f, psi); the note records when that
/// changed anything.
InequalityReport energy_bound_check(const PhiFunction& phi_i, const DiscreteField& u_i, const DiscreteField& f,
                                    const std::optional<DiscreteField>& psi = std::nullopt);

/// For each gamma: the modular of phi(|grad u|)^{1+gamma} against
/// (modular of phi(|grad u|))^{1+gamma} plus the same powers for f and psi plus 1.
std::vector<InequalityReport> higher_integrability_margin(const PhiFunction& phi, const DiscreteField& u,
                                                          const DiscreteField& f,
                                                          const std::optional<DiscreteField>& psi,
                                                          const std::vector<double>& gammas);

/// Luxemburg norm of u / dist(., boundary) over the Luxemburg norm of grad u.
/// Throws PreconditionError unless u vanishes on boundary nodes.
InequalityReport hardy_check(const PhiFunction& phi, const DiscreteField& u);

/// Quadrature points of the part of `ball` inside the meshed domain: exact
/// clipping with three Gauss points per piece in 1D, centroids of an 8 x 8
/// sub-triangulation kept when inside the disc in 2D.
struct BallPoint {
    std::size_t cell;
    Point position;
    std::array<double, 3> barycentric;
    double weight;
};
std::vector<BallPoint> ball_points(const Mesh& mesh, const Ball& ball);

/// Lebesgue measure of the full ball (2r in 1D, pi r^2 in 2D).
double ball_measure(int dimension, double radius);

/// |value at fine / value at coarse|, or 1 when both vanish.
double refinement_ratio(double coarse, double fine);

}  // namespace orlicz
