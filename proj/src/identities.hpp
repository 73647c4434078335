#pragma once

#include <span>
#include <vector>

#include "chart.hpp"
#include "slant.hpp"

namespace slantgeo {

// Both sides of one identity evaluated at a point; the caller owns the
// residual policy. Fields are constant-coefficient combinations of the
// coordinate fields (so brackets vanish and extensions are canonical),
// given as coefficient vectors over the frame.
struct IdentitySides {
    double left = 0.0;
    double right = 0.0;
    double scale = 1.0;  // dominant term magnitude, for relative reporting

    double residual() const { return left > right ? left - right : right - left; }
};

// Connection identity for a proper two-slant-block structure:
//   g(nabla_X Y, phi Z) =
//     cos^2(t1) g(nabla_X QY, phi Z) + g(A_{w phi QY} phi Z, X) - sin^2(t1) g(A_{wZ} X, QY)
//   + cos^2(t2) g(nabla_X RY, phi Z) + g(A_{w phi RY} phi Z, X) - sin^2(t2) g(A_{wZ} X, RY)
//   + g(nperp_X wZ, w phi QY) + g(nperp_X wZ, w phi RY)
//   + g(A_{wQY} Z, X) + g(A_{wRY} Z, X)
// The two normal-connection terms use finite differences of the omega field.
IdentitySides connection_identity_sides(const ImmersionSpec& spec, const PointChart& chart,
                                        const DistributionAssignment& asg,
                                        std::span<const double> xc, std::span<const double> yc,
                                        std::span<const double> zc, double theta1, double theta2,
                                        double fd_step = 1e-4, double rank_tol = 1e-9);

// Bracket identity:
//   g([Y,Z], phi X) = g(A_{w phi Z} phi X, Y) - g(A_{w phi Y} phi X, Z)
//                   + g(nperp_Y wX, w phi Z) - g(nperp_Z wX, w phi Y)
//                   + g(A_{wZ} X, Y) - g(A_{wY} X, Z)
// The left side vanishes for coordinate fields.
IdentitySides bracket_identity_sides(const ImmersionSpec& spec, const PointChart& chart,
                                     const DistributionAssignment& asg,
                                     std::span<const double> xc, std::span<const double> yc,
                                     std::span<const double> zc, double fd_step = 1e-4,
                                     double rank_tol = 1e-9);

// Warped-product second-fundamental-form identities (no finite differences):
//   g(sigma(X,Y), wZ) = g(sigma(X,Z), wQY) + g(sigma(X,Z), wRY)
IdentitySides warp_sff_identity_sides(const PointChart& chart, const DistributionAssignment& asg,
                                      std::span<const double> xc, std::span<const double> yc,
                                      std::span<const double> zc);

//   g(sigma(X,Z), wW) = g(sigma(X,W), wQZ) + g(sigma(X,W), wRZ)
IdentitySides warp_sff_fiber_identity_sides(const PointChart& chart,
                                            const DistributionAssignment& asg,
                                            std::span<const double> xc,
                                            std::span<const double> zc,
                                            std::span<const double> wc);

// Adjointness of the tangential part of J:
//   skew      = max |<phi X, Y> + <X, phi Y>|   (holds on any submanifold)
//   symmetric = max |<phi X, Y> - <X, phi Y>|   (fails in general; reported
//                                                so the discrepancy is visible)
struct SkewnessResiduals {
    double skew = 0.0;
    double symmetric = 0.0;
};

SkewnessResiduals skewness_residuals(const PointChart& chart,
                                     std::span<const std::vector<double>> probes);

// omega of a constant-coefficient tangent field as an ambient field of the
// base point; used for the normal-connection finite differences.
AmbientField omega_field(const ImmersionSpec& spec, std::vector<double> coeff,
                         double rank_tol = 1e-9);

}  // namespace slantgeo
