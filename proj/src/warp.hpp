#pragma once

#include <span>
#include <string>
#include <vector>

#include "chart.hpp"
#include "slant.hpp"

namespace slantgeo {

// Split of the parameters into base and fiber; their disjoint union must be
// the full parameter set.
struct WarpSplit {
    std::vector<int> base, fiber;
};

enum class WarpVerdict { riemannian_product, quasi_hemi_slant, neither };

const char* to_string(WarpVerdict v);

struct WarpGrid {
    std::vector<std::vector<double>> base_points;   // each sized base.size()
    std::vector<std::vector<double>> fiber_points;  // each sized fiber.size()
};

std::vector<double> assemble_point(const WarpSplit& split, std::span<const double> base_vals,
                                   std::span<const double> fiber_vals, int m);

// Block-structure analysis of the induced metric over a product grid:
// cross terms, fiber-independence of the base block, proportionality of the
// fiber block across base points, warping samples f (normalized to 1 at the
// first base point) and the finite-difference gradient of ln f.
struct WarpAnalysis {
    double cross_max_abs = 0.0;
    double cross_max_rel = 0.0;
    double base_independence = 0.0;      // max |G_base(b,f) - G_base(b,f_0)| relative
    double fiber_proportionality = 0.0;  // Frobenius residual, relative
    std::vector<double> f_samples;       // per base point
    std::vector<std::vector<double>> grad_lnf;  // per base point x base direction
    double max_grad_lnf = 0.0;
    bool structure_ok = false;
    double metric_scale = 1.0;  // largest metric entry seen, for relative residuals
};

WarpAnalysis analyze_warp(const ImmersionSpec& spec, const WarpSplit& split, const WarpGrid& grid,
                          double struct_tol, double fd_step, double rank_tol = 1e-9);

// Least-squares fiber-block ratio lambda(b) = f^2(b) / f^2(b_ref) over the
// fiber sample list.
double warp_lambda(const ImmersionSpec& spec, const WarpSplit& split,
                   std::span<const double> base_pt,
                   const std::vector<std::vector<double>>& fiber_points,
                   std::span<const double> ref_base_pt, double rank_tol = 1e-9);

// d/d(base_i) of ln f at base_pt, via the 4th-order central difference.
std::vector<double> grad_lnf_at(const ImmersionSpec& spec, const WarpSplit& split,
                                std::span<const double> base_pt,
                                const std::vector<std::vector<double>>& fiber_points,
                                std::span<const double> ref_base_pt, double fd_step,
                                double rank_tol = 1e-9);

// Residuals of nabla_{d_i} d_j = (d_i ln f) d_j over base directions i and
// fiber directions j, in the chart metric.
struct WarpConnectionResiduals {
    double worst = 0.0;
    int samples = 0;
};

WarpConnectionResiduals check_warp_connection(const ImmersionSpec& spec, const WarpSplit& split,
                                              const WarpGrid& grid, double fd_step,
                                              double rank_tol = 1e-9);

// Dichotomy for a verified quasi bi-slant warped product: either the warping
// function is constant (Riemannian product) or the second slant block is
// anti-invariant. The core scalar test is max |(d_i ln f) g(Z, phi W)| over
// base directions and second-block fiber probes, plus the strengthened form
// cos^2(theta2) |d_i ln f|.
struct DichotomyResult {
    WarpVerdict verdict = WarpVerdict::neither;
    double max_grad_lnf = 0.0;
    double theta2 = 0.0;
    double core_residual = 0.0;          // (X ln f) g(Z, phi W)
    double strengthened_residual = 0.0;  // cos^2(theta2) |grad ln f|
};

DichotomyResult dichotomy_check(const ImmersionSpec& spec, const DistributionAssignment& asg,
                                const WarpSplit& split, const WarpGrid& grid,
                                const WarpAnalysis& analysis, double theta2, double grad_tol,
                                double angle_tol, double rank_tol = 1e-9);

}  // namespace slantgeo
