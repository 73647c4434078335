#include "warp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slantgeo {

const char* to_string(WarpVerdict v) {
    switch (v) {
        case WarpVerdict::riemannian_product: return "RIEMANNIAN_PRODUCT";
        case WarpVerdict::quasi_hemi_slant: return "QUASI_HEMI_SLANT";
        case WarpVerdict::neither: return "NEITHER";
    }
    return "?";
}

std::vector<double> assemble_point(const WarpSplit& split, std::span<const double> base_vals,
                                   std::span<const double> fiber_vals, int m) {
    std::vector<double> p(static_cast<std::size_t>(m), 0.0);
    for (std::size_t k = 0; k < split.base.size(); ++k)
        p[static_cast<std::size_t>(split.base[k])] = base_vals[k];
    for (std::size_t k = 0; k < split.fiber.size(); ++k)
        p[static_cast<std::size_t>(split.fiber[k])] = fiber_vals[k];
    return p;
}

namespace {

// fiber-block and base-block of the Gram matrix at an assembled point
struct MetricBlocks {
    Mat fiber;  // |fiber| x |fiber|
    Mat base;   // |base| x |base|
    double cross_abs = 0.0;
    double cross_rel = 0.0;
    double scale = 0.0;
};

MetricBlocks metric_blocks(const ImmersionSpec& spec, const WarpSplit& split,
                           std::span<const double> base_vals, std::span<const double> fiber_vals,
                           double rank_tol) {
    const int m = spec.param_count();
    const auto p = assemble_point(split, base_vals, fiber_vals, m);
    const PointChart ch = evaluate_chart(spec, p, rank_tol);

    MetricBlocks mb;
    const int nb = static_cast<int>(split.base.size());
    const int nf = static_cast<int>(split.fiber.size());
    mb.base = Mat(nb, nb);
    mb.fiber = Mat(nf, nf);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            mb.base(i, j) = ch.gram(split.base[static_cast<std::size_t>(i)],
                                    split.base[static_cast<std::size_t>(j)]);
    for (int i = 0; i < nf; ++i)
        for (int j = 0; j < nf; ++j)
            mb.fiber(i, j) = ch.gram(split.fiber[static_cast<std::size_t>(i)],
                                     split.fiber[static_cast<std::size_t>(j)]);
    for (double v : ch.gram.a) mb.scale = std::max(mb.scale, std::abs(v));
    for (int i : split.base) {
        for (int j : split.fiber) {
            const double v = ch.gram(i, j);
            mb.cross_abs = std::max(mb.cross_abs, std::abs(v));
            const double ni = std::sqrt(ch.gram(i, i)), nj = std::sqrt(ch.gram(j, j));
            if (ni > 0 && nj > 0) mb.cross_rel = std::max(mb.cross_rel, std::abs(v) / (ni * nj));
        }
    }
    return mb;
}

double frobenius(const Mat& a) {
    double s = 0.0;
    for (double v : a.a) s += v * v;
    return std::sqrt(s);
}

}  // namespace

double warp_lambda(const ImmersionSpec& spec, const WarpSplit& split,
                   std::span<const double> base_pt,
                   const std::vector<std::vector<double>>& fiber_points,
                   std::span<const double> ref_base_pt, double rank_tol) {
    double num = 0.0, den = 0.0;
    for (const auto& f : fiber_points) {
        const Mat gb = metric_blocks(spec, split, base_pt, f, rank_tol).fiber;
        const Mat gr = metric_blocks(spec, split, ref_base_pt, f, rank_tol).fiber;
        for (std::size_t k = 0; k < gb.a.size(); ++k) {
            num += gb.a[k] * gr.a[k];
            den += gr.a[k] * gr.a[k];
        }
    }
    if (den == 0.0) throw ChartError("warp_lambda: degenerate fiber block");
    return num / den;
}

std::vector<double> grad_lnf_at(const ImmersionSpec& spec, const WarpSplit& split,
                                std::span<const double> base_pt,
                                const std::vector<std::vector<double>>& fiber_points,
                                std::span<const double> ref_base_pt, double fd_step,
                                double rank_tol) {
    auto lnf = [&](std::span<const double> b) {
        const double lam = warp_lambda(spec, split, b, fiber_points, ref_base_pt, rank_tol);
        if (lam <= 0.0) throw ChartError("grad_lnf_at: nonpositive fiber ratio");
        return 0.5 * std::log(lam);
    };
    std::vector<double> out(base_pt.size(), 0.0);
    std::vector<double> b(base_pt.begin(), base_pt.end());
    for (std::size_t i = 0; i < b.size(); ++i) {
        auto shifted = [&](double off) {
            std::vector<double> q = b;
            q[i] += off;
            return lnf(q);
        };
        out[i] = (-shifted(2.0 * fd_step) + 8.0 * shifted(fd_step) - 8.0 * shifted(-fd_step) +
                  shifted(-2.0 * fd_step)) /
                 (12.0 * fd_step);
    }
    return out;
}

WarpAnalysis analyze_warp(const ImmersionSpec& spec, const WarpSplit& split, const WarpGrid& grid,
                          double struct_tol, double fd_step, double rank_tol) {
    if (grid.base_points.empty() || grid.fiber_points.empty())
        throw std::invalid_argument("analyze_warp: empty sample grid");
    WarpAnalysis an;

    // reference blocks at the first base point
    std::vector<Mat> ref_fiber;
    Mat ref_base;
    {
        bool first = true;
        for (const auto& f : grid.fiber_points) {
            const MetricBlocks mb = metric_blocks(spec, split, grid.base_points.front(), f, rank_tol);
            ref_fiber.push_back(mb.fiber);
            if (first) {
                ref_base = mb.base;
                first = false;
            }
        }
    }

    double ref_fiber_norm = 0.0;
    for (const auto& g : ref_fiber) ref_fiber_norm += frobenius(g) * frobenius(g);
    ref_fiber_norm = std::sqrt(ref_fiber_norm);

    for (const auto& bpt : grid.base_points) {
        double num = 0.0, den = 0.0;
        std::vector<Mat> fibers;
        Mat base_at_first_fiber;
        bool first_fiber = true;
        for (std::size_t fi = 0; fi < grid.fiber_points.size(); ++fi) {
            const MetricBlocks mb =
                metric_blocks(spec, split, bpt, grid.fiber_points[fi], rank_tol);
            an.cross_max_abs = std::max(an.cross_max_abs, mb.cross_abs);
            an.cross_max_rel = std::max(an.cross_max_rel, mb.cross_rel);
            an.metric_scale = std::max(an.metric_scale, mb.scale);
            fibers.push_back(mb.fiber);
            if (first_fiber) {
                base_at_first_fiber = mb.base;
                first_fiber = false;
            } else {
                // base block must not depend on the fiber point
                for (std::size_t k = 0; k < mb.base.a.size(); ++k)
                    an.base_independence = std::max(
                        an.base_independence, std::abs(mb.base.a[k] - base_at_first_fiber.a[k]));
            }
            for (std::size_t k = 0; k < mb.fiber.a.size(); ++k) {
                num += mb.fiber.a[k] * ref_fiber[fi].a[k];
                den += ref_fiber[fi].a[k] * ref_fiber[fi].a[k];
            }
        }
        const double lambda = den > 0 ? num / den : 0.0;
        double resid2 = 0.0;
        for (std::size_t fi = 0; fi < fibers.size(); ++fi)
            for (std::size_t k = 0; k < fibers[fi].a.size(); ++k) {
                const double d = fibers[fi].a[k] - lambda * ref_fiber[fi].a[k];
                resid2 += d * d;
            }
        if (ref_fiber_norm > 0)
            an.fiber_proportionality =
                std::max(an.fiber_proportionality, std::sqrt(resid2) / ref_fiber_norm);
        an.f_samples.push_back(lambda > 0 ? std::sqrt(lambda) : 0.0);
    }

    for (const auto& bpt : grid.base_points) {
        auto g = grad_lnf_at(spec, split, bpt, grid.fiber_points, grid.base_points.front(),
                             fd_step, rank_tol);
        for (double v : g) an.max_grad_lnf = std::max(an.max_grad_lnf, std::abs(v));
        an.grad_lnf.push_back(std::move(g));
    }

    const double scale = std::max(an.metric_scale, 1.0);
    an.structure_ok = an.cross_max_rel < struct_tol &&
                      an.base_independence < struct_tol * scale &&
                      an.fiber_proportionality < struct_tol;
    return an;
}

WarpConnectionResiduals check_warp_connection(const ImmersionSpec& spec, const WarpSplit& split,
                                              const WarpGrid& grid, double fd_step,
                                              double rank_tol) {
    WarpConnectionResiduals out;
    const int m = spec.param_count();
    for (const auto& bpt : grid.base_points) {
        const auto grad = grad_lnf_at(spec, split, bpt, grid.fiber_points, grid.base_points.front(),
                                      fd_step, rank_tol);
        for (const auto& fpt : grid.fiber_points) {
            const auto p = assemble_point(split, bpt, fpt, m);
            const PointChart ch = evaluate_chart(spec, p, rank_tol);
            for (std::size_t bi = 0; bi < split.base.size(); ++bi) {
                const int i = split.base[bi];
                for (int j : split.fiber) {
                    auto c = induced_connection(ch, i, j);
                    c[static_cast<std::size_t>(j)] -= grad[bi];
                    double s = 0.0;
                    for (int a = 0; a < m; ++a)
                        for (int b = 0; b < m; ++b)
                            s += c[static_cast<std::size_t>(a)] * ch.gram(a, b) *
                                 c[static_cast<std::size_t>(b)];
                    out.worst = std::max(out.worst, std::sqrt(std::max(s, 0.0)));
                    ++out.samples;
                }
            }
        }
    }
    return out;
}

DichotomyResult dichotomy_check(const ImmersionSpec& spec, const DistributionAssignment& asg,
                                const WarpSplit& split, const WarpGrid& grid,
                                const WarpAnalysis& analysis, double theta2, double grad_tol,
                                double angle_tol, double rank_tol) {
    DichotomyResult out;
    out.max_grad_lnf = analysis.max_grad_lnf;
    out.theta2 = theta2;

    const double c2 = std::cos(theta2) * std::cos(theta2);
    out.strengthened_residual = c2 * analysis.max_grad_lnf;

    // core scalar: (d_i ln f) g(Z, phi W) over second-block fiber probes
    const int m = spec.param_count();
    for (std::size_t bi = 0; bi < grid.base_points.size(); ++bi) {
        const auto& grad = analysis.grad_lnf[bi];
        double gmax = 0.0;
        for (double v : grad) gmax = std::max(gmax, std::abs(v));
        for (const auto& fpt : grid.fiber_points) {
            const auto p = assemble_point(split, grid.base_points[bi], fpt, m);
            const PointChart ch = evaluate_chart(spec, p, rank_tol);
            for (int zi : asg.slant2) {
                const Vec z = ch.tangents[static_cast<std::size_t>(zi)];
                for (int wi : asg.slant2) {
                    const Vec phiw = project(apply_J(ch.tangents[static_cast<std::size_t>(wi)]),
                                             ch.tangent_space);
                    out.core_residual = std::max(out.core_residual, gmax * std::abs(dot(z, phiw)));
                }
            }
        }
    }

    if (analysis.max_grad_lnf < grad_tol)
        out.verdict = WarpVerdict::riemannian_product;
    else if (std::abs(theta2 - std::numbers::pi / 2.0) < angle_tol)
        out.verdict = WarpVerdict::quasi_hemi_slant;
    else
        out.verdict = WarpVerdict::neither;
    return out;
}

}  // namespace slantgeo
