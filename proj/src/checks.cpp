#include "checks.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "identities.hpp"
#include "rng.hpp"

namespace slantgeo {

namespace {

using nlohmann::json;

// stream tags for independent deterministic substreams
enum Stream : std::uint64_t {
    kSamplePoints = 1,
    kAmbientProbes = 2,
    kStructureProbes = 3,
    kWarpBase = 5,
    kWarpFiber = 6,
};

template <class F>
void parallel_for(int n, int threads, F&& f) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mu;
    std::exception_ptr first_err;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= n) break;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!first_err) first_err = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_err) std::rethrow_exception(first_err);
}

struct RunContext {
    const Manifest& mf;
    Rng rng;
    std::vector<std::vector<double>> points;
    std::vector<PointChart> charts;
    std::string chart_error;  // first failure, empty when all charts built
    bool charts_ok = false;

    StructureReport def31;
    bool def31_done = false;
    int auto_invariant_dim = -1;
    bool auto_dim_constant = true;

    WarpGrid grid;
    WarpAnalysis warp;
    bool warp_done = false;
    bool warp_ok = false;

    DichotomyResult dicho;
    bool dicho_done = false;

    explicit RunContext(const Manifest& m) : mf(m), rng(m.seed) {}
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

json block_stats_json(const BlockStats& s) {
    json j;
    j["classification"] = s.classification;
    j["samples"] = s.samples;
    if (!s.empty) {
        j["mean_angle"] = s.mean_angle;
        j["max_deviation"] = s.max_dev;
        j["min_angle"] = s.min_angle;
        j["max_angle"] = s.max_angle;
    }
    return j;
}

void sample_points(RunContext& cx) {
    cx.points = cx.mf.samples.explicit_points;
    Rng rng = cx.rng.fork(kSamplePoints);
    const int m = cx.mf.spec.param_count();
    for (int k = 0; k < cx.mf.samples.count; ++k) {
        std::vector<double> p(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const auto [lo, hi] = cx.mf.samples.ranges[static_cast<std::size_t>(i)];
            p[static_cast<std::size_t>(i)] = rng.uniform(lo, hi);
        }
        cx.points.push_back(std::move(p));
    }
}

void build_charts(RunContext& cx) {
    const int n = static_cast<int>(cx.points.size());
    cx.charts.assign(static_cast<std::size_t>(n), PointChart{});
    std::vector<std::string> errors(static_cast<std::size_t>(n));
    parallel_for(n, cx.mf.threads, [&](int i) {
        try {
            cx.charts[static_cast<std::size_t>(i)] =
                evaluate_chart(cx.mf.spec, cx.points[static_cast<std::size_t>(i)], cx.mf.tols.rank);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            cx.chart_error = "point " + std::to_string(i) + ": " + errors[i];
            return;
        }
    }
    cx.charts_ok = true;
}

CheckRecord check_ambient_structure(RunContext& cx) {
    CheckRecord rec;
    rec.id = "ambient_structure";
    rec.tolerance = cx.mf.tols.ambient;
    const int n2 = cx.mf.spec.ambient.real_dim();
    Rng rng = cx.rng.fork(kAmbientProbes);

    std::vector<Vec> samples;
    for (int k = 0; k < 16; ++k) {
        Vec v(static_cast<std::size_t>(n2));
        for (auto& x : v) x = rng.uniform(-1.0, 1.0);
        samples.push_back(std::move(v));
    }

    double j2 = 0.0;
    for (const auto& v : samples) {
        const Vec jj = apply_J(apply_J(v));
        for (std::size_t c = 0; c < v.size(); ++c) j2 = std::max(j2, std::abs(jj[c] + v[c]));
    }
    const double compat = hermitian_compat_residual(samples);
    const double skew = skew_adjoint_residual(samples);

    std::vector<Vec> pts, dirs;
    for (int k = 0; k < 4; ++k) {
        Vec p(static_cast<std::size_t>(n2)), d(static_cast<std::size_t>(n2));
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
        for (auto& x : d) x = rng.uniform(-1.0, 1.0);
        pts.push_back(std::move(p));
        dirs.push_back(std::move(d));
    }
    double parallel = 0.0;
    for (double step : {1e-2, 1e-4, 1e-6})
        parallel = std::max(
            parallel, structure_parallel_residual(cx.mf.spec.ambient, pts, dirs, step));

    rec.details["square_residual"] = j2;
    rec.details["compatibility_residual"] = compat;
    rec.details["skew_adjoint_residual"] = skew;
    rec.details["parallel_residual"] = parallel;
    rec.worst = std::max({j2, compat, skew, parallel});
    rec.status = rec.worst < rec.tolerance ? "PASS" : "FAIL";
    return rec;
}

CheckRecord check_chart_validity(RunContext& cx) {
    CheckRecord rec;
    rec.id = "chart_validity";
    rec.tolerance = cx.mf.tols.structure;
    if (!cx.charts_ok) {
        rec.status = "FAIL";
        rec.note = "chart construction failed: " + cx.chart_error;
        rec.details["error"] = cx.chart_error;
        return rec;
    }

    double frame_ortho = 0.0, tn_ortho = 0.0, gram_vs_dots = 0.0, sff_sym = 0.0;
    double eig_ratio_min = 1.0;
    bool complete = true;
    for (const auto& ch : cx.charts) {
        const auto& tb = ch.tangent_space.basis;
        for (std::size_t a = 0; a < tb.size(); ++a)
            for (std::size_t b = 0; b < tb.size(); ++b)
                frame_ortho = std::max(
                    frame_ortho, std::abs(dot(tb[a], tb[b]) - (a == b ? 1.0 : 0.0)));
        for (const auto& t : tb)
            for (const auto& nvec : ch.normal_space.basis)
                tn_ortho = std::max(tn_ortho, std::abs(dot(t, nvec)));
        complete = complete &&
                   (ch.tangent_space.dim() + ch.normal_space.dim() == ch.ambient_dim());
        for (int i = 0; i < ch.m(); ++i)
            for (int j = 0; j < ch.m(); ++j)
                gram_vs_dots = std::max(
                    gram_vs_dots,
                    std::abs(ch.gram(i, j) - dot(ch.tangents[static_cast<std::size_t>(i)],
                                                 ch.tangents[static_cast<std::size_t>(j)])));
        for (int i = 0; i < ch.m(); ++i) {
            for (int j = i + 1; j < ch.m(); ++j) {
                const Vec d = sub(second_fundamental_form(ch, i, j),
                                  second_fundamental_form(ch, j, i));
                sff_sym = std::max(sff_sym, norm(d));
            }
        }
        const auto ev = spd_eigenvalues(ch.gram);
        if (!ev.empty() && ev.back() > 0)
            eig_ratio_min = std::min(eig_ratio_min, ev.front() / ev.back());
    }
    rec.details["frame_orthonormality"] = frame_ortho;
    rec.details["tangent_normal_orthogonality"] = tn_ortho;
    rec.details["dimensions_complete"] = complete;
    rec.details["gram_matches_dot_products"] = gram_vs_dots;
    rec.details["sff_symmetry"] = sff_sym;
    rec.details["gram_eigenvalue_ratio_min"] = eig_ratio_min;
    rec.details["charts"] = static_cast<int>(cx.charts.size());
    rec.worst = std::max({frame_ortho, tn_ortho, gram_vs_dots, sff_sym});
    rec.status = (complete && rec.worst < rec.tolerance) ? "PASS" : "FAIL";
    return rec;
}

CheckRecord check_tangential_structure(RunContext& cx) {
    CheckRecord rec;
    rec.id = "tangential_structure";
    rec.tolerance = cx.mf.tols.structure;
    if (!cx.charts_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts unavailable";
        return rec;
    }
    const auto& tols = cx.mf.tols;

    double skew = 0.0, symmetric = 0.0, pyth = 0.0, bc = 0.0, gw = 0.0, wein = 0.0;
    for (std::size_t pi = 0; pi < cx.charts.size(); ++pi) {
        const auto& ch = cx.charts[pi];
        Rng rng = cx.rng.fork(kStructureProbes, pi);
        const int m = ch.m();

        std::vector<std::vector<double>> probes;
        for (int k = 0; k < cx.mf.samples.probes_per_block; ++k)
            probes.push_back(rng.coefficients(m));

        const auto sres = skewness_residuals(ch, probes);
        skew = std::max(skew, sres.skew);
        symmetric = std::max(symmetric, sres.symmetric);

        for (const auto& c : probes) {
            Vec x = tangent_to_ambient(ch, c);
            const double nx = norm(x);
            if (nx == 0.0) continue;
            x = scaled(x, 1.0 / nx);
            const auto po = phi_omega(ch, x, 1e-6);
            const Vec jx = apply_J(x);
            pyth = std::max(pyth, std::abs(dot(jx, jx) - dot(po.phi, po.phi) -
                                           dot(po.omega, po.omega)));
        }

        if (ch.normal_space.dim() > 0) {
            auto nc = rng.coefficients(ch.normal_space.dim());
            Vec nvec(static_cast<std::size_t>(ch.ambient_dim()), 0.0);
            for (int k = 0; k < ch.normal_space.dim(); ++k)
                axpy(nc[static_cast<std::size_t>(k)],
                     ch.normal_space.basis[static_cast<std::size_t>(k)], nvec);
            const double nn = norm(nvec);
            if (nn > 0) {
                nvec = scaled(nvec, 1.0 / nn);
                const auto parts = bc_decompose(ch, nvec, 1e-6);
                Vec recomb = apply_J(add(parts.b, parts.c));
                axpy(1.0, nvec, recomb);  // J(B+C) = -n
                bc = std::max(bc, norm(recomb));

                const Mat a = shape_operator(ch, nvec);
                for (int i = 0; i < m; ++i) {
                    for (int j = 0; j < m; ++j) {
                        double lhs = dot(second_fundamental_form(ch, i, j), nvec);
                        double rhs = 0.0;
                        for (int k = 0; k < m; ++k) rhs += a(k, j) * ch.gram(k, i);
                        gw = std::max(gw, std::abs(lhs - rhs));
                    }
                }
            }
        }
    }

    // Weingarten cross-check on an omega field of a slant coordinate
    int field_idx = 0;
    if (!cx.mf.assignment.slant1.empty())
        field_idx = cx.mf.assignment.slant1.front();
    else if (!cx.mf.assignment.slant2.empty())
        field_idx = cx.mf.assignment.slant2.front();
    std::vector<double> coeff(static_cast<std::size_t>(cx.mf.spec.param_count()), 0.0);
    coeff[static_cast<std::size_t>(field_idx)] = 1.0;
    const AmbientField wfield = omega_field(cx.mf.spec, coeff, tols.rank);
    for (const auto& ch : cx.charts) {
        for (int i = 0; i < ch.m(); ++i)
            wein = std::max(wein, weingarten_residual(ch, wfield, i, tols.fd_step));
    }

    rec.details["phi_skew_residual"] = skew;
    rec.details["phi_symmetric_form_residual"] = symmetric;
    rec.details["pythagoras_residual"] = pyth;
    rec.details["bc_recombination_residual"] = bc;
    rec.details["gauss_weingarten_residual"] = gw;
    rec.details["weingarten_fd_residual"] = wein;
    rec.worst = std::max({skew, pyth, bc, gw, wein});
    const bool pass = skew < tols.structure && pyth < tols.structure && bc < tols.structure &&
                      gw < tols.gauss_weingarten && wein < tols.weingarten_fd;
    rec.status = pass ? "PASS" : "FAIL";
    return rec;
}

CheckRecord check_distributions(RunContext& cx) {
    CheckRecord rec;
    rec.id = "distributions";
    rec.tolerance = cx.mf.tols.ortho;
    if (!cx.charts_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts unavailable";
        return rec;
    }
    cx.def31 = verify_distribution_structure(cx.mf.spec, cx.mf.assignment, cx.charts,
                                             cx.mf.tols.angle, cx.mf.tols.ortho,
                                             cx.mf.samples.probes_per_block, cx.rng,
                                             cx.mf.tols.rank);
    cx.def31_done = true;

    bool even = true;
    for (std::size_t pi = 0; pi < cx.charts.size(); ++pi) {
        const int d = auto_invariant_block(cx.charts[pi], cx.mf.tols.invariant_sv).dim();
        if (pi == 0)
            cx.auto_invariant_dim = d;
        else if (d != cx.auto_invariant_dim)
            cx.auto_dim_constant = false;
        even = even && (d % 2 == 0);
    }

    const auto& r = cx.def31;
    json a;
    a["max_cross_abs"] = r.ortho_max_abs;
    a["max_cross_rel"] = r.ortho_max_rel;
    a["pass"] = r.a_pass;
    json cross = json::object();
    for (const auto& ct : r.cross_terms) cross["cross(" + ct.row + "," + ct.col + ")"] = ct.value;
    a["cross_terms"] = cross;
    rec.details["condition_a_orthogonal"] = a;

    rec.details["condition_b_invariant"] = {{"omega_max", r.d_omega_max},
                                            {"angle_max", r.d_angle_max},
                                            {"pass", r.b_pass}};
    rec.details["condition_c_slant_normality"] = {{"one_sided_abs", r.c_one_sided},
                                                  {"one_sided_rel", r.c_one_sided_rel},
                                                  {"mirrored_abs", r.c_mirrored},
                                                  {"mirrored_rel", r.c_mirrored_rel},
                                                  {"pass", r.c_pass}};
    rec.details["condition_d_first_angle_constant"] = r.d_pass;
    rec.details["condition_e_second_angle_constant"] = r.e_pass;
    rec.details["blocks"] = {{"invariant", block_stats_json(r.invariant_block)},
                             {"slant_1", block_stats_json(r.slant1)},
                             {"slant_2", block_stats_json(r.slant2)}};
    rec.details["auto_invariant"] = {{"dim", cx.auto_invariant_dim},
                                     {"even", even},
                                     {"constant_across_points", cx.auto_dim_constant}};
    rec.details["pqr_reassembly_residual"] = r.pqr_max_residual;

    rec.worst = std::max({r.ortho_max_rel, r.c_one_sided_rel, r.d_angle_max,
                          r.slant1.empty ? 0.0 : r.slant1.max_dev,
                          r.slant2.empty ? 0.0 : r.slant2.max_dev});
    rec.status = r.all_pass() ? "PASS" : "FAIL";
    if (!r.all_pass()) {
        std::string failed;
        if (!r.a_pass) failed += "(a)";
        if (!r.b_pass) failed += "(b)";
        if (!r.c_pass) failed += "(c)";
        if (!r.d_pass) failed += "(d)";
        if (!r.e_pass) failed += "(e)";
        rec.note = "violated conditions: " + failed;
    }
    return rec;
}

CheckRecord check_slant_block_identities(RunContext& cx) {
    CheckRecord rec;
    rec.id = "slant_block_identities";
    rec.tolerance = cx.mf.tols.block_identity;
    if (!cx.charts_ok || !cx.def31_done) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts or distribution structure unavailable";
        return rec;
    }

    struct BlockRun {
        const char* name;
        const std::vector<int>* idx;
        const BlockStats* stats;
    };
    const std::vector<BlockRun> blocks = {{"invariant", &cx.mf.assignment.invariant,
                                           &cx.def31.invariant_block},
                                          {"slant_1", &cx.mf.assignment.slant1, &cx.def31.slant1},
                                          {"slant_2", &cx.mf.assignment.slant2, &cx.def31.slant2}};
    bool any = false;
    bool nonconstant = false;
    for (const auto& blk : blocks) {
        if (blk.idx->empty()) continue;
        any = true;
        BlockIdentityResiduals agg;
        for (std::size_t pi = 0; pi < cx.charts.size(); ++pi) {
            Rng rng = cx.rng.fork(0xb10c, pi);
            std::vector<std::vector<double>> probes;
            for (int k = 0; k < cx.mf.samples.probes_per_block; ++k)
                probes.push_back(rng.coefficients(static_cast<int>(blk.idx->size())));
            const auto res = check_block_identities(cx.charts[pi], *blk.idx,
                                                    blk.stats->mean_angle, probes,
                                                    cx.mf.tols.rank);
            agg.r1 = std::max(agg.r1, res.r1);
            agg.r2 = std::max(agg.r2, res.r2);
            agg.r3 = std::max(agg.r3, res.r3);
            agg.pairs += res.pairs;
        }
        if (blk.stats->max_dev >= cx.mf.tols.angle) nonconstant = true;
        rec.details[blk.name] = {{"theta", blk.stats->mean_angle},
                                 {"r1", agg.r1},
                                 {"r2", agg.r2},
                                 {"r3", agg.r3},
                                 {"pairs", agg.pairs}};
        rec.worst = std::max({rec.worst, agg.r1, agg.r2, agg.r3});
    }

    if (!any) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "all blocks empty";
    } else if (!cx.def31.all_pass()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "distribution structure conditions failed; residuals recorded";
    } else if (nonconstant) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "a block angle is not constant; residuals recorded";
    } else {
        rec.status = rec.worst < rec.tolerance ? "PASS" : "FAIL";
    }
    return rec;
}

CheckRecord check_normal_bundle_split(RunContext& cx) {
    CheckRecord rec;
    rec.id = "normal_bundle_split";
    rec.tolerance = cx.mf.tols.mu_invariance;
    if (!cx.charts_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts unavailable";
        return rec;
    }
    double mu_res = 0.0;
    int d1 = -1, d2 = -1, mu = -1;
    bool constant_dims = true;
    for (std::size_t pi = 0; pi < cx.charts.size(); ++pi) {
        const auto nd = normal_decomposition(cx.charts[pi], cx.mf.assignment, cx.mf.tols.rank);
        mu_res = std::max(mu_res, nd.mu_invariance_residual);
        if (pi == 0) {
            d1 = nd.omega_d1.dim();
            d2 = nd.omega_d2.dim();
            mu = nd.mu.dim();
        } else if (d1 != nd.omega_d1.dim() || d2 != nd.omega_d2.dim() || mu != nd.mu.dim()) {
            constant_dims = false;
        }
    }
    rec.details["omega_slant_1_dim"] = d1;
    rec.details["omega_slant_2_dim"] = d2;
    rec.details["mu_dim"] = mu;
    rec.details["normal_dim"] = cx.charts.front().normal_space.dim();
    rec.details["dims_constant_across_points"] = constant_dims;
    rec.details["mu_invariance_residual"] = mu_res;
    rec.worst = mu_res;
    if (cx.def31_done && !cx.def31.all_pass()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "distribution structure conditions failed; decomposition recorded";
    } else {
        rec.status = (mu_res < rec.tolerance && constant_dims) ? "PASS" : "FAIL";
    }
    return rec;
}

// argument grid for the long identities: coordinate fields of the blocks
std::vector<int> cat(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<double> unit_coeff(int m, int idx) {
    std::vector<double> c(static_cast<std::size_t>(m), 0.0);
    c[static_cast<std::size_t>(idx)] = 1.0;
    return c;
}

CheckRecord check_connection_identity(RunContext& cx) {
    CheckRecord rec;
    rec.id = "connection_identity";
    rec.tolerance = cx.mf.tols.fd_identity;
    if (!cx.charts_ok || !cx.def31_done) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts or distribution structure unavailable";
        return rec;
    }
    const int m = cx.mf.spec.param_count();
    const double th1 = cx.def31.slant1.empty ? 0.0 : cx.def31.slant1.mean_angle;
    const double th2 = cx.def31.slant2.empty ? 0.0 : cx.def31.slant2.mean_angle;
    const std::vector<int> yz = cat(cx.mf.assignment.slant1, cx.mf.assignment.slant2);

    struct Variant {
        const char* name;
        const std::vector<int>* xs;
    };
    const std::vector<Variant> variants = {{"first_block_direction", &cx.mf.assignment.slant1},
                                           {"invariant_direction", &cx.mf.assignment.invariant}};
    bool ran_any = false;
    for (const auto& var : variants) {
        if (var.xs->empty() || yz.empty()) {
            rec.details[var.name] = {{"runs", 0}, {"note", "no eligible arguments"}};
            continue;
        }
        double worst = 0.0;
        int runs = 0;
        const int npts = static_cast<int>(cx.charts.size());
        std::vector<double> worst_per_point(static_cast<std::size_t>(npts), 0.0);
        parallel_for(npts, cx.mf.threads, [&](int pi) {
            double w = 0.0;
            for (int xi : *var.xs) {
                for (int yi : yz) {
                    for (int zi : yz) {
                        const auto sides = connection_identity_sides(
                            cx.mf.spec, cx.charts[static_cast<std::size_t>(pi)], cx.mf.assignment,
                            unit_coeff(m, xi), unit_coeff(m, yi), unit_coeff(m, zi), th1, th2,
                            cx.mf.tols.fd_step, cx.mf.tols.rank);
                        w = std::max(w, sides.residual());
                    }
                }
            }
            worst_per_point[static_cast<std::size_t>(pi)] = w;
        });
        for (double w : worst_per_point) worst = std::max(worst, w);
        runs = npts * static_cast<int>(var.xs->size()) * static_cast<int>(yz.size() * yz.size());
        ran_any = true;
        rec.details[var.name] = {{"worst_residual", worst}, {"runs", runs}};
        rec.worst = std::max(rec.worst, worst);
    }

    if (!ran_any) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "no eligible arguments";
    } else if (!cx.def31.all_pass()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "distribution structure conditions failed; residuals recorded";
    } else if ((!cx.def31.slant1.empty && cx.def31.slant1.max_dev >= cx.mf.tols.angle) ||
               (!cx.def31.slant2.empty && cx.def31.slant2.max_dev >= cx.mf.tols.angle)) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "slant angle not constant; residuals recorded";
    } else {
        rec.status = rec.worst < rec.tolerance ? "PASS" : "FAIL";
    }
    return rec;
}

CheckRecord check_bracket_identity(RunContext& cx) {
    CheckRecord rec;
    rec.id = "bracket_identity";
    rec.tolerance = cx.mf.tols.fd_identity;
    if (!cx.charts_ok || !cx.def31_done) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts or distribution structure unavailable";
        return rec;
    }
    const int m = cx.mf.spec.param_count();
    const std::vector<int> yz = cat(cx.mf.assignment.slant1, cx.mf.assignment.slant2);
    if (cx.mf.assignment.slant1.empty() || yz.empty()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "no eligible arguments";
        return rec;
    }

    const int npts = static_cast<int>(cx.charts.size());
    std::vector<double> worst_per_point(static_cast<std::size_t>(npts), 0.0);
    parallel_for(npts, cx.mf.threads, [&](int pi) {
        double w = 0.0;
        for (int xi : cx.mf.assignment.slant1) {
            for (int yi : yz) {
                for (int zi : yz) {
                    const auto sides = bracket_identity_sides(
                        cx.mf.spec, cx.charts[static_cast<std::size_t>(pi)], cx.mf.assignment,
                        unit_coeff(m, xi), unit_coeff(m, yi), unit_coeff(m, zi),
                        cx.mf.tols.fd_step, cx.mf.tols.rank);
                    w = std::max(w, sides.residual());
                }
            }
        }
        worst_per_point[static_cast<std::size_t>(pi)] = w;
    });
    for (double w : worst_per_point) rec.worst = std::max(rec.worst, w);
    rec.details["runs"] =
        npts * static_cast<int>(cx.mf.assignment.slant1.size() * yz.size() * yz.size());
    rec.details["worst_residual"] = rec.worst;

    if (!cx.def31.all_pass()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "distribution structure conditions failed; residuals recorded";
    } else {
        rec.status = rec.worst < rec.tolerance ? "PASS" : "FAIL";
    }
    return rec;
}

void build_warp_grid(RunContext& cx) {
    const auto& split = *cx.mf.warp_split;
    Rng brng = cx.rng.fork(kWarpBase);
    Rng frng = cx.rng.fork(kWarpFiber);
    for (int k = 0; k < cx.mf.samples.warp_base_count; ++k) {
        std::vector<double> b(split.base.size());
        for (std::size_t i = 0; i < split.base.size(); ++i) {
            const auto [lo, hi] =
                cx.mf.samples.ranges[static_cast<std::size_t>(split.base[i])];
            b[i] = brng.uniform(lo, hi);
        }
        cx.grid.base_points.push_back(std::move(b));
    }
    for (int k = 0; k < cx.mf.samples.warp_fiber_count; ++k) {
        std::vector<double> f(split.fiber.size());
        for (std::size_t i = 0; i < split.fiber.size(); ++i) {
            const auto [lo, hi] =
                cx.mf.samples.ranges[static_cast<std::size_t>(split.fiber[i])];
            f[i] = frng.uniform(lo, hi);
        }
        cx.grid.fiber_points.push_back(std::move(f));
    }
}

CheckRecord check_warp_structure(RunContext& cx) {
    CheckRecord rec;
    rec.id = "warp_structure";
    rec.tolerance = cx.mf.tols.warp_struct;
    if (!cx.mf.warp_split) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "no warp split supplied";
        return rec;
    }
    if (!cx.charts_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "charts unavailable";
        return rec;
    }
    build_warp_grid(cx);
    try {
        cx.warp = analyze_warp(cx.mf.spec, *cx.mf.warp_split, cx.grid, cx.mf.tols.warp_struct,
                               cx.mf.tols.fd_step, cx.mf.tols.rank);
    } catch (const std::exception& e) {
        rec.status = "FAIL";
        rec.note = std::string("warp analysis failed: ") + e.what();
        rec.details["error"] = e.what();
        return rec;
    }
    cx.warp_done = true;
    cx.warp_ok = cx.warp.structure_ok;

    rec.details["cross_max_abs"] = cx.warp.cross_max_abs;
    rec.details["cross_max_rel"] = cx.warp.cross_max_rel;
    rec.details["base_independence"] = cx.warp.base_independence;
    rec.details["fiber_proportionality"] = cx.warp.fiber_proportionality;
    rec.details["f_samples"] = cx.warp.f_samples;
    rec.details["max_grad_lnf"] = cx.warp.max_grad_lnf;
    rec.details["grad_lnf"] = cx.warp.grad_lnf;
    rec.details["base_points"] = cx.grid.base_points;
    rec.details["fiber_points"] = cx.grid.fiber_points;
    rec.worst = std::max({cx.warp.cross_max_rel, cx.warp.fiber_proportionality,
                          cx.warp.base_independence / std::max(cx.warp.metric_scale, 1.0)});
    rec.status = cx.warp.structure_ok ? "PASS" : "FAIL";
    if (!cx.warp.structure_ok)
        rec.note = "metric does not have warped-product block structure for this split";
    return rec;
}

CheckRecord check_warp_connection(RunContext& cx) {
    CheckRecord rec;
    rec.id = "warp_connection";
    rec.tolerance = cx.mf.tols.warp_connection;
    if (!cx.warp_done || !cx.warp_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "warped-product structure not established";
        return rec;
    }
    const auto res = check_warp_connection(cx.mf.spec, *cx.mf.warp_split, cx.grid,
                                           cx.mf.tols.fd_step, cx.mf.tols.rank);
    rec.worst = res.worst;
    rec.details["worst_residual"] = res.worst;
    rec.details["samples"] = res.samples;
    rec.status = res.worst < rec.tolerance ? "PASS" : "FAIL";
    return rec;
}

CheckRecord check_warp_sff_identities(RunContext& cx) {
    CheckRecord rec;
    rec.id = "warp_sff_identities";
    rec.tolerance = cx.mf.tols.sff_identity;
    if (!cx.mf.warp_split || !cx.charts_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "warp split or charts unavailable";
        return rec;
    }
    const auto& split = *cx.mf.warp_split;
    const int m = cx.mf.spec.param_count();

    double worst_stmt = 0.0, worst_proof = 0.0, worst_fiber = 0.0;
    int n_stmt = 0, n_proof = 0, n_fiber = 0;
    for (const auto& ch : cx.charts) {
        // base/base/fiber roles as stated
        for (int xi : split.base)
            for (int zi : split.base)
                for (int yi : split.fiber) {
                    const auto s = warp_sff_identity_sides(ch, cx.mf.assignment, unit_coeff(m, xi),
                                                           unit_coeff(m, yi), unit_coeff(m, zi));
                    worst_stmt = std::max(worst_stmt, s.residual());
                    ++n_stmt;
                }
        // roles as used in the derivation: X, Y base and Z fiber
        for (int xi : split.base)
            for (int yi : split.base)
                for (int zi : split.fiber) {
                    const auto s = warp_sff_identity_sides(ch, cx.mf.assignment, unit_coeff(m, xi),
                                                           unit_coeff(m, yi), unit_coeff(m, zi));
                    worst_proof = std::max(worst_proof, s.residual());
                    ++n_proof;
                }
        // fiber-fiber identity
        for (int xi : split.base)
            for (int zi : split.fiber)
                for (int wi : split.fiber) {
                    const auto s = warp_sff_fiber_identity_sides(ch, cx.mf.assignment,
                                                                 unit_coeff(m, xi),
                                                                 unit_coeff(m, zi),
                                                                 unit_coeff(m, wi));
                    worst_fiber = std::max(worst_fiber, s.residual());
                    ++n_fiber;
                }
    }
    rec.details["base_field_roles"] = {{"worst_residual", worst_stmt}, {"runs", n_stmt}};
    rec.details["derivation_roles"] = {{"worst_residual", worst_proof}, {"runs", n_proof}};
    rec.details["fiber_pair_roles"] = {{"worst_residual", worst_fiber}, {"runs", n_fiber}};
    rec.worst = std::max({worst_stmt, worst_proof, worst_fiber});

    if (!cx.warp_done || !cx.warp_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "warped-product structure not established; residuals recorded";
    } else if (cx.def31_done && !cx.def31.all_pass()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "distribution structure conditions failed; residuals recorded";
    } else {
        rec.status = rec.worst < rec.tolerance ? "PASS" : "FAIL";
    }
    return rec;
}

CheckRecord check_dichotomy(RunContext& cx) {
    CheckRecord rec;
    rec.id = "dichotomy";
    rec.tolerance = cx.mf.tols.dichotomy_core;
    if (!cx.def31_done || !cx.def31.all_pass()) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "quasi bi-slant structure not verified";
        return rec;
    }
    if (!cx.warp_done || !cx.warp_ok) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "warped-product structure not established";
        return rec;
    }
    if (cx.def31.slant2.empty) {
        rec.status = "PRECONDITION_UNMET";
        rec.note = "second slant block is empty";
        return rec;
    }

    cx.dicho = dichotomy_check(cx.mf.spec, cx.mf.assignment, *cx.mf.warp_split, cx.grid, cx.warp,
                               cx.def31.slant2.mean_angle, cx.mf.tols.grad, cx.mf.tols.angle,
                               cx.mf.tols.rank);
    cx.dicho_done = true;

    bool d2_in_fiber = true;
    for (int idx : cx.mf.assignment.slant2)
        d2_in_fiber = d2_in_fiber && std::find(cx.mf.warp_split->fiber.begin(),
                                               cx.mf.warp_split->fiber.end(),
                                               idx) != cx.mf.warp_split->fiber.end();

    rec.details["verdict"] = to_string(cx.dicho.verdict);
    rec.details["max_grad_lnf"] = cx.dicho.max_grad_lnf;
    rec.details["theta_2"] = cx.dicho.theta2;
    rec.details["core_residual"] = cx.dicho.core_residual;
    rec.details["strengthened_residual"] = cx.dicho.strengthened_residual;
    rec.details["grad_tol"] = cx.mf.tols.grad;
    rec.details["second_block_inside_fiber"] = d2_in_fiber;
    rec.worst = cx.dicho.core_residual;

    if (cx.dicho.verdict == WarpVerdict::neither) {
        rec.status = "FAIL";
        rec.note = "dichotomy violated: warping non-constant and second angle not anti-invariant "
                   "(would-be counterexample)";
    } else {
        rec.status = cx.dicho.core_residual < rec.tolerance ? "PASS" : "FAIL";
    }
    return rec;
}

double claim_value(const json& expr_or_number) {
    if (expr_or_number.is_number()) return expr_or_number.get<double>();
    const std::string src = expr_or_number.get<std::string>();
    auto res = parse(src);
    if (!res) throw ManifestError("claims: cannot parse '" + src + "'");
    const std::vector<std::string> no_names;
    const std::vector<double> no_values;
    return evaluate<double>(*res.ast(), no_names, no_values);
}

json assemble_discrepancies(RunContext& cx) {
    json out = json::array();
    const auto& claims = cx.mf.claims;
    if (!claims.is_object()) return out;

    auto push = [&](const std::string& key, json claimed, json measured, bool match,
                    json details = json()) {
        json d;
        d["claim"] = key;
        d["claimed"] = std::move(claimed);
        d["measured"] = std::move(measured);
        d["match"] = match;
        if (!details.is_null()) d["details"] = std::move(details);
        out.push_back(std::move(d));
    };

    if (claims.contains("slant_1_angle") && cx.def31_done && !cx.def31.slant1.empty) {
        const double c = claim_value(claims.at("slant_1_angle"));
        const double v = cx.def31.slant1.mean_angle;
        push("slant_1_angle", c, v, std::abs(c - v) <= 1e-9);
    }
    if (claims.contains("slant_2_angle") && cx.def31_done && !cx.def31.slant2.empty) {
        const double c = claim_value(claims.at("slant_2_angle"));
        const double v = cx.def31.slant2.mean_angle;
        push("slant_2_angle", c, v, std::abs(c - v) <= 1e-9);
    }
    if (claims.contains("invariant_dim") && cx.def31_done) {
        const int c = claims.at("invariant_dim").get<int>();
        push("invariant_dim", c, cx.auto_invariant_dim, c == cx.auto_invariant_dim);
    }
    if (claims.contains("orthogonal_blocks") && cx.def31_done) {
        const bool c = claims.at("orthogonal_blocks").get<bool>();
        json cross = json::object();
        for (const auto& ct : cx.def31.cross_terms)
            cross["cross(" + ct.row + "," + ct.col + ")"] = ct.value;
        push("orthogonal_blocks", c, cx.def31.a_pass, c == cx.def31.a_pass, cross);
    }
    if (claims.contains("dichotomy")) {
        const std::string c = claims.at("dichotomy").get<std::string>();
        if (cx.dicho_done) {
            const std::string v = to_string(cx.dicho.verdict);
            push("dichotomy", c, v, c == v);
        } else {
            push("dichotomy", c, "UNAVAILABLE", false);
        }
    }
    if (claims.contains("warp_ratio") && cx.warp_done && cx.mf.warp_split) {
        const auto& wr = claims.at("warp_ratio");
        const auto& split = *cx.mf.warp_split;
        auto base_point_from = [&](const json& obj) {
            std::vector<double> b(split.base.size(), 0.0);
            for (std::size_t i = 0; i < split.base.size(); ++i) {
                const auto& pname = cx.mf.spec.params[static_cast<std::size_t>(split.base[i])];
                if (obj.contains(pname)) b[i] = obj.at(pname).get<double>();
            }
            return b;
        };
        try {
            const auto pa = base_point_from(wr.at("a"));
            const auto pb = base_point_from(wr.at("b"));
            const double la = warp_lambda(cx.mf.spec, split, pa, cx.grid.fiber_points,
                                          cx.grid.base_points.front(), cx.mf.tols.rank);
            const double lb = warp_lambda(cx.mf.spec, split, pb, cx.grid.fiber_points,
                                          cx.grid.base_points.front(), cx.mf.tols.rank);
            const double measured = std::sqrt(la / lb);
            const double c = wr.at("value").get<double>();
            push("warp_ratio", c, measured, std::abs(c - measured) <= 1e-8);
        } catch (const std::exception& e) {
            push("warp_ratio", wr.contains("value") ? wr.at("value") : json(), e.what(), false);
        }
    }
    return out;
}

}  // namespace

RunReport run(const Manifest& mf) {
    Timer total;
    RunReport rep;
    rep.manifest_echo = mf.echo();
    rep.seed = mf.seed;

    RunContext cx(mf);
    sample_points(cx);
    build_charts(cx);

    using CheckFn = CheckRecord (*)(RunContext&);
    const std::vector<std::pair<std::string, CheckFn>> order = {
        {"ambient_structure", &check_ambient_structure},
        {"chart_validity", &check_chart_validity},
        {"tangential_structure", &check_tangential_structure},
        {"distributions", &check_distributions},
        {"slant_block_identities", &check_slant_block_identities},
        {"normal_bundle_split", &check_normal_bundle_split},
        {"connection_identity", &check_connection_identity},
        {"bracket_identity", &check_bracket_identity},
        {"warp_structure", &check_warp_structure},
        {"warp_connection", &check_warp_connection},
        {"warp_sff_identities", &check_warp_sff_identities},
        {"dichotomy", &check_dichotomy},
    };

    const auto& selected = mf.selected_checks;
    auto wanted = [&](const std::string& id) {
        return selected.empty() ||
               std::find(selected.begin(), selected.end(), id) != selected.end();
    };

    for (const auto& [id, fn] : order) {
        Timer t;
        CheckRecord rec;
        try {
            rec = fn(cx);
        } catch (const std::exception& e) {
            rec.id = id;
            rec.status = "FAIL";
            rec.note = std::string("engine error: ") + e.what();
        }
        rec.wall_ms = t.ms();
        if (!wanted(id)) continue;
        if (rec.status == "PASS")
            ++rep.pass_count;
        else if (rec.status == "FAIL")
            ++rep.fail_count;
        else
            ++rep.precondition_count;
        rep.checks.push_back(std::move(rec));
    }

    try {
        rep.discrepancies = assemble_discrepancies(cx);
    } catch (const std::exception& e) {
        json d;
        d["claim"] = "claims";
        d["claimed"] = json();
        d["measured"] = std::string("error: ") + e.what();
        d["match"] = false;
        rep.discrepancies.push_back(std::move(d));
    }

    rep.total_ms = total.ms();
    return rep;
}

}  // namespace slantgeo
