#include "slant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace slantgeo {

namespace {

constexpr std::uint64_t kProbeStream = 0x5dd1;

Vec block_vector(const PointChart& chart, std::span<const int> block,
                 std::span<const double> local) {
    Vec out(static_cast<std::size_t>(chart.ambient_dim()), 0.0);
    for (std::size_t k = 0; k < block.size(); ++k)
        axpy(local[k], chart.tangents[static_cast<std::size_t>(block[k])], out);
    return out;
}

void accumulate(BlockStats& stats, double angle) {
    if (stats.samples == 0) {
        stats.min_angle = stats.max_angle = angle;
    } else {
        stats.min_angle = std::min(stats.min_angle, angle);
        stats.max_angle = std::max(stats.max_angle, angle);
    }
    // mean accumulates in mean_angle until finalize()
    stats.mean_angle += angle;
    ++stats.samples;
    stats.empty = false;
}

void finalize(BlockStats& stats, double angle_tol) {
    if (stats.empty) {
        stats.classification = "empty";
        return;
    }
    stats.mean_angle /= stats.samples;
    stats.max_dev =
        std::max(stats.max_angle - stats.mean_angle, stats.mean_angle - stats.min_angle);
    if (stats.mean_angle < angle_tol)
        stats.classification = "invariant";
    else if (std::abs(stats.mean_angle - std::numbers::pi / 2.0) < angle_tol)
        stats.classification = "anti-invariant";
    else if (stats.max_dev < angle_tol)
        stats.classification = "proper-slant";
    else
        stats.classification = "non-constant";
}

}  // namespace

Subspace block_span(const PointChart& chart, std::span<const int> block, double rank_tol) {
    std::vector<Vec> vs;
    vs.reserve(block.size());
    for (int idx : block) vs.push_back(chart.tangents[static_cast<std::size_t>(idx)]);
    return gram_schmidt(vs, chart.ambient_dim(), rank_tol);
}

std::vector<double> block_coefficients(std::span<const int> block, std::span<const double> local,
                                       int m) {
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (std::size_t k = 0; k < block.size(); ++k)
        out[static_cast<std::size_t>(block[k])] = local[k];
    return out;
}

double distribution_slant_angle(const PointChart& chart, std::span<const int> block,
                                std::span<const double> local_probe, double rank_tol) {
    const Vec probe = block_vector(chart, block, local_probe);
    if (norm(probe) == 0.0)
        throw std::invalid_argument("distribution_slant_angle: zero probe");
    return angle_vector_subspace(apply_J(probe), block_span(chart, block, rank_tol));
}

double wirtinger_angle(const PointChart& chart, const Vec& v) {
    if (norm(v) == 0.0) throw std::invalid_argument("wirtinger_angle: zero vector");
    return angle_vector_subspace(apply_J(v), chart.tangent_space);
}

Subspace auto_invariant_block(const PointChart& chart, double sv_tol) {
    Subspace jt;
    jt.ambient_dim = chart.tangent_space.ambient_dim;
    jt.basis.reserve(chart.tangent_space.basis.size());
    for (const auto& b : chart.tangent_space.basis) jt.basis.push_back(apply_J(b));
    return subspace_intersection(chart.tangent_space, jt, sv_tol);
}

ProjectionTriple project_PQR(const PointChart& chart, const DistributionAssignment& asg,
                             const Vec& v, double rank_tol) {
    ProjectionTriple out;
    out.p = project(v, block_span(chart, asg.invariant, rank_tol));
    out.q = project(v, block_span(chart, asg.slant1, rank_tol));
    out.r = project(v, block_span(chart, asg.slant2, rank_tol));
    Vec rest = sub(sub(sub(v, out.p), out.q), out.r);
    out.residual = norm(rest);
    return out;
}

StructureReport verify_distribution_structure(const ImmersionSpec& spec,
                                              const DistributionAssignment& asg,
                                              const std::vector<PointChart>& charts,
                                              double angle_tol, double ortho_tol,
                                              int probes_per_block, const Rng& rng,
                                              double rank_tol) {
    StructureReport rep;
    const int m = spec.param_count();

    struct NamedBlock {
        const std::vector<int>* idx;
        BlockStats* stats;
    };
    const std::array<NamedBlock, 3> blocks = {{{&asg.invariant, &rep.invariant_block},
                                               {&asg.slant1, &rep.slant1},
                                               {&asg.slant2, &rep.slant2}}};

    // cross terms tracked per coordinate pair across all points
    struct PairTrack {
        int i, j;
        double value = 0.0;  // signed value at the worst point
    };
    std::vector<PairTrack> pairs;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            for (int i : *blocks[static_cast<std::size_t>(a)].idx)
                for (int j : *blocks[static_cast<std::size_t>(b)].idx)
                    pairs.push_back({i, j, 0.0});

    for (std::size_t pi = 0; pi < charts.size(); ++pi) {
        const PointChart& ch = charts[pi];
        Rng probe_rng = rng.fork(kProbeStream, pi);

        // (a) cross-block Gram entries
        for (auto& pt : pairs) {
            const double val = ch.gram(pt.i, pt.j);
            if (std::abs(val) > std::abs(pt.value)) pt.value = val;
            const double ni = std::sqrt(ch.gram(pt.i, pt.i));
            const double nj = std::sqrt(ch.gram(pt.j, pt.j));
            rep.ortho_max_abs = std::max(rep.ortho_max_abs, std::abs(val));
            if (ni > 0 && nj > 0)
                rep.ortho_max_rel = std::max(rep.ortho_max_rel, std::abs(val) / (ni * nj));
        }

        // (b) invariance of D under J
        if (!asg.invariant.empty()) {
            const Subspace dspan = block_span(ch, asg.invariant, rank_tol);
            for (int k = 0; k < probes_per_block; ++k) {
                auto local = probe_rng.coefficients(static_cast<int>(asg.invariant.size()));
                Vec probe = block_vector(ch, asg.invariant, local);
                const double np = norm(probe);
                if (np == 0.0) continue;
                probe = scaled(probe, 1.0 / np);
                const auto po = phi_omega(ch, probe, 1e-6);
                rep.d_omega_max = std::max(rep.d_omega_max, norm(po.omega));
                rep.d_angle_max =
                    std::max(rep.d_angle_max, angle_vector_subspace(apply_J(probe), dspan));
            }
        }

        // (c) one-sided J(D1) ⊥ D2 plus the mirrored form
        for (int i : asg.slant1) {
            const Vec jd1 = apply_J(ch.tangents[static_cast<std::size_t>(i)]);
            const double ni = norm(ch.tangents[static_cast<std::size_t>(i)]);
            for (int j : asg.slant2) {
                const double nj = norm(ch.tangents[static_cast<std::size_t>(j)]);
                const double v = dot(jd1, ch.tangents[static_cast<std::size_t>(j)]);
                rep.c_one_sided = std::max(rep.c_one_sided, std::abs(v));
                if (ni > 0 && nj > 0)
                    rep.c_one_sided_rel = std::max(rep.c_one_sided_rel, std::abs(v) / (ni * nj));
            }
        }
        for (int j : asg.slant2) {
            const Vec jd2 = apply_J(ch.tangents[static_cast<std::size_t>(j)]);
            const double nj = norm(ch.tangents[static_cast<std::size_t>(j)]);
            for (int i : asg.slant1) {
                const double ni = norm(ch.tangents[static_cast<std::size_t>(i)]);
                const double v = dot(jd2, ch.tangents[static_cast<std::size_t>(i)]);
                rep.c_mirrored = std::max(rep.c_mirrored, std::abs(v));
                if (ni > 0 && nj > 0)
                    rep.c_mirrored_rel = std::max(rep.c_mirrored_rel, std::abs(v) / (ni * nj));
            }
        }

        // (d)/(e) slant-angle samples, plus angles of D for the classifier
        for (const auto& blk : blocks) {
            if (blk.idx->empty()) continue;
            for (int k = 0; k < probes_per_block; ++k) {
                auto local = probe_rng.coefficients(static_cast<int>(blk.idx->size()));
                accumulate(*blk.stats, distribution_slant_angle(ch, *blk.idx, local, rank_tol));
            }
        }

        // projection reassembly for one random unit tangent
        {
            auto local = probe_rng.coefficients(m);
            Vec v = tangent_to_ambient(ch, local);
            const double nv = norm(v);
            if (nv > 0) {
                v = scaled(v, 1.0 / nv);
                rep.pqr_max_residual =
                    std::max(rep.pqr_max_residual, project_PQR(ch, asg, v, rank_tol).residual);
            }
        }
    }

    for (const auto& blk : blocks) finalize(*blk.stats, angle_tol);

    for (const auto& pt : pairs)
        rep.cross_terms.push_back({spec.params[static_cast<std::size_t>(pt.i)],
                                   spec.params[static_cast<std::size_t>(pt.j)], pt.value});

    rep.a_pass = rep.ortho_max_rel < ortho_tol;
    rep.b_pass = asg.invariant.empty() || rep.d_angle_max < angle_tol;
    rep.c_pass = rep.c_one_sided_rel < ortho_tol;
    rep.d_pass = rep.slant1.empty ? true : rep.slant1.max_dev < angle_tol;
    rep.e_pass = rep.slant2.empty ? true : rep.slant2.max_dev < angle_tol;
    return rep;
}

BlockIdentityResiduals check_block_identities(const PointChart& chart, std::span<const int> block,
                                              double theta,
                                              std::span<const std::vector<double>> local_probes,
                                              double rank_tol) {
    BlockIdentityResiduals res;
    const double c2 = std::cos(theta) * std::cos(theta);
    const double s2 = 1.0 - c2;
    const Subspace span = block_span(chart, block, rank_tol);

    struct ProbeData {
        Vec x;       // unit ambient probe in the block
        Vec phi;     // projection of Jx back onto the block
        Vec omega;   // full normal part of Jx
    };
    std::vector<ProbeData> data;
    for (const auto& local : local_probes) {
        ProbeData d;
        d.x = block_vector(chart, block, local);
        const double nx = norm(d.x);
        if (nx == 0.0) continue;
        d.x = scaled(d.x, 1.0 / nx);
        const Vec jx = apply_J(d.x);
        d.phi = project(jx, span);
        d.omega = sub(jx, project(jx, chart.tangent_space));
        data.push_back(std::move(d));
    }

    for (const auto& d : data) {
        // phi_blk^2 X + cos^2(theta) X
        Vec phi2 = project(apply_J(d.phi), span);
        axpy(c2, d.x, phi2);
        res.r1 = std::max(res.r1, norm(phi2));
    }
    for (std::size_t a = 0; a < data.size(); ++a) {
        for (std::size_t b = a; b < data.size(); ++b) {
            const double gxy = dot(data[a].x, data[b].x);
            res.r2 = std::max(res.r2,
                              std::abs(dot(data[a].phi, data[b].phi) - c2 * gxy));
            res.r3 = std::max(res.r3,
                              std::abs(dot(data[a].omega, data[b].omega) - s2 * gxy));
            ++res.pairs;
        }
    }
    return res;
}

NormalDecomposition normal_decomposition(const PointChart& chart,
                                         const DistributionAssignment& asg, double rank_tol) {
    NormalDecomposition out;
    auto omega_span = [&](const std::vector<int>& block) {
        std::vector<Vec> ws;
        for (int idx : block) {
            const auto po = phi_omega(chart, chart.tangents[static_cast<std::size_t>(idx)], 1e-6);
            ws.push_back(po.omega);
        }
        return gram_schmidt(ws, chart.ambient_dim(), rank_tol);
    };
    out.omega_d1 = omega_span(asg.slant1);
    out.omega_d2 = omega_span(asg.slant2);

    std::vector<Vec> omega_all = out.omega_d1.basis;
    omega_all.insert(omega_all.end(), out.omega_d2.basis.begin(), out.omega_d2.basis.end());
    const Subspace omega_sum = gram_schmidt(omega_all, chart.ambient_dim(), rank_tol);

    std::vector<Vec> mu_candidates;
    for (const auto& n : chart.normal_space.basis)
        mu_candidates.push_back(sub(n, project(n, omega_sum)));
    out.mu = gram_schmidt(mu_candidates, chart.ambient_dim(), 1e-7);

    // complement of mu inside the full ambient space
    std::vector<Vec> comp = chart.tangent_space.basis;
    comp.insert(comp.end(), omega_sum.basis.begin(), omega_sum.basis.end());
    const Subspace mu_complement = gram_schmidt(comp, chart.ambient_dim(), rank_tol);
    for (const auto& b : out.mu.basis) {
        out.mu_invariance_residual =
            std::max(out.mu_invariance_residual, norm(project(apply_J(b), mu_complement)));
    }
    return out;
}

}  // namespace slantgeo
