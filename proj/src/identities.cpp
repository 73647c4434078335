#include "identities.hpp"

#include <cmath>

namespace slantgeo {

namespace {

std::vector<double> restricted(std::span<const double> coeff, std::span<const int> block) {
    std::vector<double> out(coeff.size(), 0.0);
    for (int idx : block) out[static_cast<std::size_t>(idx)] = coeff[static_cast<std::size_t>(idx)];
    return out;
}

bool all_zero(std::span<const double> c) {
    for (double v : c)
        if (v != 0.0) return false;
    return true;
}

Vec omega_of(const PointChart& chart, std::span<const double> coeff) {
    const Vec amb = tangent_to_ambient(chart, coeff);
    const Vec j = apply_J(amb);
    return sub(j, project(j, chart.tangent_space));
}

Vec phi_of(const PointChart& chart, std::span<const double> coeff) {
    return project(apply_J(tangent_to_ambient(chart, coeff)), chart.tangent_space);
}

// omega(phi(V)): normal part of J applied to the tangential part of J V
Vec omega_phi_of(const PointChart& chart, std::span<const double> coeff) {
    const Vec phi = phi_of(chart, coeff);
    const Vec jphi = apply_J(phi);
    return sub(jphi, project(jphi, chart.tangent_space));
}

// coefficients of nabla_X Y for constant-coefficient fields
std::vector<double> connection_of(const PointChart& chart, std::span<const double> xc,
                                  std::span<const double> yc) {
    std::vector<double> out(static_cast<std::size_t>(chart.m()), 0.0);
    for (int i = 0; i < chart.m(); ++i) {
        if (xc[static_cast<std::size_t>(i)] == 0.0) continue;
        for (int j = 0; j < chart.m(); ++j) {
            if (yc[static_cast<std::size_t>(j)] == 0.0) continue;
            const auto c = induced_connection(chart, i, j);
            const double w = xc[static_cast<std::size_t>(i)] * yc[static_cast<std::size_t>(j)];
            for (int k = 0; k < chart.m(); ++k)
                out[static_cast<std::size_t>(k)] += w * c[static_cast<std::size_t>(k)];
        }
    }
    return out;
}

double metric_inner(const PointChart& chart, std::span<const double> a,
                    std::span<const double> b) {
    double s = 0.0;
    for (int i = 0; i < chart.m(); ++i)
        for (int j = 0; j < chart.m(); ++j)
            s += a[static_cast<std::size_t>(i)] * chart.gram(i, j) *
                 b[static_cast<std::size_t>(j)];
    return s;
}

// nabla^perp_X of a normal field, FD along each coordinate direction in X
Vec normal_connection_along(const ImmersionSpec& spec, const PointChart& chart,
                            std::span<const double> xc, const AmbientField& field,
                            double fd_step) {
    Vec out(static_cast<std::size_t>(chart.ambient_dim()), 0.0);
    for (int i = 0; i < chart.m(); ++i) {
        if (xc[static_cast<std::size_t>(i)] == 0.0) continue;
        const Vec d = field_derivative(field, chart.point, i, fd_step);
        axpy(xc[static_cast<std::size_t>(i)], d, out);
    }
    (void)spec;
    return sub(out, project(out, chart.tangent_space));
}

}  // namespace

AmbientField omega_field(const ImmersionSpec& spec, std::vector<double> coeff, double rank_tol) {
    return [&spec, coeff = std::move(coeff), rank_tol](std::span<const double> p) -> Vec {
        const PointChart ch = evaluate_chart(spec, p, rank_tol);
        return omega_of(ch, coeff);
    };
}

IdentitySides connection_identity_sides(const ImmersionSpec& spec, const PointChart& chart,
                                        const DistributionAssignment& asg,
                                        std::span<const double> xc, std::span<const double> yc,
                                        std::span<const double> zc, double theta1, double theta2,
                                        double fd_step, double rank_tol) {
    const double c1 = std::cos(theta1) * std::cos(theta1);
    const double c2 = std::cos(theta2) * std::cos(theta2);
    const double s1 = 1.0 - c1;
    const double s2 = 1.0 - c2;

    const Vec phi_z = phi_of(chart, zc);
    const std::vector<double> phi_zc = ambient_to_tangent(chart, phi_z);

    IdentitySides out;
    out.left = metric_inner(chart, connection_of(chart, xc, yc), phi_zc);

    const std::vector<double> qy = restricted(yc, asg.slant1);
    const std::vector<double> ry = restricted(yc, asg.slant2);

    const Vec om_phi_qy = omega_phi_of(chart, qy);
    const Vec om_phi_ry = omega_phi_of(chart, ry);
    const Vec om_z = omega_of(chart, zc);
    const Vec om_qy = omega_of(chart, qy);
    const Vec om_ry = omega_of(chart, ry);

    const double t1 = c1 * metric_inner(chart, connection_of(chart, xc, qy), phi_zc);
    const double t2 = sff_inner(chart, phi_zc, xc, om_phi_qy);
    const double t3 = -s1 * sff_inner(chart, xc, qy, om_z);
    const double t4 = c2 * metric_inner(chart, connection_of(chart, xc, ry), phi_zc);
    const double t5 = sff_inner(chart, phi_zc, xc, om_phi_ry);
    const double t6 = -s2 * sff_inner(chart, xc, ry, om_z);

    double t7 = 0.0, t8 = 0.0;
    // the terms are pointwise products with om_phi_qy / om_phi_ry, so the FD
    // derivative is only needed when one of the multipliers is nonzero here
    if (!all_zero(xc) && (norm(om_phi_qy) > 0.0 || norm(om_phi_ry) > 0.0)) {
        std::vector<double> zvec(zc.begin(), zc.end());
        const Vec nperp =
            normal_connection_along(spec, chart, xc, omega_field(spec, zvec, rank_tol), fd_step);
        t7 = dot(nperp, om_phi_qy);
        t8 = dot(nperp, om_phi_ry);
    }
    const double t9 = sff_inner(chart, zc, xc, om_qy);
    const double t10 = sff_inner(chart, zc, xc, om_ry);

    out.right = t1 + t2 + t3 + t4 + t5 + t6 + t7 + t8 + t9 + t10;
    for (double t : {out.left, t1, t2, t3, t4, t5, t6, t7, t8, t9, t10})
        out.scale = std::max(out.scale, std::abs(t));
    return out;
}

IdentitySides bracket_identity_sides(const ImmersionSpec& spec, const PointChart& chart,
                                     const DistributionAssignment& asg,
                                     std::span<const double> xc, std::span<const double> yc,
                                     std::span<const double> zc, double fd_step,
                                     double rank_tol) {
    (void)asg;
    const Vec phi_x = phi_of(chart, xc);
    const std::vector<double> phi_xc = ambient_to_tangent(chart, phi_x);

    const Vec om_phi_y = omega_phi_of(chart, yc);
    const Vec om_phi_z = omega_phi_of(chart, zc);
    const Vec om_y = omega_of(chart, yc);
    const Vec om_z = omega_of(chart, zc);

    IdentitySides out;
    out.left = 0.0;  // coordinate fields commute

    const double t1 = sff_inner(chart, phi_xc, yc, om_phi_z);
    const double t2 = -sff_inner(chart, phi_xc, zc, om_phi_y);
    double t3 = 0.0, t4 = 0.0;
    {
        std::vector<double> xvec(xc.begin(), xc.end());
        const AmbientField wx = omega_field(spec, xvec, rank_tol);
        if (!all_zero(yc) && norm(om_phi_z) > 0.0)
            t3 = dot(normal_connection_along(spec, chart, yc, wx, fd_step), om_phi_z);
        if (!all_zero(zc) && norm(om_phi_y) > 0.0)
            t4 = -dot(normal_connection_along(spec, chart, zc, wx, fd_step), om_phi_y);
    }
    const double t5 = sff_inner(chart, xc, yc, om_z);
    const double t6 = -sff_inner(chart, xc, zc, om_y);

    out.right = t1 + t2 + t3 + t4 + t5 + t6;
    for (double t : {t1, t2, t3, t4, t5, t6}) out.scale = std::max(out.scale, std::abs(t));
    return out;
}

IdentitySides warp_sff_identity_sides(const PointChart& chart, const DistributionAssignment& asg,
                                      std::span<const double> xc, std::span<const double> yc,
                                      std::span<const double> zc) {
    IdentitySides out;
    const Vec om_z = omega_of(chart, zc);
    const Vec om_qy = omega_of(chart, restricted(yc, asg.slant1));
    const Vec om_ry = omega_of(chart, restricted(yc, asg.slant2));
    out.left = sff_inner(chart, xc, yc, om_z);
    const double ra = sff_inner(chart, xc, zc, om_qy);
    const double rb = sff_inner(chart, xc, zc, om_ry);
    out.right = ra + rb;
    for (double t : {out.left, ra, rb}) out.scale = std::max(out.scale, std::abs(t));
    return out;
}

IdentitySides warp_sff_fiber_identity_sides(const PointChart& chart,
                                            const DistributionAssignment& asg,
                                            std::span<const double> xc,
                                            std::span<const double> zc,
                                            std::span<const double> wc) {
    IdentitySides out;
    const Vec om_w = omega_of(chart, wc);
    const Vec om_qz = omega_of(chart, restricted(zc, asg.slant1));
    const Vec om_rz = omega_of(chart, restricted(zc, asg.slant2));
    out.left = sff_inner(chart, xc, zc, om_w);
    const double ra = sff_inner(chart, xc, wc, om_qz);
    const double rb = sff_inner(chart, xc, wc, om_rz);
    out.right = ra + rb;
    for (double t : {out.left, ra, rb}) out.scale = std::max(out.scale, std::abs(t));
    return out;
}

SkewnessResiduals skewness_residuals(const PointChart& chart,
                                     std::span<const std::vector<double>> probes) {
    SkewnessResiduals out;
    std::vector<Vec> xs, phis;
    for (const auto& c : probes) {
        Vec x = tangent_to_ambient(chart, c);
        const double nx = norm(x);
        if (nx == 0.0) continue;
        x = scaled(x, 1.0 / nx);
        phis.push_back(project(apply_J(x), chart.tangent_space));
        xs.push_back(std::move(x));
    }
    for (std::size_t a = 0; a < xs.size(); ++a) {
        for (std::size_t b = 0; b < xs.size(); ++b) {
            const double pxy = dot(phis[a], xs[b]);
            const double xpy = dot(xs[a], phis[b]);
            out.skew = std::max(out.skew, std::abs(pxy + xpy));
            out.symmetric = std::max(out.symmetric, std::abs(pxy - xpy));
        }
    }
    return out;
}

}  // namespace slantgeo
