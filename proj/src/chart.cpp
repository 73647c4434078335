#include "chart.hpp"

#include <cmath>

#include "jet.hpp"

namespace slantgeo {

PointChart evaluate_chart(const ImmersionSpec& spec, std::span<const double> point,
                          double rank_tol) {
    const int m = spec.param_count();
    const int n2 = spec.ambient.real_dim();
    if (static_cast<int>(point.size()) != m)
        throw ChartError("evaluate_chart: point dimension does not match parameter count");
    if (static_cast<int>(spec.components.size()) != n2)
        throw ChartError("evaluate_chart: component count does not match ambient dimension");

    PointChart ch;
    ch.point.assign(point.begin(), point.end());
    ch.position.assign(static_cast<std::size_t>(n2), 0.0);
    ch.tangents.assign(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(n2), 0.0));
    ch.hessian.assign(static_cast<std::size_t>(m),
                      std::vector<Vec>(static_cast<std::size_t>(m),
                                       Vec(static_cast<std::size_t>(n2), 0.0)));

    std::vector<Jet2> env;
    env.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) env.push_back(Jet2::seed(point, i));

    for (int c = 0; c < n2; ++c) {
        Jet2 jc;
        try {
            jc = evaluate<Jet2>(*spec.components[static_cast<std::size_t>(c)], spec.params, env);
        } catch (const EvalError& e) {
            throw ChartError("component " + std::to_string(c) + ": " + e.what());
        }
        ch.position[static_cast<std::size_t>(c)] = jc.value();
        for (int i = 0; i < m; ++i) {
            ch.tangents[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = jc.grad(i);
            for (int j = 0; j < m; ++j)
                ch.hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                          [static_cast<std::size_t>(c)] = jc.hess(i, j);
        }
    }

    ch.gram = Mat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            ch.gram(i, j) = dot(ch.tangents[static_cast<std::size_t>(i)],
                                ch.tangents[static_cast<std::size_t>(j)]);

    const auto ev = spd_eigenvalues(ch.gram);
    if (ev.empty() || ev.back() == 0.0 || ev.front() < 1e-8 * ev.back())
        throw ChartError("immersion is not regular at this point (Gram eigenvalue ratio " +
                         std::to_string(ev.empty() ? 0.0 : ev.front() / ev.back()) + ")");

    ch.tangent_space = gram_schmidt(ch.tangents, n2, rank_tol);
    if (ch.tangent_space.dim() != m)
        throw ChartError("immersion is not regular at this point (tangent rank " +
                         std::to_string(ch.tangent_space.dim()) + " < " + std::to_string(m) + ")");
    ch.normal_space = orthogonal_complement(ch.tangent_space, rank_tol);

    ch.gram_chol = cholesky(ch.gram);
    if (!ch.gram_chol.ok) throw ChartError("induced metric is not positive definite");
    return ch;
}

Vec tangent_to_ambient(const PointChart& chart, std::span<const double> coeff) {
    Vec out(static_cast<std::size_t>(chart.ambient_dim()), 0.0);
    for (int i = 0; i < chart.m(); ++i)
        axpy(coeff[static_cast<std::size_t>(i)], chart.tangents[static_cast<std::size_t>(i)], out);
    return out;
}

std::vector<double> ambient_to_tangent(const PointChart& chart, const Vec& v) {
    std::vector<double> rhs(static_cast<std::size_t>(chart.m()));
    for (int i = 0; i < chart.m(); ++i)
        rhs[static_cast<std::size_t>(i)] = dot(v, chart.tangents[static_cast<std::size_t>(i)]);
    return solve(chart.gram_chol, rhs);
}

PhiOmega phi_omega(const PointChart& chart, const Vec& v, double tol) {
    const double nv = norm(v);
    const Vec vt = project(v, chart.tangent_space);
    if (norm(sub(v, vt)) > tol * std::max(nv, 1.0))
        throw ChartError("phi_omega: vector is not tangent");
    const Vec jv = apply_J(v);
    PhiOmega out;
    out.phi = project(jv, chart.tangent_space);
    out.omega = sub(jv, out.phi);
    return out;
}

BCParts bc_decompose(const PointChart& chart, const Vec& n, double tol) {
    const double nn = norm(n);
    const Vec nt = project(n, chart.tangent_space);
    if (norm(nt) > tol * std::max(nn, 1.0))
        throw ChartError("bc_decompose: vector is not normal");
    const Vec jn = apply_J(n);
    BCParts out;
    out.b = project(jn, chart.tangent_space);
    out.c = sub(jn, out.b);
    return out;
}

Vec second_fundamental_form(const PointChart& chart, int i, int j) {
    const Vec& h = chart.hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return sub(h, project(h, chart.tangent_space));
}

double sff_inner(const PointChart& chart, std::span<const double> ca,
                 std::span<const double> cb, const Vec& n) {
    double s = 0.0;
    for (int i = 0; i < chart.m(); ++i) {
        if (ca[static_cast<std::size_t>(i)] == 0.0) continue;
        for (int j = 0; j < chart.m(); ++j) {
            if (cb[static_cast<std::size_t>(j)] == 0.0) continue;
            s += ca[static_cast<std::size_t>(i)] * cb[static_cast<std::size_t>(j)] *
                 dot(second_fundamental_form(chart, i, j), n);
        }
    }
    return s;
}

Mat shape_operator(const PointChart& chart, const Vec& n) {
    const int m = chart.m();
    Mat a(m, m);
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i)
            rhs[static_cast<std::size_t>(i)] = dot(second_fundamental_form(chart, i, j), n);
        const auto col = solve(chart.gram_chol, rhs);
        for (int k = 0; k < m; ++k) a(k, j) = col[static_cast<std::size_t>(k)];
    }
    return a;
}

std::vector<double> induced_connection(const PointChart& chart, int i, int j) {
    const Vec& h = chart.hessian[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    std::vector<double> rhs(static_cast<std::size_t>(chart.m()));
    for (int k = 0; k < chart.m(); ++k)
        rhs[static_cast<std::size_t>(k)] = dot(h, chart.tangents[static_cast<std::size_t>(k)]);
    return solve(chart.gram_chol, rhs);
}

Vec field_derivative(const AmbientField& field, std::span<const double> point, int direction,
                     double step) {
    std::vector<double> p(point.begin(), point.end());
    auto shifted = [&](double offset) {
        std::vector<double> q = p;
        q[static_cast<std::size_t>(direction)] += offset;
        return field(q);
    };
    const Vec f2p = shifted(2.0 * step);
    const Vec f1p = shifted(step);
    const Vec f1m = shifted(-step);
    const Vec f2m = shifted(-2.0 * step);
    Vec out(f1p.size(), 0.0);
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = (-f2p[c] + 8.0 * f1p[c] - 8.0 * f1m[c] + f2m[c]) / (12.0 * step);
    return out;
}

Vec normal_connection(const PointChart& chart, const AmbientField& field, int direction,
                      double step) {
    const Vec d = field_derivative(field, chart.point, direction, step);
    return sub(d, project(d, chart.tangent_space));
}

double weingarten_residual(const PointChart& chart, const AmbientField& field, int direction,
                           double step) {
    const Vec value_at_p = field(chart.point);
    const Vec d = field_derivative(field, chart.point, direction, step);
    const Vec dt = project(d, chart.tangent_space);
    std::vector<double> c = ambient_to_tangent(chart, dt);
    const Mat a = shape_operator(chart, value_at_p);
    for (int k = 0; k < chart.m(); ++k) c[static_cast<std::size_t>(k)] += a(k, direction);
    // metric norm of the coefficient residual
    double s = 0.0;
    for (int i = 0; i < chart.m(); ++i)
        for (int j = 0; j < chart.m(); ++j)
            s += c[static_cast<std::size_t>(i)] * chart.gram(i, j) * c[static_cast<std::size_t>(j)];
    return std::sqrt(std::max(s, 0.0));
}

}  // namespace slantgeo
