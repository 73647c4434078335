#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slantgeo {

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

Vec scaled(const Vec& v, double c) {
    Vec out(v);
    for (auto& x : out) x *= c;
    return out;
}

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: dimension mismatch");
    Vec out(a);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sub: dimension mismatch");
    Vec out(a);
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

void axpy(double c, const Vec& x, Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("axpy: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

Subspace gram_schmidt(std::span<const Vec> vectors, int ambient_dim, double rank_tol) {
    if (rank_tol <= 0) throw std::invalid_argument("gram_schmidt: rank_tol must be positive");
    Subspace s;
    s.ambient_dim = ambient_dim;
    double max_norm = 0.0;
    for (const auto& v : vectors) max_norm = std::max(max_norm, norm(v));
    if (max_norm == 0.0) return s;
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != ambient_dim)
            throw std::invalid_argument("gram_schmidt: vector dimension mismatch");
        Vec u = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : s.basis) axpy(-dot(u, b), b, u);
        const double r = norm(u);
        if (r >= rank_tol * max_norm) s.basis.push_back(scaled(u, 1.0 / r));
    }
    return s;
}

Subspace orthogonal_complement(const Subspace& s, double rank_tol) {
    std::vector<Vec> all = s.basis;
    for (int k = 0; k < s.ambient_dim; ++k) {
        Vec e(static_cast<std::size_t>(s.ambient_dim), 0.0);
        e[static_cast<std::size_t>(k)] = 1.0;
        all.push_back(std::move(e));
    }
    Subspace full = gram_schmidt(all, s.ambient_dim, rank_tol);
    Subspace out;
    out.ambient_dim = s.ambient_dim;
    out.basis.assign(full.basis.begin() + s.dim(), full.basis.end());
    return out;
}

Vec project(const Vec& v, const Subspace& s) {
    if (static_cast<int>(v.size()) != s.ambient_dim)
        throw std::invalid_argument("project: dimension mismatch");
    Vec out(v.size(), 0.0);
    for (const auto& b : s.basis) axpy(dot(v, b), b, out);
    return out;
}

double angle_vector_subspace(const Vec& v, const Subspace& s) {
    const double nv = norm(v);
    if (nv == 0.0) throw std::invalid_argument("angle_vector_subspace: zero vector");
    const double np = norm(project(v, s));
    return std::acos(std::clamp(np / nv, 0.0, 1.0));
}

void jacobi_svd(Mat& w, Mat& v) {
    const int c = w.cols;
    v = Mat(c, c);
    for (int i = 0; i < c; ++i) v(i, i) = 1.0;
    if (c < 2) return;

    auto coldot = [&](int p, int q) {
        double s = 0.0;
        for (int i = 0; i < w.rows; ++i) s += w(i, p) * w(i, q);
        return s;
    };

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < c - 1; ++p) {
            for (int q = p + 1; q < c; ++q) {
                const double app = coldot(p, p);
                const double aqq = coldot(q, q);
                const double apq = coldot(p, q);
                const double denom = std::sqrt(app * aqq);
                if (denom == 0.0 || std::abs(apq) <= 1e-300) continue;
                off = std::max(off, std::abs(apq) / denom);
                if (std::abs(apq) <= 1e-16 * denom) continue;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int i = 0; i < w.rows; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = cs * wp - sn * wq;
                    w(i, q) = sn * wp + cs * wq;
                }
                for (int i = 0; i < c; ++i) {
                    const double vp = v(i, p), vq = v(i, q);
                    v(i, p) = cs * vp - sn * vq;
                    v(i, q) = sn * vp + cs * vq;
                }
            }
        }
        if (off < 1e-14) break;
    }
}

std::vector<double> spd_eigenvalues(const Mat& s) {
    Mat w = s;
    Mat v;
    jacobi_svd(w, v);
    std::vector<double> ev(static_cast<std::size_t>(s.cols));
    for (int j = 0; j < s.cols; ++j) {
        double n2 = 0.0;
        for (int i = 0; i < s.rows; ++i) n2 += w(i, j) * w(i, j);
        ev[static_cast<std::size_t>(j)] = std::sqrt(n2);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b, double tol) {
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("subspace_intersection: ambient dimension mismatch");
    Subspace out;
    out.ambient_dim = a.ambient_dim;
    if (a.dim() == 0 || b.dim() == 0) return out;

    Mat cross(a.dim(), b.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) cross(i, j) = dot(a.basis[i], b.basis[j]);

    Mat w = cross, v;
    jacobi_svd(w, v);
    std::vector<Vec> members;
    for (int j = 0; j < w.cols; ++j) {
        double sigma2 = 0.0;
        for (int i = 0; i < w.rows; ++i) sigma2 += w(i, j) * w(i, j);
        const double sigma = std::sqrt(sigma2);
        if (sigma >= 1.0 - tol) {
            Vec dir(static_cast<std::size_t>(a.ambient_dim), 0.0);
            for (int i = 0; i < a.dim(); ++i) axpy(w(i, j) / sigma, a.basis[i], dir);
            members.push_back(std::move(dir));
        }
    }
    return gram_schmidt(members, a.ambient_dim, 1e-9);
}

Cholesky cholesky(const Mat& spd) {
    Cholesky f;
    const int n = spd.rows;
    f.l = Mat(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = spd(i, j);
            for (int k = 0; k < j; ++k) s -= f.l(i, k) * f.l(j, k);
            if (i == j) {
                if (s <= 0.0) return f;  // not positive definite
                f.l(i, i) = std::sqrt(s);
            } else {
                f.l(i, j) = s / f.l(j, j);
            }
        }
    }
    f.ok = true;
    return f;
}

std::vector<double> solve(const Cholesky& f, std::span<const double> rhs) {
    if (!f.ok) throw std::runtime_error("solve: matrix is not positive definite");
    const int n = f.l.rows;
    std::vector<double> y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = rhs[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= f.l(i, k) * y[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = s / f.l(i, i);
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
        double s = y[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < n; ++k) s -= f.l(k, i) * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / f.l(i, i);
    }
    return x;
}

}  // namespace slantgeo
