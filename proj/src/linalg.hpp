#pragma once

#include <span>
#include <vector>

namespace slantgeo {

// Dense vectors/matrices in the ambient space (dimension 2n, n <= ~8).
// Everything here is sized for tiny problems; no external solver is used.
using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm(const Vec& v);
Vec scaled(const Vec& v, double c);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
void axpy(double c, const Vec& x, Vec& y);  // y += c*x

struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

// Subspace of the ambient space held as a pairwise-orthonormal basis.
struct Subspace {
    int ambient_dim = 0;
    std::vector<Vec> basis;

    int dim() const { return static_cast<int>(basis.size()); }
};

// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
// residual norm falls below rank_tol * (largest input norm) are dropped.
Subspace gram_schmidt(std::span<const Vec> vectors, int ambient_dim, double rank_tol = 1e-9);

// Orthonormal basis of the orthogonal complement of s.
Subspace orthogonal_complement(const Subspace& s, double rank_tol = 1e-9);

Vec project(const Vec& v, const Subspace& s);

// Angle in [0, pi/2] between v and the subspace; throws on a zero vector.
double angle_vector_subspace(const Vec& v, const Subspace& s);

// Intersection via principal vectors: one-sided Jacobi SVD of the cross-Gram
// matrix of the two orthonormal bases; singular values >= 1 - tol survive.
Subspace subspace_intersection(const Subspace& a, const Subspace& b, double tol);

// One-sided Jacobi SVD: on return the columns of w are U*diag(sigma) and v
// accumulates the right singular vectors (w_in = U*diag(sigma)*v^T).
void jacobi_svd(Mat& w, Mat& v);

// Eigenvalues of a symmetric positive semi-definite matrix, ascending.
std::vector<double> spd_eigenvalues(const Mat& s);

struct Cholesky {
    Mat l;
    bool ok = false;
};

Cholesky cholesky(const Mat& spd);
std::vector<double> solve(const Cholesky& f, std::span<const double> rhs);

}  // namespace slantgeo
