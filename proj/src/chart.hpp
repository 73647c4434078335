#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ambient.hpp"
#include "expr.hpp"
#include "linalg.hpp"

namespace slantgeo {

// Parametric immersion chi: parameter names plus one expression per ambient
// coordinate, in the interleaved (x1, y1, ..., xn, yn) order.
struct ImmersionSpec {
    std::vector<std::string> params;
    std::vector<Ast::Ptr> components;
    AmbientSpace ambient;

    int param_count() const { return static_cast<int>(params.size()); }
};

struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Everything computed at one parameter point. Frames are gauge-fixed by
// processing coordinate vectors in declaration order; reported quantities
// downstream are gauge-invariant.
struct PointChart {
    std::vector<double> point;             // m
    Vec position;                          // 2n
    std::vector<Vec> tangents;             // m coordinate tangent vectors
    std::vector<std::vector<Vec>> hessian; // m x m ambient vectors, symmetric
    Subspace tangent_space;                // dim m
    Subspace normal_space;                 // dim 2n - m
    Mat gram;                              // m x m, positive definite
    Cholesky gram_chol;

    int m() const { return static_cast<int>(point.size()); }
    int ambient_dim() const { return static_cast<int>(position.size()); }
};

// Builds the chart from one second-order jet evaluation per component.
// Throws ChartError on rank deficiency (smallest Gram eigenvalue below
// 1e-8 x largest) or an expression domain error.
PointChart evaluate_chart(const ImmersionSpec& spec, std::span<const double> point,
                          double rank_tol = 1e-9);

// coefficient vector over the coordinate frame <-> ambient representative
Vec tangent_to_ambient(const PointChart& chart, std::span<const double> coeff);
std::vector<double> ambient_to_tangent(const PointChart& chart, const Vec& v);

struct PhiOmega {
    Vec phi;    // tangential part of J v
    Vec omega;  // normal part; phi + omega = J v exactly
};

// v must be tangent within tol * |v|.
PhiOmega phi_omega(const PointChart& chart, const Vec& v, double tol = 1e-8);

struct BCParts {
    Vec b;  // tangential part of J n
    Vec c;  // normal part
};

// n must be normal within tol * |n|.
BCParts bc_decompose(const PointChart& chart, const Vec& n, double tol = 1e-8);

// sigma(d_i, d_j): normal part of chi_{u_i u_j}; symmetric in (i, j).
Vec second_fundamental_form(const PointChart& chart, int i, int j);

// <sigma(A, B), n> for coefficient vectors over the coordinate frame.
double sff_inner(const PointChart& chart, std::span<const double> ca,
                 std::span<const double> cb, const Vec& n);

// Matrix of the shape operator over the coordinate frame: column j holds the
// coefficients of A d_j, defined by g(A d_j, d_i) = <sigma(i,j), n>.
Mat shape_operator(const PointChart& chart, const Vec& n);

// Coefficients of nabla_{d_i} d_j = tangential projection of chi_{u_i u_j}.
std::vector<double> induced_connection(const PointChart& chart, int i, int j);

using AmbientField = std::function<Vec(std::span<const double>)>;

// 4th-order central difference (Richardson-extrapolated) along parameter i.
Vec field_derivative(const AmbientField& field, std::span<const double> point, int direction,
                     double step = 1e-4);

// Normal projection of the field derivative at the chart's point. The field
// must be pointwise normal.
Vec normal_connection(const PointChart& chart, const AmbientField& field, int direction,
                      double step = 1e-4);

// |tangential part of d(field)/du_i + A_{field(p)} d_i|_g  (Weingarten check)
double weingarten_residual(const PointChart& chart, const AmbientField& field, int direction,
                           double step = 1e-4);

}  // namespace slantgeo
