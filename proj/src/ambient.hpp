#pragma once

#include <span>

#include "linalg.hpp"

namespace slantgeo {

// Flat complex Euclidean ambient: C^n realized as R^{2n} with interleaved
// coordinates (x1, y1, x2, y2, ..., xn, yn) and the canonical complex
// structure acting per pair as (a, b) -> (-b, a). The structure tensor is
// constant, so the parallelism residual below is a sanity harness, not a
// discovery tool.
struct AmbientSpace {
    int complex_dim = 0;
    int real_dim() const { return 2 * complex_dim; }
};

// J v; exact (structured, no rounding). Throws on odd-dimensional input.
Vec apply_J(const Vec& v);

// max over pairs of |<Jv, Jw> - <v, w>|
double hermitian_compat_residual(std::span<const Vec> samples);

// Finite-difference derivative of the structure tensor along each direction:
// max absolute entry of (J(p + h d) - J(p - h d)) / (2h). Identically zero
// for the flat ambient.
double structure_parallel_residual(const AmbientSpace& space, std::span<const Vec> points,
                                   std::span<const Vec> directions, double step);

// max over pairs of |<Jv, w> + <v, Jw>|
double skew_adjoint_residual(std::span<const Vec> samples);

}  // namespace slantgeo
