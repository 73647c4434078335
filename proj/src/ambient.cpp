#include "ambient.hpp"

#include <cmath>
#include <stdexcept>

namespace slantgeo {

Vec apply_J(const Vec& v) {
    if (v.size() % 2 != 0) throw std::invalid_argument("apply_J: dimension must be even");
    Vec out(v.size());
    for (std::size_t k = 0; k + 1 < v.size(); k += 2) {
        out[k] = -v[k + 1];
        out[k + 1] = v[k];
    }
    return out;
}

double hermitian_compat_residual(std::span<const Vec> samples) {
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Vec ji = apply_J(samples[i]);
        for (std::size_t j = i; j < samples.size(); ++j) {
            const Vec jj = apply_J(samples[j]);
            worst = std::max(worst, std::abs(dot(ji, jj) - dot(samples[i], samples[j])));
        }
    }
    return worst;
}

double structure_parallel_residual(const AmbientSpace& space, std::span<const Vec> points,
                                   std::span<const Vec> directions, double step) {
    // the structure matrix ignores the base point; evaluate it pointwise anyway
    const int n2 = space.real_dim();
    auto j_matrix_at = [&](const Vec& /*point*/) {
        Mat m(n2, n2);
        for (int c = 0; c < n2; ++c) {
            Vec e(static_cast<std::size_t>(n2), 0.0);
            e[static_cast<std::size_t>(c)] = 1.0;
            const Vec je = apply_J(e);
            for (int r = 0; r < n2; ++r) m(r, c) = je[static_cast<std::size_t>(r)];
        }
        return m;
    };

    double worst = 0.0;
    for (const auto& p : points) {
        for (const auto& d : directions) {
            Vec fwd = p, bwd = p;
            axpy(step, d, fwd);
            axpy(-step, d, bwd);
            const Mat a = j_matrix_at(fwd);
            const Mat b = j_matrix_at(bwd);
            for (std::size_t k = 0; k < a.a.size(); ++k)
                worst = std::max(worst, std::abs((a.a[k] - b.a[k]) / (2.0 * step)));
        }
    }
    return worst;
}

double skew_adjoint_residual(std::span<const Vec> samples) {
    double worst = 0.0;
    for (const auto& v : samples) {
        const Vec jv = apply_J(v);
        for (const auto& w : samples) {
            worst = std::max(worst, std::abs(dot(jv, w) + dot(v, apply_J(w))));
        }
    }
    return worst;
}

}  // namespace slantgeo
