#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace slantgeo {

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adapter the generic expression evaluator uses to stay agnostic of the
// scalar carrier (plain double or a jet).
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static double constant(double c) { return c; }
    static double value(double s) { return s; }
    static bool deriv_free(double) { return true; }
};

// Integer exponents use binary exponentiation, anything else exp(y*log x)
// with x > 0. Both carriers take the same branches and the same value-level
// multiplication sequence, so double evaluation matches jet value parts
// exactly.
template <class S>
S pow_scalar(const S& base, const S& expo) {
    using T = scalar_traits<S>;
    const double ev = T::value(expo);
    if (T::deriv_free(expo) && std::nearbyint(ev) == ev && std::abs(ev) <= 1e9) {
        const long n = static_cast<long>(ev);
        if (n < 0 && T::value(base) == 0.0) throw EvalError("zero base with negative integer exponent");
        S acc = T::constant(1.0);
        S b = base;
        long k = n < 0 ? -n : n;
        while (k > 0) {
            if (k & 1) acc = acc * b;
            k >>= 1;
            if (k > 0) b = b * b;
        }
        if (n < 0) return T::constant(1.0) / acc;
        return acc;
    }
    if (T::value(base) <= 0.0) throw EvalError("non-integer power of non-positive base");
    using std::exp;
    using std::log;
    return exp(expo * log(base));
}

}  // namespace slantgeo
