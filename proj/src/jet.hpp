#pragma once

#include <span>
#include <vector>

#include "scalar.hpp"

namespace slantgeo {

// Second-order forward-mode scalar: value, dense gradient and dense symmetric
// Hessian with respect to the m seeded parameters. One evaluation of an
// immersion component over Jet2 yields the component, its Jacobian row and
// its Hessian slice to machine precision.
//
// A Jet2 constructed from a bare double carries no derivative slots and acts
// as a constant; binary operations promote it to the partner's variable
// count. Pure value semantics, freely copyable between threads.
class Jet2 {
public:
    Jet2() = default;
    Jet2(double v) : val_(v) {}  // NOLINT: implicit constant lift is intended

    static Jet2 constant(double v, int vars);
    static Jet2 seed(std::span<const double> point, int index);

    double value() const { return val_; }
    int vars() const { return m_; }
    double grad(int i) const { return g_.empty() ? 0.0 : g_[static_cast<std::size_t>(i)]; }
    double hess(int i, int j) const {
        return h_.empty() ? 0.0 : h_[static_cast<std::size_t>(i) * m_ + j];
    }
    bool deriv_free() const;

    Jet2 operator-() const;

    friend Jet2 operator+(const Jet2& a, const Jet2& b);
    friend Jet2 operator-(const Jet2& a, const Jet2& b);
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);

    friend Jet2 sin(const Jet2& x);
    friend Jet2 cos(const Jet2& x);
    friend Jet2 tan(const Jet2& x);
    friend Jet2 sqrt(const Jet2& x);
    friend Jet2 exp(const Jet2& x);
    friend Jet2 log(const Jet2& x);
    friend Jet2 asin(const Jet2& x);
    friend Jet2 acos(const Jet2& x);
    friend Jet2 atan(const Jet2& x);

private:
    static Jet2 lifted(const Jet2& x, int vars);
    static int joint_vars(const Jet2& a, const Jet2& b);
    static Jet2 chain(const Jet2& x, double f, double d1, double d2);

    double val_ = 0.0;
    int m_ = 0;
    std::vector<double> g_;  // m entries
    std::vector<double> h_;  // m*m entries, row-major, kept symmetric
};

Jet2 pow(const Jet2& base, const Jet2& expo);

template <>
struct scalar_traits<Jet2> {
    static Jet2 constant(double c) { return Jet2(c); }
    static double value(const Jet2& s) { return s.value(); }
    static bool deriv_free(const Jet2& s) { return s.deriv_free(); }
};

}  // namespace slantgeo
