#include "jet.hpp"

#include <cmath>
#include <stdexcept>

namespace slantgeo {

Jet2 Jet2::constant(double v, int vars) {
    Jet2 j(v);
    j.m_ = vars;
    j.g_.assign(static_cast<std::size_t>(vars), 0.0);
    j.h_.assign(static_cast<std::size_t>(vars) * vars, 0.0);
    return j;
}

Jet2 Jet2::seed(std::span<const double> point, int index) {
    const int m = static_cast<int>(point.size());
    if (index < 0 || index >= m) throw std::out_of_range("Jet2::seed: index out of range");
    Jet2 j = constant(point[static_cast<std::size_t>(index)], m);
    j.g_[static_cast<std::size_t>(index)] = 1.0;
    return j;
}

bool Jet2::deriv_free() const {
    for (double v : g_)
        if (v != 0.0) return false;
    for (double v : h_)
        if (v != 0.0) return false;
    return true;
}

Jet2 Jet2::lifted(const Jet2& x, int vars) {
    if (x.m_ == vars) return x;
    if (x.m_ == 0) return constant(x.val_, vars);
    throw std::logic_error("Jet2: mixing jets with different variable counts");
}

int Jet2::joint_vars(const Jet2& a, const Jet2& b) {
    if (a.m_ == b.m_) return a.m_;
    if (a.m_ == 0) return b.m_;
    if (b.m_ == 0) return a.m_;
    throw std::logic_error("Jet2: mixing jets with different variable counts");
}

// w = f(x): grad = d1*gx, hess = d1*Hx + d2*gx gx^T
Jet2 Jet2::chain(const Jet2& x, double f, double d1, double d2) {
    Jet2 out = constant(f, x.m_);
    const int m = x.m_;
    for (int i = 0; i < m; ++i) out.g_[static_cast<std::size_t>(i)] = d1 * x.g_[static_cast<std::size_t>(i)];
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out.h_[static_cast<std::size_t>(i) * m + j] =
                d1 * x.h_[static_cast<std::size_t>(i) * m + j] +
                d2 * x.g_[static_cast<std::size_t>(i)] * x.g_[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

Jet2 Jet2::operator-() const {
    Jet2 out = *this;
    out.val_ = -out.val_;
    for (auto& v : out.g_) v = -v;
    for (auto& v : out.h_) v = -v;
    return out;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
    const int m = Jet2::joint_vars(a, b);
    Jet2 x = Jet2::lifted(a, m), y = Jet2::lifted(b, m);
    x.val_ += y.val_;
    for (std::size_t i = 0; i < x.g_.size(); ++i) x.g_[i] += y.g_[i];
    for (std::size_t i = 0; i < x.h_.size(); ++i) x.h_[i] += y.h_[i];
    return x;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    const int m = Jet2::joint_vars(a, b);
    Jet2 x = Jet2::lifted(a, m), y = Jet2::lifted(b, m);
    x.val_ -= y.val_;
    for (std::size_t i = 0; i < x.g_.size(); ++i) x.g_[i] -= y.g_[i];
    for (std::size_t i = 0; i < x.h_.size(); ++i) x.h_[i] -= y.h_[i];
    return x;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    const int m = Jet2::joint_vars(a, b);
    const Jet2 x = Jet2::lifted(a, m), y = Jet2::lifted(b, m);
    Jet2 out = Jet2::constant(x.val_ * y.val_, m);
    for (int i = 0; i < m; ++i)
        out.g_[static_cast<std::size_t>(i)] =
            x.g_[static_cast<std::size_t>(i)] * y.val_ + x.val_ * y.g_[static_cast<std::size_t>(i)];
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            out.h_[static_cast<std::size_t>(i) * m + j] =
                x.h_[static_cast<std::size_t>(i) * m + j] * y.val_ +
                y.h_[static_cast<std::size_t>(i) * m + j] * x.val_ +
                x.g_[static_cast<std::size_t>(i)] * y.g_[static_cast<std::size_t>(j)] +
                y.g_[static_cast<std::size_t>(i)] * x.g_[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (b.value() == 0.0) throw EvalError("division by zero");
    // a/b = a * (1/b); reciprocal by the unary chain rule
    const Jet2 recip = Jet2::chain(Jet2::lifted(b, Jet2::joint_vars(a, b)), 1.0 / b.value(),
                                   -1.0 / (b.value() * b.value()),
                                   2.0 / (b.value() * b.value() * b.value()));
    return a * recip;
}

Jet2 sin(const Jet2& x) { return Jet2::chain(x, std::sin(x.val_), std::cos(x.val_), -std::sin(x.val_)); }

Jet2 cos(const Jet2& x) { return Jet2::chain(x, std::cos(x.val_), -std::sin(x.val_), -std::cos(x.val_)); }

Jet2 tan(const Jet2& x) {
    const double t = std::tan(x.val_);
    const double sec2 = 1.0 + t * t;
    return Jet2::chain(x, t, sec2, 2.0 * t * sec2);
}

Jet2 sqrt(const Jet2& x) {
    if (x.val_ < 0.0) throw EvalError("sqrt of negative value");
    if (x.deriv_free()) return Jet2::constant(std::sqrt(x.val_), x.m_);
    const double r = std::sqrt(x.val_);
    return Jet2::chain(x, r, 0.5 / r, -0.25 / (x.val_ * r));
}

Jet2 exp(const Jet2& x) {
    const double e = std::exp(x.val_);
    return Jet2::chain(x, e, e, e);
}

Jet2 log(const Jet2& x) {
    if (x.val_ <= 0.0) throw EvalError("log of non-positive value");
    return Jet2::chain(x, std::log(x.val_), 1.0 / x.val_, -1.0 / (x.val_ * x.val_));
}

Jet2 asin(const Jet2& x) {
    if (x.val_ < -1.0 || x.val_ > 1.0) throw EvalError("asin argument outside [-1,1]");
    if (x.deriv_free()) return Jet2::constant(std::asin(x.val_), x.m_);
    const double r = 1.0 - x.val_ * x.val_;
    const double d1 = 1.0 / std::sqrt(r);
    return Jet2::chain(x, std::asin(x.val_), d1, x.val_ * d1 / r);
}

Jet2 acos(const Jet2& x) {
    if (x.val_ < -1.0 || x.val_ > 1.0) throw EvalError("acos argument outside [-1,1]");
    if (x.deriv_free()) return Jet2::constant(std::acos(x.val_), x.m_);
    const double r = 1.0 - x.val_ * x.val_;
    const double d1 = -1.0 / std::sqrt(r);
    return Jet2::chain(x, std::acos(x.val_), d1, x.val_ * d1 / r);
}

Jet2 atan(const Jet2& x) {
    const double r = 1.0 + x.val_ * x.val_;
    return Jet2::chain(x, std::atan(x.val_), 1.0 / r, -2.0 * x.val_ / (r * r));
}

Jet2 pow(const Jet2& base, const Jet2& expo) { return pow_scalar(base, expo); }

}  // namespace slantgeo
