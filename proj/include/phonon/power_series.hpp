#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace phonon {

// Truncated power series in one variable: coefficients c[0..order], with all
// arithmetic performed modulo z^{order+1}. Exact to rounding for the
// generating-function manipulations in this codebase (no symbolic algebra).
class PowerSeries {
  public:
    explicit PowerSeries(std::size_t order) : c_(order + 1, 0.0) {}

    static PowerSeries constant(double value, std::size_t order) {
        PowerSeries s(order);
        s.c_[0] = value;
        return s;
    }

    // c0 + c1 z
    static PowerSeries affine(double c0, double c1, std::size_t order) {
        PowerSeries s(order);
        s.c_[0] = c0;
        if (order >= 1) s.c_[1] = c1;
        return s;
    }

    std::size_t order() const { return c_.size() - 1; }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    const std::vector<double>& coefficients() const { return c_; }

    PowerSeries& operator+=(const PowerSeries& o) {
        require_same_order(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }

    PowerSeries& operator-=(const PowerSeries& o) {
        require_same_order(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }

    PowerSeries& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }

    friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
    friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
    friend PowerSeries operator*(PowerSeries a, double s) { return a *= s; }
    friend PowerSeries operator*(double s, PowerSeries a) { return a *= s; }

    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        a.require_same_order(b);
        PowerSeries r(a.order());
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0.0) continue;
            for (std::size_t j = 0; i + j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return r;
    }

    // 1 / this, requiring a nonzero constant term.
    PowerSeries reciprocal() const {
        if (c_[0] == 0.0)
            throw std::domain_error("PowerSeries::reciprocal: zero constant term");
        PowerSeries r(order());
        r.c_[0] = 1.0 / c_[0];
        for (std::size_t k = 1; k < c_.size(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
            r.c_[k] = -acc / c_[0];
        }
        return r;
    }

  private:
    void require_same_order(const PowerSeries& o) const {
        if (o.c_.size() != c_.size())
            throw std::invalid_argument("PowerSeries: mixed orders");
    }

    std::vector<double> c_;
};

// Evaluates the polynomial with coefficients `poly` (constant term first) at
// a series argument, by Horner recursion in series arithmetic.
inline PowerSeries compose_polynomial(std::span<const double> poly, const PowerSeries& arg) {
    if (poly.empty()) return PowerSeries::constant(0.0, arg.order());
    PowerSeries acc = PowerSeries::constant(poly.back(), arg.order());
    for (std::size_t i = poly.size() - 1; i-- > 0;) {
        acc = acc * arg;
        acc[0] += poly[i];
    }
    return acc;
}

}  // namespace phonon
