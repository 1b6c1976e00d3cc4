#pragma once

// Minimal exact rational on 128-bit integers. Densities p^{-3v} * N stay
// well inside the range as long as stabilization depths are moderate.

#include <stdexcept>

#include "qf4/int128.hpp"

namespace qf4 {

struct Rat {
    i128 num = 0;
    i128 den = 1;

    Rat() = default;
    Rat(i128 n) : num(n), den(1) {}
    Rat(i128 n, i128 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 a = num < 0 ? -num : num, b = den;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }

    friend Rat operator+(const Rat& x, const Rat& y) { return Rat(x.num * y.den + y.num * x.den, x.den * y.den); }
    friend Rat operator-(const Rat& x, const Rat& y) { return Rat(x.num * y.den - y.num * x.den, x.den * y.den); }
    friend Rat operator*(const Rat& x, const Rat& y) { return Rat(x.num * y.num, x.den * y.den); }
    friend Rat operator/(const Rat& x, const Rat& y) {
        if (y.num == 0) throw std::domain_error("Rat: division by zero");
        return Rat(x.num * y.den, x.den * y.num);
    }
    friend bool operator==(const Rat& x, const Rat& y) { return x.num == y.num && x.den == y.den; }
    friend bool operator!=(const Rat& x, const Rat& y) { return !(x == y); }

    double to_double() const { return double(num) / double(den); }
};

}  // namespace qf4
