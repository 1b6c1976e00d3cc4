#pragma once

// Brute-force reference implementations, deliberately independent of the
// library's evaluation paths. Everything here is a literal transcription
// of a definition, with no multiplicativity, lifting or histogram tricks.

#include <complex>

#include "qf4/forms.hpp"
#include "qf4/int128.hpp"

namespace oracle {

using qf4::i64;
using qf4::u128;
using qf4::u64;
using qf4::forms::QuadForm4;
using qf4::forms::Vec4;
using cplx = std::complex<double>;

inline i64 gcd_pos(i64 a, i64 b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 imod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

// S_q(c; m, k) as the literal double sum over a in (Z/q)^* and b mod q.
inline cplx naive_sq(const QuadForm4& f, u64 q, const Vec4& c, u64 m, const Vec4& k) {
    const double tau = 6.283185307179586476925286766559;
    cplx total{0.0, 0.0};
    std::array<i64, 4> b;
    for (u64 a = 0; a < q; ++a) {
        if (q != 1 && gcd_pos(i64(a), i64(q)) != 1) continue;
        if (q == 1 && a != 0) continue;
        for (b[0] = 0; b[0] < i64(q); ++b[0])
            for (b[1] = 0; b[1] < i64(q); ++b[1])
                for (b[2] = 0; b[2] < i64(q); ++b[2])
                    for (b[3] = 0; b[3] < i64(q); ++b[3]) {
                        Vec4 y;
                        for (int i = 0; i < 4; ++i) y[i] = i64(m) * b[i] + k[i];
                        i64 phase =
                            imod(i64(a) * i64(f.evaluate(y) % i64(q)) + c[0] * b[0] + c[1] * b[1] +
                                     c[2] * b[2] + c[3] * b[3],
                                 i64(q));
                        double th = tau * double(phase) / double(q);
                        total += cplx{std::cos(th), std::sin(th)};
                    }
    }
    return total;
}

// #{b mod p^nu : F(mb + k) = 0 mod p^nu} by full enumeration.
inline u128 naive_count_mod(const QuadForm4& f, u64 m, const Vec4& k, u64 p, int nu) {
    u64 q = 1;
    for (int i = 0; i < nu; ++i) q *= p;
    u128 count = 0;
    std::array<i64, 4> b;
    for (b[0] = 0; b[0] < i64(q); ++b[0])
        for (b[1] = 0; b[1] < i64(q); ++b[1])
            for (b[2] = 0; b[2] < i64(q); ++b[2])
                for (b[3] = 0; b[3] < i64(q); ++b[3]) {
                    Vec4 y;
                    for (int i = 0; i < 4; ++i) y[i] = i64(m) * b[i] + k[i];
                    if (imod(i64(f.evaluate(y) % i64(q)), i64(q)) == 0) ++count;
                }
    return count;
}

// All solutions in the closed integer box with x = k mod m, by scanning.
inline std::vector<Vec4> naive_solutions(const QuadForm4& f, u64 m, const Vec4& k, i64 lo, i64 hi) {
    std::vector<Vec4> out;
    Vec4 x;
    for (x[0] = lo; x[0] <= hi; ++x[0])
        for (x[1] = lo; x[1] <= hi; ++x[1])
            for (x[2] = lo; x[2] <= hi; ++x[2])
                for (x[3] = lo; x[3] <= hi; ++x[3]) {
                    bool cong = true;
                    for (int i = 0; i < 4; ++i)
                        if (imod(x[i], i64(m)) != imod(k[i], i64(m))) cong = false;
                    if (cong && f.evaluate(x) == 0) out.push_back(x);
                }
    return out;
}

// Legendre symbol by exhaustive square search mod an odd prime.
inline int naive_legendre(i64 a, i64 p) {
    a = imod(a, p);
    if (a == 0) return 0;
    for (i64 r = 1; r < p; ++r)
        if (r * r % p == a) return 1;
    return -1;
}

// Ramanujan sum as the literal unit sum.
inline double naive_ramanujan(u64 q, i64 n) {
    const double tau = 6.283185307179586476925286766559;
    double total = 0.0;
    for (u64 a = 1; a <= q; ++a) {
        if (q != 1 && gcd_pos(i64(a), i64(q)) != 1) continue;
        if (q == 1 && a != 1) continue;
        total += std::cos(tau * double(imod(i64(a) * n, i64(q))) / double(q));
    }
    return total;
}

}  // namespace oracle
