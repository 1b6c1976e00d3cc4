#include "qf4/counting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "qf4/arith.hpp"

namespace qf4::counting {

namespace {

struct AxisRange {
    i64 lo, hi, start;  // start = least value >= lo in the congruence class
    u64 step;
    bool empty() const { return start > hi; }
};

AxisRange axis_range(double plo, double phi, i64 k, u64 m) {
    AxisRange r;
    r.lo = i64(std::ceil(plo - 1e-9));
    r.hi = i64(std::floor(phi + 1e-9));
    r.step = m;
    i64 rem = arith::mod_norm(r.lo, i64(m));
    i64 want = arith::mod_norm(k, i64(m));
    r.start = r.lo + arith::mod_norm(want - rem, i64(m));
    return r;
}

struct KahanD {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

i64 gcd4(const forms::Vec4& x) {
    i64 g = 0;
    for (i64 v : x) g = arith::gcd_i64(g, v);
    return g;
}

// Smallest-prime-factor sieve below 2^24; trial division + rho beyond.
constexpr u32 kSpfLimit = 1u << 24;

const std::vector<u32>& spf_sieve() {
    static std::vector<u32> spf;
    if (spf.empty()) {
        spf.assign(kSpfLimit, 0);
        for (u32 i = 2; i < kSpfLimit; ++i) {
            if (spf[i] == 0) {
                for (u64 j = i; j < kSpfLimit; j += i)
                    if (spf[j] == 0) spf[j] = i;
            }
        }
    }
    return spf;
}

void factor_positive(u64 n, std::vector<std::pair<u64, int>>& out) {
    out.clear();
    if (n < kSpfLimit) {
        const auto& spf = spf_sieve();
        while (n > 1) {
            u64 p = spf[n];
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
        return;
    }
    auto f = arith::factorize(n);
    for (auto [p, e] : f.factors) out.emplace_back(u64(p), e);
}

void divisors_ascending(u64 n, std::vector<i64>& ds) {
    static thread_local std::vector<std::pair<u64, int>> fac;
    factor_positive(n, fac);
    ds.assign(1, 1);
    for (auto [p, e] : fac) {
        size_t sz = ds.size();
        i64 pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= i64(p);
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
}

void emit_if_valid(const QuadForm4& f, const CongruenceClass& cc, double P,
                   const weights::WeightSpec& w, const forms::Vec4& x, const SolutionSink& sink) {
    std::array<double, 4> xs{double(x[0]) / P, double(x[1]) / P, double(x[2]) / P, double(x[3]) / P};
    if (weights::eval_weight(w, xs) <= 0.0) return;
    (void)f;
    (void)cc;
    Solution s;
    s.x = x;
    s.gcd = gcd4(x);
    sink(s);
}

}  // namespace

bool fastpath_applicable(const QuadForm4& f) {
    const auto& a = f.coeffs();
    return a[8] == -1 && a[2] == 0 && a[3] == 0 && a[5] == 0 && a[6] == 0 && a[7] == 0 && a[9] == 0;
}

void enumerate(const QuadForm4& f, const CongruenceClass& cc, double P,
               const weights::WeightSpec& w, const SolutionSink& sink) {
    if (P < 1) return;
    const auto& a = f.coeffs();
    AxisRange r1 = axis_range(P * w.lo(0), P * w.hi(0), cc.k[0], cc.m);
    AxisRange r2 = axis_range(P * w.lo(1), P * w.hi(1), cc.k[1], cc.m);
    AxisRange r3 = axis_range(P * w.lo(2), P * w.hi(2), cc.k[2], cc.m);
    AxisRange r4 = axis_range(P * w.lo(3), P * w.hi(3), cc.k[3], cc.m);
    if (r1.empty() || r2.empty() || r3.empty() || r4.empty()) return;
    double iters = (double(r1.hi - r1.start) / cc.m + 1) * (double(r2.hi - r2.start) / cc.m + 1) *
                   (double(r3.hi - r3.start) / cc.m + 1);
    if (iters > 4e9) throw BoxTooLarge("enumerate: lattice box too large");

    for (i64 x1 = r1.start; x1 <= r1.hi; x1 += i64(r1.step)) {
        for (i64 x2 = r2.start; x2 <= r2.hi; x2 += i64(r2.step)) {
            for (i64 x3 = r3.start; x3 <= r3.hi; x3 += i64(r3.step)) {
                // F = A x4^2 + B x4 + C on this fiber.
                const i64 A = a[9];
                const i64 B = a[3] * x1 + a[6] * x2 + a[8] * x3;
                const i64 C = a[0] * x1 * x1 + a[1] * x1 * x2 + a[2] * x1 * x3 + a[4] * x2 * x2 +
                              a[5] * x2 * x3 + a[7] * x3 * x3;
                if (A != 0) {
                    i128 D = i128(B) * B - i128(4) * A * C;
                    if (D < 0) continue;
                    u64 s = isqrt(u128(D));
                    if (i128(s) * s != D) continue;
                    for (int sign = 0; sign < (s == 0 ? 1 : 2); ++sign) {
                        i128 num = -i128(B) + (sign == 0 ? i128(s) : -i128(s));
                        i128 den = 2 * i128(A);
                        if (num % den != 0) continue;
                        i128 x4w = num / den;
                        if (x4w < r4.lo || x4w > r4.hi) continue;
                        i64 x4 = i64(x4w);
                        if (arith::mod_norm(x4, i64(cc.m)) != cc.k[3]) continue;
                        emit_if_valid(f, cc, P, w, {x1, x2, x3, x4}, sink);
                    }
                } else if (B != 0) {
                    if (C % B != 0) continue;
                    i64 x4 = -C / B;
                    if (x4 < r4.lo || x4 > r4.hi) continue;
                    if (arith::mod_norm(x4, i64(cc.m)) != cc.k[3]) continue;
                    emit_if_valid(f, cc, P, w, {x1, x2, x3, x4}, sink);
                } else if (C == 0) {
                    for (i64 x4 = r4.start; x4 <= r4.hi; x4 += i64(r4.step))
                        emit_if_valid(f, cc, P, w, {x1, x2, x3, x4}, sink);
                }
            }
        }
    }
}

void divisor_fastpath(const QuadForm4& f, const CongruenceClass& cc, double P,
                      const weights::WeightSpec& w, const SolutionSink& sink) {
    if (!fastpath_applicable(f)) throw PatternMismatch("fast path requires Q(x1,x2) - x3 x4");
    if (P < 1) return;
    const auto& a = f.coeffs();
    AxisRange r1 = axis_range(P * w.lo(0), P * w.hi(0), cc.k[0], cc.m);
    AxisRange r2 = axis_range(P * w.lo(1), P * w.hi(1), cc.k[1], cc.m);
    AxisRange r3 = axis_range(P * w.lo(2), P * w.hi(2), cc.k[2], cc.m);
    AxisRange r4 = axis_range(P * w.lo(3), P * w.hi(3), cc.k[3], cc.m);
    if (r1.empty() || r2.empty() || r3.empty() || r4.empty()) return;
    double iters =
        (double(r1.hi - r1.start) / cc.m + 1) * (double(r2.hi - r2.start) / cc.m + 1);
    if (iters > 4e9) throw BoxTooLarge("divisor_fastpath: lattice box too large");

    auto try_pair = [&](i64 x1, i64 x2, i64 x3, i64 x4) {
        if (x3 < r3.lo || x3 > r3.hi || x4 < r4.lo || x4 > r4.hi) return;
        if (arith::mod_norm(x3, i64(cc.m)) != cc.k[2]) return;
        if (arith::mod_norm(x4, i64(cc.m)) != cc.k[3]) return;
        emit_if_valid(f, cc, P, w, {x1, x2, x3, x4}, sink);
    };

    std::vector<i64> ds;
    for (i64 x1 = r1.start; x1 <= r1.hi; x1 += i64(r1.step)) {
        for (i64 x2 = r2.start; x2 <= r2.hi; x2 += i64(r2.step)) {
            i64 n = a[0] * x1 * x1 + a[1] * x1 * x2 + a[4] * x2 * x2;
            if (n == 0) {
                // x3 x4 = 0: the x3 = 0 and x4 = 0 rays.
                if (arith::mod_norm(i64(0), i64(cc.m)) == cc.k[2] && r3.lo <= 0 && r3.hi >= 0) {
                    for (i64 x4 = r4.start; x4 <= r4.hi; x4 += i64(r4.step))
                        emit_if_valid(f, cc, P, w, {x1, x2, 0, x4}, sink);
                }
                if (cc.k[3] == 0 && r4.lo <= 0 && r4.hi >= 0) {
                    for (i64 x3 = r3.start; x3 <= r3.hi; x3 += i64(r3.step)) {
                        if (x3 == 0 && cc.k[2] == 0 && r3.lo <= 0 && r3.hi >= 0) continue;  // counted above
                        emit_if_valid(f, cc, P, w, {x1, x2, x3, 0}, sink);
                    }
                }
                continue;
            }
            u64 an = u64(n < 0 ? -n : n);
            divisors_ascending(an, ds);
            for (i64 d : ds) {
                i64 q = i64(an) / d;
                if (n > 0) {
                    try_pair(x1, x2, d, q);
                    try_pair(x1, x2, -d, -q);
                } else {
                    try_pair(x1, x2, d, -q);
                    try_pair(x1, x2, -d, q);
                }
            }
        }
    }
}

std::vector<Solution> collect(const QuadForm4& f, const CongruenceClass& cc, double P,
                              const weights::WeightSpec& w, Engine engine) {
    std::vector<Solution> out;
    auto sink = [&](const Solution& s) { out.push_back(s); };
    if (engine == Engine::fastpath || (engine == Engine::automatic && fastpath_applicable(f)))
        divisor_fastpath(f, cc, P, w, sink);
    else
        enumerate(f, cc, P, w, sink);
    return out;
}

double count_weighted(const QuadForm4& f, const CongruenceClass& cc, double P,
                      const weights::WeightSpec& w, Engine engine) {
    KahanD acc;
    auto sink = [&](const Solution& s) {
        std::array<double, 4> xs{double(s.x[0]) / P, double(s.x[1]) / P, double(s.x[2]) / P,
                                 double(s.x[3]) / P};
        acc.add(weights::eval_weight(w, xs));
    };
    if (engine == Engine::fastpath || (engine == Engine::automatic && fastpath_applicable(f)))
        divisor_fastpath(f, cc, P, w, sink);
    else
        enumerate(f, cc, P, w, sink);
    return acc.sum;
}

double count_primitive(const QuadForm4& f, const CongruenceClass& cc, double P,
                       const weights::WeightSpec& w, Engine engine) {
    KahanD acc;
    auto sink = [&](const Solution& s) {
        if (s.gcd != 1) return;
        std::array<double, 4> xs{double(s.x[0]) / P, double(s.x[1]) / P, double(s.x[2]) / P,
                                 double(s.x[3]) / P};
        acc.add(weights::eval_weight(w, xs));
    };
    if (engine == Engine::fastpath || (engine == Engine::automatic && fastpath_applicable(f)))
        divisor_fastpath(f, cc, P, w, sink);
    else
        enumerate(f, cc, P, w, sink);
    return acc.sum;
}

namespace {

u64 moebius_dmax(double P, const weights::WeightSpec& w) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max({m, std::abs(w.lo(i)), std::abs(w.hi(i))});
    return u64(P * m) + 2;
}

CongruenceClass scaled_class(const CongruenceClass& cc, u64 d) {
    i64 dbar = arith::mod_inverse(i64(d % cc.m), i64(cc.m));
    CongruenceClass out;
    out.m = cc.m;
    for (int i = 0; i < 4; ++i) out.k[i] = arith::mod_norm(i128(dbar) * cc.k[i], i64(cc.m));
    return out;
}

}  // namespace

std::pair<double, double> moebius_check_prim(const QuadForm4& f, const CongruenceClass& cc, double P,
                                             const weights::WeightSpec& w, Engine engine) {
    double direct = count_primitive(f, cc, P, w, engine);
    KahanD recon;
    u64 dmax = moebius_dmax(P, w);
    for (u64 d = 1; d <= dmax; ++d) {
        if (arith::gcd_u64(d, cc.m) != 1) continue;
        int mu = arith::mobius(d);
        if (mu == 0) continue;
        recon.add(double(mu) * count_weighted(f, scaled_class(cc, d), P / double(d), w, engine));
    }
    return {direct, recon.sum};
}

std::pair<double, double> moebius_check_normal(const QuadForm4& f, const CongruenceClass& cc,
                                               double P, const weights::WeightSpec& w, Engine engine) {
    double direct = count_weighted(f, cc, P, w, engine);
    KahanD recon;
    u64 dmax = moebius_dmax(P, w);
    for (u64 d = 1; d <= dmax; ++d) {
        if (arith::gcd_u64(d, cc.m) != 1) continue;
        recon.add(count_primitive(f, scaled_class(cc, d), P / double(d), w, engine));
    }
    return {direct, recon.sum};
}

void dump_csv(const std::string& path, const std::vector<Solution>& sols) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "x1,x2,x3,x4,gcd\n";
    for (const auto& s : sols)
        out << s.x[0] << "," << s.x[1] << "," << s.x[2] << "," << s.x[3] << "," << s.gcd << "\n";
}

}  // namespace qf4::counting
