#include "qf4/expsums.hpp"

#include <cmath>
#include <vector>

#include "qf4/arith.hpp"
#include "qf4/hensel.hpp"

namespace qf4::expsums {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

struct KahanC {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};
    void add(cplx v) {
        cplx y = v - comp;
        cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

std::vector<cplx> root_table(u64 q) {
    std::vector<cplx> r(q);
    for (u64 j = 0; j < q; ++j) {
        double th = kTau * double(j) / double(q);
        r[j] = {std::cos(th), std::sin(th)};
    }
    return r;
}

u64 pow_u64(u64 p, int e) {
    u64 r = 1;
    while (e-- > 0) r *= p;
    return r;
}

i128 pow_i128(u64 p, int e) {
    i128 r = 1;
    while (e-- > 0) r *= i64(p);
    return r;
}

int val_p(u64 n, u64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

bool divides_vec(u64 d, const Vec4& c) {
    for (i64 x : c)
        if (arith::mod_norm(x, i64(d)) != 0) return false;
    return true;
}

// Direct O(q^4) evaluation with the a-sum collapsed to Ramanujan sums:
// S_q(c; m, k) = sum_{b mod q} c_q(F(mb+k)) e_q(c.b).
cplx sq_direct(const QuadForm4& f, u64 q, const Vec4& c, const CongruenceClass& cc) {
    if (q == 1) return {1.0, 0.0};
    std::vector<double> rs(q);
    for (u64 n = 0; n < q; ++n) rs[n] = double(arith::ramanujan_sum(q, i64(n)));
    auto roots = root_table(q);
    Vec4 cr;
    for (int i = 0; i < 4; ++i) cr[i] = arith::mod_norm(c[i], i64(q));
    const auto& a = f.coeffs();
    const i64 m = i64(cc.m), qi = i64(q);
    KahanC acc;
    std::array<u64, 4> b{};
    for (b[0] = 0; b[0] < q; ++b[0])
        for (b[1] = 0; b[1] < q; ++b[1])
            for (b[2] = 0; b[2] < q; ++b[2]) {
                const i64 y0 = m * i64(b[0]) + cc.k[0];
                const i64 y1 = m * i64(b[1]) + cc.k[1];
                const i64 y2 = m * i64(b[2]) + cc.k[2];
                // F(y) = a44 y3^2 + B y3 + C along the b3 fiber.
                const i64 B = a[3] * y0 + a[6] * y1 + a[8] * y2;
                const i64 C =
                    a[0] * y0 * y0 + a[1] * y0 * y1 + a[2] * y0 * y2 + a[4] * y1 * y1 + a[5] * y1 * y2 + a[7] * y2 * y2;
                u64 dot3 = (u64(cr[0]) * b[0] + u64(cr[1]) * b[1] + u64(cr[2]) * b[2]) % q;
                for (b[3] = 0; b[3] < q; ++b[3]) {
                    const i64 y3 = m * i64(b[3]) + cc.k[3];
                    u64 g = u64(arith::mod_norm(a[9] * y3 * y3 + B * y3 + C, qi));
                    u64 ph = (dot3 + u64(cr[3]) * b[3]) % q;
                    acc.add(rs[g] * roots[ph]);
                }
            }
    return acc.sum;
}

// Exact S_{p^s}(0; m, k) through the zero-count identity.
i128 sq_zero_prime_power(const QuadForm4& f, u64 p, int s, const CongruenceClass& cc) {
    if (s == 0) return 1;
    // Good odd primes away from 2 det(2M) m follow the non-singular
    // quadric count; keep the honest lift for everything small or bad.
    i64 det_mod = i64(arith::mod_norm(f.det2m(), i64(p)));
    bool bad = (p == 2) || det_mod == 0 || cc.m % p == 0;
    if (!bad && p > 61) {
        int chi = arith::kronecker(det_mod, i64(p));
        i128 v = pow_i128(p, 3 * s - 1) * i64(p - 1);
        if (chi == 0) throw std::logic_error("sq_zero_prime_power: inconsistent chi");
        if (s % 2 == 1 && chi == -1) v = -v;
        return v;
    }
    u128 Ns = hensel::count_zeros_cong(f, cc, p, s);
    u128 Ns1 = hensel::count_zeros_cong(f, cc, p, s - 1);
    return i128(pow_i128(p, s)) * i128(Ns) - pow_i128(p, s + 3) * i128(Ns1);
}

}  // namespace

i128 sq_zero_exact(const QuadForm4& f, u64 q, const CongruenceClass& cc) {
    if (q == 0) throw std::invalid_argument("sq_zero_exact: q must be positive");
    i128 result = 1;
    auto fac = arith::factorize(q);
    for (auto [pw, e] : fac.factors) result *= sq_zero_prime_power(f, u64(pw), e, cc);
    return result;
}

PrimePowerSum::PrimePowerSum(const QuadForm4& f, u64 p, int s, const Vec4& c,
                             const CongruenceClass& cc, const EvalBudget& budget) {
    p_ = p;
    s_ = s;
    ps_ = pow_u64(p, s);
    if (ps_ > budget.prime_power_max)
        throw BudgetExceeded("prime power exceeds evaluation budget");
    int a = val_p(cc.m, p);
    plain_ = (a == 0);
    u64 ps = ps_;

    if (plain_) {
        // S_{p^s}(xc; m, k) = e_{p^s}(-mbar x c.k) S_{p^s}(mbar x c) with the
        // plain sum expanded through its zero-set histograms.
        i64 mbar = arith::mod_inverse(i64(cc.m % ps), i64(ps));
        i64 ck = 0;
        for (int i = 0; i < 4; ++i) ck += arith::mod_norm(i128(c[i]) * cc.k[i], i64(ps));
        phase_shift_ = arith::mod_norm(-i128(mbar) * ck, i64(ps));
        Vec4 dir;
        for (int i = 0; i < 4; ++i) dir[i] = arith::mod_norm(i128(mbar) * c[i], i64(ps));
        hist_top_.assign(ps, 0);
        hensel::walk_zeros(f, p, s, {0, 0, 0, 0}, 0, [&](const std::array<u64, 4>& y) {
            u64 r = 0;
            for (int i = 0; i < 4; ++i) r = (r + u64(dir[i]) % ps * (y[i] % ps)) % ps;
            ++hist_top_[r];
        });
        scale_top_ = i64(ps);
        sub_active_ = divides_vec(p, c);
        if (sub_active_) {
            u64 ps1 = ps / p;
            Vec4 dir_sub;
            for (int i = 0; i < 4; ++i)
                dir_sub[i] = arith::mod_norm(i128(mbar) * (c[i] / i64(p)), i64(ps1 ? ps1 : 1));
            hist_sub_.assign(std::max<u64>(ps1, 1), 0);
            if (s - 1 == 0) {
                hist_sub_[0] = 1;
            } else {
                hensel::walk_zeros(f, p, s - 1, {0, 0, 0, 0}, 0, [&](const std::array<u64, 4>& y) {
                    u64 r = 0;
                    for (int i = 0; i < 4; ++i) r = (r + u64(dir_sub[i]) % ps1 * (y[i] % ps1)) % ps1;
                    ++hist_sub_[r];
                });
            }
            scale_sub_ = i64(ps / p) * i64(pow_u64(p, 4));
        }
        return;
    }

    // p^a || m: the b-space sum transports to y = mb + k. Levels j <= a are
    // constant classes; levels j > a walk zeros of F in the class k mod p^a.
    u64 pa = pow_u64(p, a);
    u64 mt = (cc.m / pa) % ps;  // unit part of m
    i64 mtbar = arith::mod_inverse(i64(mt == 0 ? 1 : mt), i64(ps));
    std::array<u64, 4> kbase;
    for (int i = 0; i < 4; ++i) kbase[i] = u64(arith::mod_norm(cc.k[i], i64(pa)));

    auto build_level = [&](int j, const Vec4& dir, std::vector<i64>& hist) {
        u64 pj = pow_u64(p, j);
        hist.assign(std::max<u64>(pj, 1), 0);
        if (j == 0) {
            hist[0] = 1;
            return;
        }
        if (j <= a) {
            bool fk = arith::mod_norm(f.evaluate(cc.k), i64(pj)) == 0;
            if (fk && divides_vec(pj, dir)) hist[0] = i64(pow_u64(p, 4 * j));
            return;
        }
        if (!divides_vec(pa, dir)) return;  // all contributions vanish
        i64 pa4 = i64(pow_u64(p, 4 * a));
        hensel::walk_zeros(f, p, j, kbase, a, [&](const std::array<u64, 4>& z) {
            u128 r = 0;
            for (int i = 0; i < 4; ++i) {
                u64 u = (z[i] - kbase[i]) / pa;  // z = k mod p^a by construction
                u64 di = u64(arith::mod_norm(dir[i], i64(pj)));
                r += u128(di) * u;
            }
            u64 key = u64((u128(mtbar % i64(pj)) * (r % pj)) % pj);
            hist[key] += pa4;
        });
    };

    build_level(s, c, hist_top_);
    scale_top_ = i64(ps);
    sub_active_ = divides_vec(p, c);
    if (sub_active_) {
        Vec4 c_sub;
        for (int i = 0; i < 4; ++i) c_sub[i] = c[i] / i64(p);
        build_level(s - 1, c_sub, hist_sub_);
        scale_sub_ = i64(ps / p) * i64(pow_u64(p, 4));
    }
}

cplx PrimePowerSum::eval(i64 x) const {
    u64 ps = ps_;
    auto roots = root_table(ps);
    KahanC top;
    u64 xm = u64(arith::mod_norm(x, i64(ps)));
    for (u64 r = 0; r < hist_top_.size(); ++r) {
        if (hist_top_[r] == 0) continue;
        top.add(double(hist_top_[r]) * roots[(r * xm) % ps]);
    }
    cplx value = double(scale_top_) * top.sum;
    if (sub_active_) {
        u64 ps1 = hist_sub_.size();
        KahanC sub;
        for (u64 r = 0; r < ps1; ++r) {
            if (hist_sub_[r] == 0) continue;
            sub.add(double(hist_sub_[r]) * roots[(r * xm) % ps1 * (ps / ps1)]);
        }
        value -= double(scale_sub_) * sub.sum;
    }
    if (plain_ && phase_shift_ != 0) {
        value *= roots[(u64(phase_shift_) * xm) % ps];
    }
    return value;
}

ExpSumValue sq_cong(const QuadForm4& f, u64 q, const Vec4& c, const CongruenceClass& cc,
                    const EvalBudget& budget) {
    if (q == 0) throw std::invalid_argument("sq_cong: q must be positive");
    ExpSumValue out;
    out.q = q;
    out.c = c;
    out.m = cc.m;
    out.k = cc.k;
    if (q == 1) {
        out.value = {1.0, 0.0};
        out.exact = 1;
        return out;
    }
    bool czero = (arith::mod_norm(c[0], i64(q)) == 0 && arith::mod_norm(c[1], i64(q)) == 0 &&
                  arith::mod_norm(c[2], i64(q)) == 0 && arith::mod_norm(c[3], i64(q)) == 0);
    if (czero) {
        i128 v = sq_zero_exact(f, q, cc);
        out.value = {double(v), 0.0};
        out.exact = v;
        return out;
    }
    if (q <= 24) {
        out.value = sq_direct(f, q, c, cc);
    } else {
        // CRT assembly over prime powers with inverse-cofactor twists.
        cplx prod{1.0, 0.0};
        auto fac = arith::factorize(q);
        for (auto [pw, e] : fac.factors) {
            u64 p = u64(pw);
            u64 ps = pow_u64(p, e);
            u64 cof = q / ps;
            i64 cof_inv = arith::mod_inverse(i64(cof % ps), i64(ps));
            Vec4 ct;
            for (int i = 0; i < 4; ++i) ct[i] = arith::mod_norm(i128(cof_inv) * c[i], i64(ps));
            // Twisting by a unit keeps vanishing patterns of c intact only
            // modulo p^j; pass the twisted direction directly.
            PrimePowerSum pps(f, p, e, ct, cc, budget);
            prod *= pps.eval(1);
        }
        out.value = prod;
    }
    return out;
}

ExpSumValue sq_plain(const QuadForm4& f, u64 q, const Vec4& c, const EvalBudget& budget) {
    CongruenceClass trivial{1, {0, 0, 0, 0}};
    return sq_cong(f, q, c, trivial, budget);
}

std::pair<cplx, cplx> crt_check(const QuadForm4& f, u64 u, u64 v, const Vec4& c,
                                const CongruenceClass& cc) {
    if (u == 0 || v == 0) throw std::invalid_argument("crt_check: u, v must be positive");
    if (arith::gcd_u64(u, cc.m) != 1) throw std::invalid_argument("crt_check: requires gcd(u, m) = 1");
    auto [vu, vv] = arith::crt_split(v, cc.m);
    if (vu != 1) throw std::invalid_argument("crt_check: requires v | m^inf");
    if (arith::gcd_u64(u, v) != 1) throw std::invalid_argument("crt_check: requires gcd(u, v) = 1");
    cplx lhs = sq_direct(f, u * v, c, cc);
    cplx rhs;
    {
        Vec4 cu, cv;
        i64 vbar = u > 1 ? arith::mod_inverse(i64(v % u), i64(u)) : 0;
        i64 ubar = v > 1 ? arith::mod_inverse(i64(u % v), i64(v)) : 0;
        for (int i = 0; i < 4; ++i) {
            cu[i] = u > 1 ? arith::mod_norm(i128(vbar) * c[i], i64(u)) : 0;
            cv[i] = v > 1 ? arith::mod_norm(i128(ubar) * c[i], i64(v)) : 0;
        }
        rhs = sq_direct(f, u, cu, cc) * sq_direct(f, v, cv, cc);
    }
    return {lhs, rhs};
}

cplx partial_sum_S(const QuadForm4& f, double X, const Vec4& c, const CongruenceClass& cc,
                   const EvalBudget& budget) {
    KahanC acc;
    i64 ck = 0;
    for (int i = 0; i < 4; ++i) ck += c[i] * cc.k[i];
    for (u64 q = 1; double(q) <= X; ++q) {
        u64 mq = cc.m * q;
        double th = kTau * double(arith::mod_norm(ck, i64(mq))) / double(mq);
        acc.add(sq_cong(f, q, c, cc, budget).value * cplx{std::cos(th), std::sin(th)});
    }
    return acc.sum;
}

cplx twisted_partial_sum(const QuadForm4& f, double X, const std::function<cplx(u64)>& chi,
                         const Vec4& c, const EvalBudget& budget) {
    KahanC acc;
    for (u64 u = 1; double(u) <= X; ++u) {
        cplx w = chi(u);
        if (w == cplx{0.0, 0.0}) continue;
        acc.add(w * sq_plain(f, u, c, budget).value);
    }
    return acc.sum;
}

}  // namespace qf4::expsums
