#include "qf4/hensel.hpp"

#include <array>
#include <map>
#include <mutex>
#include <vector>

#include "qf4/arith.hpp"

namespace qf4::hensel {

namespace {

using forms::QuadForm4;

u64 pow_u64(u64 p, int e) {
    u64 r = 1;
    while (e-- > 0) r *= p;
    return r;
}

u128 pow_u128(u64 p, int e) {
    u128 r = 1;
    while (e-- > 0) r *= p;
    return r;
}

// Per-prime tables: square roots (-1 for non-residues) and inverses.
struct PrimeTables {
    std::vector<i32> sqrt_tab;
    std::vector<u32> inv_tab;
};

const PrimeTables& prime_tables(u64 p) {
    static std::map<u64, PrimeTables> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    PrimeTables t;
    t.sqrt_tab.assign(p, -1);
    for (u64 r = 0; r < p; ++r) {
        u64 sq = (r * r) % p;
        if (t.sqrt_tab[sq] < 0) t.sqrt_tab[sq] = i32(r);
    }
    t.inv_tab.assign(p, 0);
    if (p > 1) {
        t.inv_tab[1] = 1;
        for (u64 a = 2; a < p; ++a) t.inv_tab[a] = u32(p - (p / a) * u64(t.inv_tab[p % a]) % p);
    }
    return cache.emplace(p, std::move(t)).first->second;
}

struct Ctx {
    const QuadForm4* f;
    u64 p;
    int target;  // exponent s of the target modulus
    bool fast;   // i64 evaluation is overflow-safe
    mutable u128 nodes = 0;
    u128 node_limit = u128(1) << 31;

    void tick() const {
        if (++nodes > node_limit) throw BudgetExceeded("hensel walk: node budget exceeded");
    }
};

bool fast_eval_safe(const QuadForm4& f, u64 max_coord) {
    i64 biggest = 0;
    for (i64 a : f.coeffs()) biggest = std::max(biggest, a < 0 ? -a : a);
    // 10 monomials, each |a| * coord^2; keep the total below 2^62.
    return i128(biggest) * 10 * i128(max_coord) * i128(max_coord) < (i128(1) << 62);
}

u64 eval_mod(const Ctx& ctx, const std::array<u64, 4>& y, u64 mod) {
    const auto& a = ctx.f->coeffs();
    if (ctx.fast) {
        i64 v = a[0] * i64(y[0] * y[0]) + a[1] * i64(y[0] * y[1]) + a[2] * i64(y[0] * y[2]) +
                a[3] * i64(y[0] * y[3]) + a[4] * i64(y[1] * y[1]) + a[5] * i64(y[1] * y[2]) +
                a[6] * i64(y[1] * y[3]) + a[7] * i64(y[2] * y[2]) + a[8] * i64(y[2] * y[3]) +
                a[9] * i64(y[3] * y[3]);
        return u64(arith::mod_norm(v, i64(mod)));
    }
    std::array<i128, 4> x{i128(y[0]), i128(y[1]), i128(y[2]), i128(y[3])};
    return u64(arith::mod_norm(ctx.f->evaluate(x), i64(mod)));
}

std::array<u64, 4> grad_mod_p(const Ctx& ctx, const std::array<u64, 4>& y) {
    const u64 p = ctx.p;
    const auto& m2 = ctx.f->gram2();
    std::array<u64, 4> g{};
    for (int i = 0; i < 4; ++i) {
        i128 s = 0;
        for (int j = 0; j < 4; ++j) s += i128(m2[i][j]) * i128(y[j] % p);
        g[i] = u64(arith::mod_norm(s, i64(p)));
    }
    return g;
}

// Roots of A t^2 + B t + C mod odd prime p using the tables.
void quadratic_roots_mod_p(u64 A, u64 B, u64 C, u64 p, const PrimeTables& tab,
                           std::array<u64, 2>& roots, int& nroots, bool& all) {
    nroots = 0;
    all = false;
    if (A == 0) {
        if (B == 0) {
            all = (C == 0);
            return;
        }
        roots[nroots++] = (p - C) % p * u64(tab.inv_tab[B]) % p;
        return;
    }
    u64 D = (B * B % p + 4 * A % p * ((p - C) % p)) % p;
    i32 r = tab.sqrt_tab[D];
    if (r < 0) return;
    u64 inv2a = tab.inv_tab[2 * A % p];
    u64 mb = (p - B) % p;
    roots[nroots++] = (mb + u64(r)) % p * inv2a % p;
    if (r != 0) roots[nroots++] = (mb + p - u64(r)) % p * inv2a % p;
}

// Enumerate level-1 zeros of F mod p, optionally skipping y = 0.
template <typename Fn>
void level1_zeros(const Ctx& ctx, bool primitive_only, Fn&& fn) {
    const u64 p = ctx.p;
    if (p <= 13) {
        std::array<u64, 4> y{};
        for (y[0] = 0; y[0] < p; ++y[0])
            for (y[1] = 0; y[1] < p; ++y[1])
                for (y[2] = 0; y[2] < p; ++y[2])
                    for (y[3] = 0; y[3] < p; ++y[3]) {
                        if (primitive_only && !(y[0] | y[1] | y[2] | y[3])) continue;
                        if (eval_mod(ctx, y, p) == 0) fn(y);
                    }
        return;
    }
    const auto& tab = prime_tables(p);
    const auto& a = ctx.f->coeffs();
    u64 A = u64(arith::mod_norm(a[9], i64(p)));
    u64 a14 = u64(arith::mod_norm(a[3], i64(p)));
    u64 a24 = u64(arith::mod_norm(a[6], i64(p)));
    u64 a34 = u64(arith::mod_norm(a[8], i64(p)));
    std::array<u64, 4> y{};
    for (y[0] = 0; y[0] < p; ++y[0])
        for (y[1] = 0; y[1] < p; ++y[1])
            for (y[2] = 0; y[2] < p; ++y[2]) {
                u64 B = (a14 * y[0] + a24 * y[1] + a34 * y[2]) % p;
                std::array<u64, 4> y0{y[0], y[1], y[2], 0};
                u64 C = eval_mod(ctx, y0, p);
                std::array<u64, 2> roots;
                int nroots;
                bool all;
                quadratic_roots_mod_p(A, B, C, p, tab, roots, nroots, all);
                if (all) {
                    for (u64 t = 0; t < p; ++t) {
                        if (primitive_only && !(y[0] | y[1] | y[2] | t)) continue;
                        y[3] = t;
                        fn(y);
                    }
                } else {
                    for (int i = 0; i < nroots; ++i) {
                        y[3] = roots[i];
                        if (primitive_only && !(y[0] | y[1] | y[2] | y[3])) continue;
                        fn(y);
                    }
                }
            }
}

// Count zeros mod p^target above the class (y mod p^t); assumes
// F(y) = 0 mod p^t. Non-singular classes lift as p^{3(target-t)}.
u128 count_above(const Ctx& ctx, const std::array<u64, 4>& y, int t) {
    const u64 p = ctx.p;
    ctx.tick();
    if (t == ctx.target) return 1;
    auto g = grad_mod_p(ctx, y);
    if (g[0] | g[1] | g[2] | g[3]) return pow_u128(p, 3 * (ctx.target - t));
    u64 pt1 = pow_u64(p, t + 1);
    if (eval_mod(ctx, y, pt1) != 0) return 0;
    u64 pt = pt1 / p;
    u128 total = 0;
    std::array<u64, 4> u{};
    for (u[0] = 0; u[0] < p; ++u[0])
        for (u[1] = 0; u[1] < p; ++u[1])
            for (u[2] = 0; u[2] < p; ++u[2])
                for (u[3] = 0; u[3] < p; ++u[3]) {
                    std::array<u64, 4> child{y[0] + pt * u[0], y[1] + pt * u[1], y[2] + pt * u[2],
                                             y[3] + pt * u[3]};
                    total += count_above(ctx, child, t + 1);
                }
    return total;
}

// Level-1 structure of the primitive zero set: non-singular classes lift
// uniformly, so only the singular ones need to be kept.
struct Level1Info {
    u128 nonsingular = 0;
    std::vector<std::array<u64, 4>> singular;
};

const Level1Info& level1_info(const Ctx& ctx) {
    static std::map<std::pair<std::array<i64, 10>, u64>, Level1Info> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(ctx.f->coeffs(), ctx.p);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Level1Info info;
    level1_zeros(ctx, true, [&](const std::array<u64, 4>& y) {
        auto g = grad_mod_p(ctx, y);
        if (g[0] | g[1] | g[2] | g[3])
            ++info.nonsingular;
        else
            info.singular.push_back(y);
    });
    return cache.emplace(key, std::move(info)).first->second;
}

u128 count_primitive_zeros(const Ctx& base_ctx, int nu) {
    if (nu == 0) return 0;
    Ctx ctx = base_ctx;
    ctx.target = nu;
    const Level1Info& info = level1_info(ctx);
    u128 total = info.nonsingular * pow_u128(ctx.p, 3 * (nu - 1));
    for (const auto& y : info.singular) total += count_above(ctx, y, 1);
    return total;
}

void walk_above(const Ctx& ctx, const std::array<u64, 4>& y, int t, const ZeroVisitor& visit) {
    const u64 p = ctx.p;
    ctx.tick();
    if (t == ctx.target) {
        visit(y);
        return;
    }
    u64 pt = pow_u64(p, t);
    u64 pt1 = pt * p;
    auto g = grad_mod_p(ctx, y);
    if (g[0] | g[1] | g[2] | g[3]) {
        // Children solve g.u = -F(y)/p^t mod p.
        const auto& tab = prime_tables(p);
        int pivot = 0;
        while (g[pivot] == 0) ++pivot;
        u64 ginv = p <= 13 ? u64(arith::mod_inverse(i64(g[pivot]), i64(p))) : u64(tab.inv_tab[g[pivot]]);
        u64 rhs = eval_mod(ctx, y, pt1) / pt;
        rhs = (p - rhs) % p;
        std::array<int, 3> fi{};
        int nf = 0;
        for (int i = 0; i < 4; ++i)
            if (i != pivot) fi[nf++] = i;
        std::array<u64, 4> u{};
        for (u64 a0 = 0; a0 < p; ++a0)
            for (u64 a1 = 0; a1 < p; ++a1)
                for (u64 a2 = 0; a2 < p; ++a2) {
                    u[fi[0]] = a0;
                    u[fi[1]] = a1;
                    u[fi[2]] = a2;
                    u64 dot = (g[fi[0]] * a0 + g[fi[1]] * a1 + g[fi[2]] * a2) % p;
                    u[pivot] = (rhs + p - dot) % p * ginv % p;
                    std::array<u64, 4> child{y[0] + pt * u[0], y[1] + pt * u[1], y[2] + pt * u[2],
                                             y[3] + pt * u[3]};
                    walk_above(ctx, child, t + 1, visit);
                }
        return;
    }
    if (eval_mod(ctx, y, pt1) != 0) return;
    std::array<u64, 4> u{};
    for (u[0] = 0; u[0] < p; ++u[0])
        for (u[1] = 0; u[1] < p; ++u[1])
            for (u[2] = 0; u[2] < p; ++u[2])
                for (u[3] = 0; u[3] < p; ++u[3]) {
                    std::array<u64, 4> child{y[0] + pt * u[0], y[1] + pt * u[1], y[2] + pt * u[2],
                                             y[3] + pt * u[3]};
                    walk_above(ctx, child, t + 1, visit);
                }
}

Ctx make_ctx(const QuadForm4& f, u64 p, int target) {
    Ctx ctx{&f, p, target, fast_eval_safe(f, pow_u64(p, target))};
    return ctx;
}

}  // namespace

u128 count_zeros(const forms::QuadForm4& f, u64 p, int nu) {
    if (nu < 0) throw std::invalid_argument("count_zeros: nu must be >= 0");
    if (nu == 0) return 1;
    if (pow_u128(p, nu) > (u128(1) << 40)) throw BudgetExceeded("count_zeros: p^nu out of range");
    if (p > (u64(1) << 16)) throw BudgetExceeded("count_zeros: prime out of range");
    Ctx ctx = make_ctx(f, p, nu);
    // N_nu = N^prim_nu + p^4 N_{nu-2}; the divisible cone recurses down.
    std::vector<u128> N(nu + 1);
    N[0] = 1;
    for (int t = 1; t <= nu; ++t) {
        u128 prim = count_primitive_zeros(ctx, t);
        N[t] = prim + (t >= 2 ? pow_u128(p, 4) * N[t - 2] : 1);
    }
    return N[nu];
}

u128 count_zeros_cong(const forms::QuadForm4& f, const forms::CongruenceClass& cc, u64 p, int nu) {
    if (nu < 0) throw std::invalid_argument("count_zeros_cong: nu must be >= 0");
    if (nu == 0) return 1;
    int a = 0;
    u64 m = cc.m;
    while (m % p == 0) {
        m /= p;
        ++a;
    }
    if (a == 0) return count_zeros(f, p, nu);
    u64 pa = pow_u64(p, a);
    if (nu <= a) {
        u64 pnu = pow_u64(p, nu);
        return arith::mod_norm(f.evaluate(cc.k), i64(pnu)) == 0 ? pow_u128(p, 4 * nu) : 0;
    }
    if (pow_u128(p, nu) > (u128(1) << 40)) throw BudgetExceeded("count_zeros_cong: p^nu out of range");
    if (arith::mod_norm(f.evaluate(cc.k), i64(pa)) != 0) return 0;
    std::array<u64, 4> base{u64(arith::mod_norm(cc.k[0], i64(pa))), u64(arith::mod_norm(cc.k[1], i64(pa))),
                            u64(arith::mod_norm(cc.k[2], i64(pa))), u64(arith::mod_norm(cc.k[3], i64(pa)))};
    Ctx ctx = make_ctx(f, p, nu);
    u128 c = count_above(ctx, base, a);
    return pow_u128(p, 4 * a) * c;
}

void walk_zeros(const forms::QuadForm4& f, u64 p, int s, const std::array<u64, 4>& base,
                int base_level, const ZeroVisitor& visit) {
    if (s < 0) throw std::invalid_argument("walk_zeros: s must be >= 0");
    if (pow_u128(p, s) > (u128(1) << 12)) throw BudgetExceeded("walk_zeros: p^s out of range");
    if (s == 0) {
        visit({0, 0, 0, 0});
        return;
    }
    Ctx ctx = make_ctx(f, p, s);
    if (base_level == 0) {
        level1_zeros(ctx, false, [&](const std::array<u64, 4>& y) { walk_above(ctx, y, 1, visit); });
        return;
    }
    if (base_level > s) throw std::invalid_argument("walk_zeros: base level exceeds target");
    u64 pbl = pow_u64(p, base_level);
    std::array<u64, 4> y{base[0] % pbl, base[1] % pbl, base[2] % pbl, base[3] % pbl};
    if (eval_mod(ctx, y, pbl) != 0) return;
    walk_above(ctx, y, base_level, visit);
}

}  // namespace qf4::hensel
