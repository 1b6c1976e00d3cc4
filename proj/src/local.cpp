#include "qf4/local.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "qf4/arith.hpp"
#include "qf4/expsums.hpp"
#include "qf4/hensel.hpp"

namespace qf4::local {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

i128 pow_i128(u64 p, int e) {
    i128 r = 1;
    while (e-- > 0) r *= i64(p);
    return r;
}

int val_p(u128 n, u64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Stabilization depth bound: v_p(4 det(2M) m^2) + 2.
int depth_min(const QuadForm4& f, u64 m, u64 p) {
    u128 n = 4;
    i128 d = f.det2m();
    n *= u128(d < 0 ? -d : d);
    n *= u128(m) * u128(m);
    return val_p(n, p) + 2;
}

// u_t = p^{-3t} N_t as exact rationals, for the requested mode's counts.
Rat density_term(const QuadForm4& f, const CongruenceClass& cc, u64 p, int t, bool cong) {
    u128 N = cong ? hensel::count_zeros_cong(f, cc, p, t) : hensel::count_zeros(f, p, t);
    return Rat(i128(N), pow_i128(p, 3 * t));
}

struct StabilizedLimit {
    Rat limit;
    int nu = 0;
    bool ok = false;
};

// Sum_{t>=0} chi^t (u_t - u_{t-1}) with u_{-1} = 0, where past the
// singularity depth the parity differences follow d_{t+2} = d_t / p^2
// exactly; the tail is then a pair of geometric series. chi = 1 gives the
// plain/congruence density, chi = chi_Delta(p) the twisted one.
StabilizedLimit stabilized_sum(const QuadForm4& f, const CongruenceClass& cc, u64 p, bool cong,
                               int chi, int t_min, int t_max) {
    StabilizedLimit out;
    if (chi == 0) {  // only the t = 0 term survives the twist
        out.limit = Rat(1);
        out.ok = true;
        return out;
    }
    std::vector<Rat> u{Rat(1)};  // u_0 = N_0 = 1
    std::vector<Rat> d{Rat(1)};  // d_0 = u_0 - u_{-1} = 1
    Rat partial = Rat(1);        // chi^0 d_0
    i64 sign = 1;
    Rat p2inv = Rat(1, i128(p) * i64(p));
    for (int t = 1; t <= t_max; ++t) {
        u.push_back(density_term(f, cc, p, t, cong));
        d.push_back(u[t] - u[t - 1]);
        sign = (chi == 1) ? 1 : -sign;
        partial = partial + Rat(sign) * d[t];
        if (t >= t_min && t >= 3) {
            bool cert = (d[t] == d[t - 2] * p2inv) && (d[t - 1] == d[t - 3] * p2inv);
            if (cert) {
                out.nu = t;
                out.ok = true;
                // Tail: sum_{j>t} chi^j d_j with d_{t+1} = d_{t-1}/p^2, ...
                i64 s1 = (chi == 1) ? 1 : -sign;  // chi^{t+1}
                i64 s2 = (chi == 1) ? 1 : sign;   // chi^{t+2}
                Rat tail = (Rat(s1) * d[t - 1] * p2inv + Rat(s2) * d[t] * p2inv) /
                           (Rat(1) - p2inv);
                out.limit = partial + tail;
                return out;
            }
        }
    }
    out.nu = t_max;
    out.limit = partial;
    return out;
}

double zeta2_with_euler_factors(u64 m) {
    double v = kPi * kPi / 6.0;
    auto fac = arith::factorize(m);
    for (auto [p, e] : fac.factors) {
        (void)e;
        double pd = double(u64(p));
        v *= 1.0 - 1.0 / (pd * pd);
    }
    return v;
}

}  // namespace

u128 count_mod(const QuadForm4& f, const CongruenceClass& cc, u64 p, int nu) {
    return hensel::count_zeros_cong(f, cc, p, nu);
}

namespace {

struct SigmaKey {
    std::array<i64, 10> coeffs;
    u64 m;
    std::array<i64, 4> k;
    u64 p;
    int mode;
    auto operator<=>(const SigmaKey&) const = default;
};

}  // namespace

LocalDensity sigma_p(const QuadForm4& f, const CongruenceClass& cc, u64 p, DensityMode mode,
                     double tol) {
    static std::map<SigmaKey, LocalDensity> cache;
    static std::mutex cache_mu;
    const bool use_cong_key = (mode == DensityMode::congruence) && (cc.m % p == 0);
    SigmaKey key{f.coeffs(), use_cong_key ? cc.m : 1,
                 use_cong_key ? cc.k : std::array<i64, 4>{0, 0, 0, 0}, p, int(mode)};
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    LocalDensity out;
    out.p = p;
    out.mode = mode;
    const bool cong = (mode == DensityMode::congruence) && (cc.m % p == 0);
    u64 m_eff = mode == DensityMode::congruence ? cc.m : 1;
    int t_min = depth_min(f, m_eff, p);
    int t_max = std::max(t_min + 6, 10);
    // Cap so p^{3t} stays inside i128.
    while (t_max > t_min && 3.0 * t_max * std::log2(double(p)) > 118.0) --t_max;

    int chi = 1;
    CongruenceClass plain{1, {0, 0, 0, 0}};
    const CongruenceClass& use_cc = cong ? cc : plain;
    if (mode == DensityMode::twisted) chi = f.square_disc() ? 1 : arith::kronecker(f.disc_fund(), i64(p));

    auto lim = stabilized_sum(f, use_cc, p, cong, mode == DensityMode::twisted ? chi : 1, t_min, t_max);
    out.exact = lim.limit;
    out.value = lim.limit.to_double();
    out.nu_used = lim.nu;
    out.stabilized = lim.ok;

    if (mode != DensityMode::twisted) {
        // Dual oracle: the truncated S-sum must match the count route.
        Rat ssum(0);
        for (int s = 0; s <= std::min(lim.nu, 6); ++s) {
            i128 S = expsums::sq_zero_exact(f, u64(pow_i128(p, s)), cong ? cc : plain);
            ssum = ssum + Rat(S, pow_i128(p, 4 * s));
        }
        Rat count_route = density_term(f, use_cc, p, std::min(lim.nu, 6), cong);
        double diff = std::abs(ssum.to_double() - count_route.to_double());
        if (diff > tol * std::max(1.0, std::abs(count_route.to_double())))
            throw DualOracleMismatch("sigma_p: S-sum and counting routes disagree");
    }
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        cache.emplace(key, out);
    }
    return out;
}

LValue l_value(const characters::DirichletCharacter& chi, int s, double tol) {
    if (s != 1 && s != 2) throw std::invalid_argument("l_value: s must be 1 or 2");
    LValue out;
    out.s = s;
    const u64 n = chi.modulus();
    if (chi.is_principal()) {
        if (s == 1) throw std::invalid_argument("l_value: L(1, principal) diverges");
        out.value = zeta2_with_euler_factors(n);
        out.error_bound = 1e-14;
        return out;
    }
    if (chi.order_den() > 2 && n > 2) {
        // Real characters only: every exponent doubled must vanish.
        auto sq = chi.times(chi);
        if (!sq.is_principal()) throw std::invalid_argument("l_value: real character required");
    }
    // Period table of chi and its partial sums.
    std::vector<double> cv(n + 1, 0.0);
    std::vector<double> C(n + 1, 0.0);
    for (u64 j = 1; j <= n; ++j) {
        i64 a = chi.angle(i64(j));
        double v = a < 0 ? 0.0 : (a == 0 ? 1.0 : -1.0);
        cv[j] = v;
        C[j] = C[j - 1] + v;
    }
    if (std::abs(C[n]) > 1e-9) throw std::logic_error("l_value: character sums must vanish over a period");

    auto C_at = [&](u64 idx) { return C[idx % n] + 0.0; };  // C is n-periodic since C[n] = 0

    if (s == 2) {
        double B = 0.0;
        for (u64 j = 0; j <= n; ++j) B = std::max(B, std::abs(C[j]));
        u64 N = u64(std::sqrt(2.0 * std::max(B, 1.0) / (tol * 0.5))) + n + 16;
        // L(2): Abel form sum_n C(n) (1/n^2 - 1/(n+1)^2).
        double acc = 0.0, comp = 0.0;
        for (u64 j = N; j >= 1; --j) {
            double nn = double(j);
            double w = (2.0 * nn + 1.0) / (nn * nn * (nn + 1.0) * (nn + 1.0));
            double y = C_at(j) * w - comp;
            double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        out.value = acc;
        out.error_bound = 2.0 * B / (double(N) * double(N)) + 1e-15 * double(N);
        return out;
    }

    // s = 1: L(1, chi) = cbar + sum_n D(n)/(n(n+1)), D = C - mean(C).
    double cbar = 0.0;
    for (u64 j = 1; j <= n; ++j) cbar += C[j];
    cbar /= double(n);
    double B2 = 0.0, E = 0.0;
    for (u64 j = 1; j <= n; ++j) {
        E += C[j] - cbar;
        B2 = std::max(B2, std::abs(E));
    }
    u64 N = u64(std::sqrt(3.0 * std::max(B2, 1.0) / (tol * 0.5))) + n + 16;
    double acc = 0.0, comp = 0.0;
    for (u64 j = N; j >= 1; --j) {
        double nn = double(j);
        double y = (C_at(j) - cbar) / (nn * (nn + 1.0)) - comp;
        double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    out.value = cbar + acc;
    out.error_bound = 3.0 * B2 / (double(N) * double(N)) + 1e-15 * double(N);
    return out;
}

SeriesResult singular_series(const QuadForm4& f, const CongruenceClass& cc, SeriesVariant variant,
                             double tol, u64 p_cut) {
    if (variant == SeriesVariant::sq && !f.square_disc())
        throw std::invalid_argument("singular_series: sq variant requires a square determinant class");
    if (variant == SeriesVariant::nonsq && f.square_disc())
        throw std::invalid_argument("singular_series: nonsq variant requires a non-square determinant class");

    SeriesResult out;
    out.p_cut = p_cut;
    double prod = 1.0;
    const auto& primes = arith::primes_upto(u32(p_cut));
    i128 d2m = f.det2m();
    u128 ad2m = u128(d2m < 0 ? -d2m : d2m);
    for (u32 pp : primes) {
        u64 p = pp;
        if (double(p) > double(p_cut)) break;
        double pd = double(p);
        bool bad = (p == 2) || (ad2m % p == 0) || (cc.m % p == 0) || p <= 61;
        double factor = 1.0;
        if (!bad) {
            int chi_p = arith::kronecker(i64(arith::mod_norm(d2m, i64(p))), i64(p));
            switch (variant) {
                case SeriesVariant::nonsq: factor = 1.0 - double(chi_p) / (pd * pd); break;
                case SeriesVariant::sq: factor = 1.0 - 1.0 / (pd * pd); break;
                case SeriesVariant::dash: factor = 1.0 - 1.0 / (pd * pd); break;
            }
        } else {
            switch (variant) {
                case SeriesVariant::nonsq: {
                    auto sp = sigma_p(f, cc, p, cc.m % p == 0 ? DensityMode::congruence : DensityMode::plain);
                    int chi_d = f.chi(i64(p));
                    factor = (1.0 - double(chi_d) / pd) * sp.value;
                    break;
                }
                case SeriesVariant::sq: {
                    auto sp = sigma_p(f, cc, p, cc.m % p == 0 ? DensityMode::congruence : DensityMode::plain);
                    factor = (1.0 - 1.0 / pd) * sp.value;
                    break;
                }
                case SeriesVariant::dash: {
                    if (cc.m % p == 0) {
                        factor = 1.0 - 1.0 / pd;
                    } else {
                        auto sp = sigma_p(f, cc, p, DensityMode::twisted);
                        factor = (1.0 - 1.0 / pd) * sp.value;
                    }
                    break;
                }
            }
        }
        prod *= factor;
        if (prod == 0.0) {  // a locally insoluble place kills the product
            out.value = 0.0;
            out.converged = true;
            out.last_decade_variation = 0.0;
            return out;
        }
    }
    out.value = prod;
    // Empirical truncation error: spread of the partial product across the
    // last decade of primes.
    double hi = prod, lo = prod;
    {
        double rp = prod;
        for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
            u64 p = *it;
            if (10 * p <= p_cut) break;
            double pd = double(p);
            bool bad = (p == 2) || (ad2m % p == 0) || (cc.m % p == 0) || p <= 61;
            if (bad) continue;
            int chi_p = arith::kronecker(i64(arith::mod_norm(d2m, i64(p))), i64(p));
            double factor = variant == SeriesVariant::nonsq ? 1.0 - double(chi_p) / (pd * pd)
                                                            : 1.0 - 1.0 / (pd * pd);
            rp /= factor;
            hi = std::max(hi, rp);
            lo = std::min(lo, rp);
        }
    }
    out.last_decade_variation = (hi - lo) / std::max(1e-300, std::abs(prod));
    out.converged = out.last_decade_variation < std::max(tol, 1e-12) * 100.0 + 1e-3;
    return out;
}

CsumResult csum_convergence(const QuadForm4& f, const CongruenceClass& cc,
                            const std::vector<double>& X_grid) {
    CsumResult out;
    out.square_disc = f.square_disc();
    if (X_grid.empty()) return out;
    double X_max = X_grid.back();
    for (double x : X_grid)
        if (x > X_max) X_max = x;

    if (!out.square_disc) {
        auto chi = characters::DirichletCharacter::kronecker_char(f.disc_fund());
        auto L = l_value(chi, 1, 1e-10);
        auto ss = singular_series(f, cc, SeriesVariant::nonsq);
        out.target = L.value * ss.value;
    }

    // Exact S_q(0; m, k), prime powers cached.
    std::map<u64, i128> ppcache;
    auto sq0 = [&](u64 q) -> i128 {
        i128 r = 1;
        auto fac = arith::factorize(q);
        for (auto [pw, e] : fac.factors) {
            u64 ps = 1;
            for (int i = 0; i < e; ++i) ps *= u64(pw);
            auto it = ppcache.find(ps);
            if (it == ppcache.end())
                it = ppcache.emplace(ps, expsums::sq_zero_exact(f, ps, cc)).first;
            r *= it->second;
        }
        return r;
    };

    std::vector<double> grid = X_grid;
    std::sort(grid.begin(), grid.end());
    out.rows.clear();
    for (double X : grid) {
        double s = 0.0, c2 = 0.0;
        for (u64 q = 1; double(q) <= X; ++q) {
            double term = double(sq0(q)) / (double(q) * double(q) * double(q) * double(q));
            double y = term - c2;
            double t = s + y;
            c2 = (t - s) - y;
            s = t;
        }
        CsumRow row;
        row.X = X;
        row.partial = s;
        row.residual = out.square_disc ? 0.0 : s - out.target;
        out.rows.push_back(row);
    }
    if (out.square_disc && out.rows.size() >= 2) {
        // Least squares of partial against log X.
        double n = double(out.rows.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& r : out.rows) {
            double x = std::log(r.X);
            sx += x;
            sy += r.partial;
            sxx += x * x;
            sxy += x * r.partial;
        }
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.intercept = (sy - out.slope * sx) / n;
        for (auto& r : out.rows) r.residual = r.partial - (out.slope * std::log(r.X) + out.intercept);
    }
    return out;
}

}  // namespace qf4::local
