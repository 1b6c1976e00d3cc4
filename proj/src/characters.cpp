#include "qf4/characters.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace qf4::characters {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

u64 lcm_u64(u64 a, u64 b) { return a / arith::gcd_u64(a, b) * b; }

// Smallest primitive root mod p^e for odd p.
u64 primitive_root(u64 p, int e) {
    u64 pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    u64 phi_p = p - 1;
    auto fac = arith::factorize(phi_p);
    auto is_root_mod_p = [&](u64 g) {
        for (auto [q, ex] : fac.factors) {
            (void)ex;
            if (arith::powmod(g, phi_p / u64(q), p) == 1) return false;
        }
        return true;
    };
    u64 g = 2;
    while (!is_root_mod_p(g)) ++g;
    if (e >= 2) {
        // Lift: g generates mod p^e unless g^(p-1) = 1 mod p^2.
        if (arith::powmod(g, p - 1, p * p) == 1) g += p;
    }
    return g % pe;
}

UnitGroupFactor make_cyclic_factor(u64 pe, u64 gen, u64 order) {
    UnitGroupFactor f;
    f.pe = pe;
    f.gen = gen;
    f.order = order;
    f.log.assign(pe, -1);
    u64 x = 1 % pe;
    for (u64 t = 0; t < order; ++t) {
        f.log[x] = i32(t);
        x = u64((u128(x) * gen) % pe);
    }
    return f;
}

std::mutex g_groups_mutex;
std::map<u64, std::shared_ptr<const UnitGroup>> g_groups;

}  // namespace

std::shared_ptr<const UnitGroup> UnitGroup::get(u64 n) {
    if (n == 0 || n > 2000000) throw std::invalid_argument("unit group: modulus out of range");
    std::lock_guard<std::mutex> lock(g_groups_mutex);
    auto it = g_groups.find(n);
    if (it != g_groups.end()) return it->second;

    auto grp = std::make_shared<UnitGroup>();
    grp->modulus = n;
    grp->exponent = 1;
    auto fac = arith::factorize(n);
    for (auto [pw, e] : fac.factors) {
        u64 p = u64(pw);
        u64 pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 1) continue;  // trivial unit group
            if (e == 2) {
                grp->factors.push_back(make_cyclic_factor(4, 3, 2));
            } else {
                // (Z/2^e)* = <-1> x <5>
                grp->factors.push_back(make_cyclic_factor(pe, pe - 1, 2));
                grp->factors.push_back(make_cyclic_factor(pe, 5, pe / 4));
            }
        } else {
            u64 order = pe / p * (p - 1);
            grp->factors.push_back(make_cyclic_factor(pe, primitive_root(p, e), order));
        }
    }
    for (const auto& f : grp->factors) grp->exponent = lcm_u64(grp->exponent, f.order);
    g_groups[n] = grp;
    return grp;
}

DirichletCharacter DirichletCharacter::principal(u64 n) {
    DirichletCharacter chi;
    chi.modulus_ = n;
    chi.grp_ = UnitGroup::get(n);
    chi.L_ = chi.grp_->exponent;
    chi.exps_.assign(chi.grp_->factors.size(), 0);
    return chi;
}

DirichletCharacter DirichletCharacter::kronecker_char(i64 disc) {
    u64 n = u64(disc < 0 ? -disc : disc);
    if (n == 0) throw std::invalid_argument("kronecker character: disc must be nonzero");
    DirichletCharacter chi = principal(n);
    for (size_t i = 0; i < chi.grp_->factors.size(); ++i) {
        const auto& f = chi.grp_->factors[i];
        // Evaluate on a CRT lift of the factor generator (1 elsewhere).
        i64 rep = 0;
        u64 mod_rest = n / f.pe * (n / f.pe == n ? 1 : 1);
        // CRT: x = gen mod pe, x = 1 mod n/pe' for all other factor moduli.
        // Build directly: solve with pairwise moduli products.
        u64 other = 1;
        auto fac = arith::factorize(n);
        for (auto [pw, e] : fac.factors) {
            u64 pe2 = 1;
            for (int j = 0; j < e; ++j) pe2 *= u64(pw);
            if (pe2 != f.pe) other *= pe2;
        }
        (void)mod_rest;
        if (other == 1) {
            rep = i64(f.gen);
        } else {
            i64 inv_other = arith::mod_inverse(i64(other % f.pe), i64(f.pe));
            // rep = 1 + other*t with other*t = gen-1 mod pe
            i64 t = arith::mod_norm(i128(i64(f.gen) - 1) * inv_other, i64(f.pe));
            rep = i64((u128(other) * u64(t) + 1) % n);
        }
        int v = arith::kronecker(disc, rep);
        if (v == 1) {
            chi.exps_[i] = 0;
        } else if (v == -1) {
            if (f.order % 2 != 0) throw std::logic_error("kronecker character: odd factor order");
            chi.exps_[i] = u32(f.order / 2);
        } else {
            throw std::logic_error("kronecker character: generator not a unit");
        }
    }
    return chi;
}

DirichletCharacter DirichletCharacter::from_exponents(u64 n, std::vector<u32> exps) {
    DirichletCharacter chi = principal(n);
    if (exps.size() != chi.exps_.size()) throw std::invalid_argument("exponent vector size mismatch");
    for (size_t i = 0; i < exps.size(); ++i) chi.exps_[i] = exps[i] % u32(chi.grp_->factors[i].order);
    return chi;
}

bool DirichletCharacter::is_principal() const {
    return std::all_of(exps_.begin(), exps_.end(), [](u32 e) { return e == 0; });
}

i64 DirichletCharacter::angle(i64 x) const {
    u64 xm = u64(arith::mod_norm(x, i64(modulus_)));
    if (modulus_ == 1) return 0;
    if (arith::gcd_u64(xm, modulus_) != 1) return -1;
    u64 a = 0;
    for (size_t i = 0; i < grp_->factors.size(); ++i) {
        const auto& f = grp_->factors[i];
        i32 lg = f.log[xm % f.pe];
        if (lg < 0) return -1;
        a = (a + u64(exps_[i]) % f.order * (L_ / f.order) % L_ * u64(lg)) % L_;
    }
    return i64(a % L_);
}

std::complex<double> DirichletCharacter::operator()(i64 x) const {
    i64 a = angle(x);
    if (a < 0) return {0.0, 0.0};
    if (a == 0) return {1.0, 0.0};
    if (2 * a == i64(L_)) return {-1.0, 0.0};
    double th = kTau * double(a) / double(L_);
    return {std::cos(th), std::sin(th)};
}

DirichletCharacter DirichletCharacter::times(const DirichletCharacter& other) const {
    if (modulus_ != other.modulus_) throw std::invalid_argument("character product: modulus mismatch");
    DirichletCharacter chi = *this;
    for (size_t i = 0; i < exps_.size(); ++i) {
        u64 d = grp_->factors[i].order;
        chi.exps_[i] = u32((u64(exps_[i]) + other.exps_[i]) % d);
    }
    return chi;
}

DirichletCharacter DirichletCharacter::conj() const {
    DirichletCharacter chi = *this;
    for (size_t i = 0; i < exps_.size(); ++i) {
        u64 d = grp_->factors[i].order;
        chi.exps_[i] = u32((d - exps_[i]) % d);
    }
    return chi;
}

DirichletCharacter DirichletCharacter::induced(u64 M) const {
    if (M % modulus_ != 0) throw std::invalid_argument("induced character: modulus must be a multiple");
    if (M == modulus_) return *this;
    DirichletCharacter chi = principal(M);
    for (size_t i = 0; i < chi.grp_->factors.size(); ++i) {
        const auto& f = chi.grp_->factors[i];
        // chi_M(g_i) = chi(g_i); its order divides f.order.
        u64 other = 1;
        auto fac = arith::factorize(M);
        for (auto [pw, e] : fac.factors) {
            u64 pe2 = 1;
            for (int j = 0; j < e; ++j) pe2 *= u64(pw);
            if (pe2 != f.pe) other *= pe2;
        }
        i64 rep;
        if (other == 1) {
            rep = i64(f.gen);
        } else {
            i64 inv_other = arith::mod_inverse(i64(other % f.pe), i64(f.pe));
            i64 t = arith::mod_norm(i128(i64(f.gen) - 1) * inv_other, i64(f.pe));
            rep = i64((u128(other) * u64(t) + 1) % M);
        }
        i64 a = angle(rep);
        if (a < 0) throw std::logic_error("induced character: generator not a unit of base modulus");
        // exponent t_i from e(a/L) = e(t_i/order)
        u128 num = u128(a) * f.order;
        if (num % L_ != 0) throw std::logic_error("induced character: order mismatch");
        chi.exps_[i] = u32(u64(num / L_) % f.order);
    }
    return chi;
}

bool DirichletCharacter::operator==(const DirichletCharacter& other) const {
    return modulus_ == other.modulus_ && exps_ == other.exps_;
}

CharacterGroup CharacterGroup::enumerate(u64 n) {
    if (n == 0 || n > 10000) throw std::invalid_argument("character group: modulus must be in [1, 10^4]");
    CharacterGroup g;
    g.modulus = n;
    auto grp = UnitGroup::get(n);
    std::vector<u32> exps(grp->factors.size(), 0);
    while (true) {
        g.chars.push_back(DirichletCharacter::from_exponents(n, exps));
        size_t i = 0;
        for (; i < exps.size(); ++i) {
            if (++exps[i] < grp->factors[i].order) break;
            exps[i] = 0;
        }
        if (i == exps.size()) break;
    }
    return g;
}

std::vector<std::pair<DirichletCharacter, std::complex<double>>> decompose(
    const std::function<std::complex<double>(u64)>& f, u64 n) {
    auto group = CharacterGroup::enumerate(n);
    double phi = double(arith::euler_phi(n));
    std::vector<std::pair<DirichletCharacter, std::complex<double>>> out;
    out.reserve(group.chars.size());
    for (const auto& chi : group.chars) {
        std::complex<double> a{0.0, 0.0};
        for (u64 x = 0; x < n; ++x) {
            if (n != 1 && arith::gcd_u64(x, n) != 1) continue;
            a += f(x) * std::conj(chi(i64(x)));
        }
        out.emplace_back(chi, a / phi);
    }
    return out;
}

namespace {

// Cyclotomic polynomial Phi_L as integer coefficients, by exact division
// of X^L - 1 by the product of Phi_d, d | L, d < L.
std::vector<i64> poly_divide_exact(std::vector<i64> num, const std::vector<i64>& den) {
    std::vector<i64> q(num.size() - den.size() + 1, 0);
    for (int i = int(q.size()) - 1; i >= 0; --i) {
        i64 c = num[i + den.size() - 1] / den.back();
        q[i] = c;
        for (size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    return q;
}

std::vector<i64> cyclotomic(u64 L) {
    static std::map<u64, std::vector<i64>> cache;
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
    std::vector<i64> num(L + 1, 0);
    num[0] = -1;
    num[L] = 1;
    std::vector<i64> acc{1};
    for (u64 d = 1; d < L; ++d) {
        if (L % d != 0) continue;
        auto phi_d = cyclotomic(d);
        std::vector<i64> next(acc.size() + phi_d.size() - 1, 0);
        for (size_t i = 0; i < acc.size(); ++i)
            for (size_t j = 0; j < phi_d.size(); ++j) next[i + j] += acc[i] * phi_d[j];
        acc = std::move(next);
    }
    auto result = poly_divide_exact(std::move(num), acc);
    cache[L] = result;
    return result;
}

}  // namespace

bool character_sum_is_zero_exact(const DirichletCharacter& chi) {
    u64 n = chi.modulus();
    u64 L = chi.order_den();
    std::vector<i64> hist(L, 0);
    i64 units = 0;
    for (u64 x = 0; x < n; ++x) {
        i64 a = chi.angle(i64(x));
        if (a < 0) continue;
        ++units;
        ++hist[u64(a)];
    }
    if (n == 1) {
        units = 1;
        hist.assign(1, 1);
    }
    if (chi.is_principal()) return units == i64(arith::euler_phi(n));
    // Sum = sum_r hist[r] zeta_L^r; exact zero iff Phi_L divides the histogram poly.
    auto phi_L = cyclotomic(L);
    std::vector<i64> rem = hist;
    for (int i = int(rem.size()) - 1; i >= int(phi_L.size()) - 1; --i) {
        i64 c = rem[i];
        if (c == 0) continue;
        for (size_t j = 0; j < phi_L.size(); ++j) rem[i - phi_L.size() + 1 + j] -= c * phi_L[j];
    }
    for (size_t i = 0; i + 1 < phi_L.size(); ++i)
        if (rem[i] != 0) return false;
    return true;
}

std::vector<u64> smooth_numbers(u64 m, u64 bound) {
    std::vector<u64> out{1};
    if (m > 1) {
        auto fac = arith::factorize(m);
        for (auto [p, e] : fac.factors) {
            (void)e;
            size_t sz = out.size();
            for (size_t i = 0; i < sz; ++i) {
                u128 v = out[i];
                while (v * u64(p) <= bound) {
                    v *= u64(p);
                    out.push_back(u64(v));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace qf4::characters
