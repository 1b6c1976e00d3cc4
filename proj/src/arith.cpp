#include "qf4/arith.hpp"

#include <algorithm>
#include <cstdlib>

namespace qf4::arith {

namespace {

u128 gcd_u128(u128 a, u128 b) {
    while (b) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

const std::vector<u32>& primes_upto(u32 n) {
    static std::vector<u32> primes;
    static u32 limit = 0;
    if (n > limit) {
        u32 new_limit = std::max(n, u32(1 << 16));
        std::vector<bool> comp(new_limit + 1, false);
        primes.clear();
        for (u32 i = 2; i <= new_limit; ++i) {
            if (!comp[i]) {
                primes.push_back(i);
                for (u64 j = u64(i) * i; j <= new_limit; j += i) comp[j] = true;
            }
        }
        limit = new_limit;
    }
    return primes;
}

u128 mulmod(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    if (m <= (u128(1) << 63)) return (a * b) % m;
    // Operands may exceed 64 bits; double-and-add keeps intermediates < 2m.
    u128 r = 0;
    while (b) {
        if (b & 1) {
            r += a;
            if (r >= m) r -= m;
        }
        a <<= 1;
        if (a >= m) a -= m;
        b >>= 1;
    }
    return r;
}

u128 powmod(u128 a, u128 e, u128 m) {
    if (m == 1) return 0;
    u128 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

namespace {

bool miller_rabin(u128 n, u128 a) {
    a %= n;
    if (a == 0) return true;
    u128 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u128 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

// Jacobi symbol (a|n) for odd n given as u128: the symbol depends on
// n only through n mod 4|a|.
int jacobi_small_top(i64 a, u128 n) {
    u64 period = 4 * u64(std::llabs(a));
    return kronecker(a, i64(n % period));
}

// Strong Lucas test with Selfridge's parameters (P=1, Q=(1-D)/4).
bool strong_lucas(u128 n) {
    if (is_square(n)) return false;
    i64 D = 5;
    while (true) {
        int j = jacobi_small_top(D, n);
        if (j == -1) break;
        if (j == 0 && u128(std::llabs(D)) % n != 0) return false;
        D = D > 0 ? -(D + 2) : -(D - 2);
    }
    i128 Q = (1 - i128(D)) / 4;
    auto reduce = [n](i128 v) -> u128 {
        if (v >= 0) return u128(v) % n;
        u128 r = u128(-v) % n;
        return r == 0 ? 0 : n - r;
    };
    u128 Qm = reduce(Q);
    u128 Dm = reduce(D);

    u128 d = n + 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u128 U = 0, V = 2, Qk = 1;
    u128 inv2 = (n + 1) / 2;  // n odd
    int bits = 0;
    for (u128 t = d; t; t >>= 1) ++bits;
    for (int i = bits - 1; i >= 0; --i) {
        U = mulmod(U, V, n);
        V = mulmod(V, V, n);
        V = (V + n - mulmod(2, Qk, n)) % n;
        Qk = mulmod(Qk, Qk, n);
        if ((d >> i) & 1) {
            u128 U2 = mulmod(U + V, inv2, n);
            u128 V2 = mulmod((mulmod(Dm, U, n) + V) % n, inv2, n);
            U = U2;
            V = V2;
            Qk = mulmod(Qk, Qm, n);
        }
    }
    if (U == 0 || V == 0) return true;
    for (int r = 1; r < s; ++r) {
        U = mulmod(U, V, n);
        V = mulmod(V, V, n);
        V = (V + n - mulmod(2, Qk, n)) % n;
        Qk = mulmod(Qk, Qk, n);
        if (V == 0) return true;
    }
    return false;
}

u128 pollard_brent(u128 n, u64 seed) {
    if ((n & 1) == 0) return 2;
    u128 y = seed % n, c = 1 + seed % (n - 1), m = 128;
    u128 g = 1, r = 1, q = 1, x = 0, ys = 0;
    while (g == 1) {
        x = y;
        for (u128 i = 0; i < r; ++i) y = (mulmod(y, y, n) + c) % n;
        u128 k = 0;
        while (k < r && g == 1) {
            ys = y;
            u128 lim = std::min(m, r - k);
            for (u128 i = 0; i < lim; ++i) {
                y = (mulmod(y, y, n) + c) % n;
                q = mulmod(q, x > y ? x - y : y - x, n);
            }
            g = gcd_u128(q, n);
            k += lim;
        }
        r <<= 1;
    }
    if (g == n) {
        g = 1;
        while (g == 1) {
            ys = (mulmod(ys, ys, n) + c) % n;
            g = gcd_u128(x > ys ? x - ys : ys - x, n);
        }
    }
    return g;
}

void factor_rec(u128 n, std::vector<u128>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u128 d = n;
    u64 seed = 2;
    while (d == n || d == 1) d = pollard_brent(n, seed++);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime(u128 n) {
    if (n < 2) return false;
    for (u32 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // The first 13 prime bases are deterministic below 3.3e24; beyond that
    // the strong Lucas check makes this a BPSW-style test.
    for (u32 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
        if (!miller_rabin(n, a)) return false;
    }
    if (n >= (u128(1) << 81)) {
        if (!strong_lucas(n)) return false;
    }
    return true;
}

Factorization factorize(u128 n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    f.value = n;
    const auto& ps = primes_upto(1 << 20);
    for (u32 p : ps) {
        if (u128(p) * p > n) break;
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            f.factors.emplace_back(p, e);
        }
    }
    if (n > 1) {
        if (is_prime(n)) {
            f.factors.emplace_back(n, 1);
        } else {
            std::vector<u128> rest;
            factor_rec(n, rest);
            std::sort(rest.begin(), rest.end());
            for (size_t i = 0; i < rest.size();) {
                size_t j = i;
                while (j < rest.size() && rest[j] == rest[i]) ++j;
                f.factors.emplace_back(rest[i], int(j - i));
                i = j;
            }
        }
    }
    std::sort(f.factors.begin(), f.factors.end());
    return f;
}

std::vector<u128> divisors(const Factorization& f) {
    std::vector<u128> ds{1};
    for (auto [p, e] : f.factors) {
        size_t sz = ds.size();
        u128 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

int mobius(u64 n) {
    if (n == 0) throw std::invalid_argument("mobius: n must be positive");
    auto f = factorize(n);
    for (auto [p, e] : f.factors)
        if (e > 1) return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

u64 euler_phi(u64 n) {
    if (n == 0) throw std::invalid_argument("euler_phi: n must be positive");
    u64 r = n;
    auto f = factorize(n);
    for (auto [p, e] : f.factors) r = r / u64(p) * (u64(p) - 1);
    return r;
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) sign = -sign;
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int t = 0;
        while (n % 2 == 0) {
            n /= 2;
            ++t;
        }
        i64 am = mod_norm(a, 8);
        if (t % 2 == 1 && (am == 3 || am == 5)) sign = -sign;
    }
    if (n == 1) return sign;
    a = mod_norm(a, n);
    // Jacobi symbol (a|n), n odd > 1.
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 nm = n % 8;
            if (nm == 3 || nm == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    if (n != 1) return 0;
    return sign * result;
}

i64 mod_inverse(i64 a, i64 b) {
    if (b < 1) throw std::invalid_argument("mod_inverse: modulus must be >= 1");
    if (b == 1) return 0;
    i64 a0 = mod_norm(a, b);
    i64 old_r = a0, r = b;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw NotCoprimeError("mod_inverse: arguments not coprime");
    return mod_norm(old_s, b);
}

std::pair<u64, u64> crt_split(u64 q, u64 m) {
    if (q == 0 || m == 0) throw std::invalid_argument("crt_split: arguments must be positive");
    u64 u = q;
    while (true) {
        u64 g = gcd_u64(u, m);
        if (g == 1) break;
        u /= g;
    }
    return {u, q / u};
}

i64 ramanujan_sum(u64 q, i64 n) {
    if (q == 0) throw std::invalid_argument("ramanujan_sum: q must be positive");
    u64 nr = u64(mod_norm(n, i64(q)));
    u64 g = nr == 0 ? q : gcd_u64(q, nr);
    i64 total = 0;
    for (u128 d : divisors(g)) total += i64(d) * mobius(q / u64(d));
    return total;
}

i64 sqrt_mod_p(i64 a, i64 p) {
    a = mod_norm(a, p);
    if (a == 0) return 0;
    if (p == 2) return a;
    if (powmod(u128(a), u128((p - 1) / 2), u128(p)) != 1) return -1;
    if (p % 4 == 3) return i64(powmod(u128(a), u128((p + 1) / 4), u128(p)));
    // Tonelli-Shanks
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (kronecker(z, p) != -1) ++z;
    u128 M = u128(s), c = powmod(u128(z), u128(q), u128(p));
    u128 t = powmod(u128(a), u128(q), u128(p));
    u128 R = powmod(u128(a), u128((q + 1) / 2), u128(p));
    while (t != 1) {
        u128 tt = t;
        u128 i = 0;
        while (tt != 1) {
            tt = mulmod(tt, tt, u128(p));
            ++i;
            if (i == M) return -1;
        }
        u128 b = c;
        for (u128 j = 0; j + i + 1 < M; ++j) b = mulmod(b, b, u128(p));
        M = i;
        c = mulmod(b, b, u128(p));
        t = mulmod(t, c, u128(p));
        R = mulmod(R, b, u128(p));
    }
    return i64(R);
}

}  // namespace qf4::arith
