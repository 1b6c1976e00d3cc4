#pragma once

// Exact multiplicative number theory: factorization, Kronecker symbol,
// modular inverses, CRT splitting q = uv with (u,m)=1 and v|m^inf,
// Ramanujan sums and the small helpers built on top of them.

#include <stdexcept>
#include <utility>
#include <vector>

#include "qf4/int128.hpp"

namespace qf4::arith {

struct NotCoprimeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Factorization {
    u128 value = 1;
    std::vector<std::pair<u128, int>> factors;  // (prime, exponent), primes increasing
};

// Cached list of primes <= n (simple sieve, grown on demand).
const std::vector<u32>& primes_upto(u32 n);

u128 mulmod(u128 a, u128 b, u128 m);
u128 powmod(u128 a, u128 e, u128 m);
bool is_prime(u128 n);

// Trial division below 10^6, Pollard-Brent rho with a strong
// pseudoprime test above. Rejects n = 0.
Factorization factorize(u128 n);

std::vector<u128> divisors(const Factorization& f);
inline std::vector<u128> divisors(u128 n) { return divisors(factorize(n)); }

int mobius(u64 n);
u64 euler_phi(u64 n);

// Kronecker symbol (a|n), extending the Jacobi symbol to all integers.
int kronecker(i64 a, i64 n);

// Inverse of a modulo b, normalized to [0, b). Throws NotCoprimeError.
i64 mod_inverse(i64 a, i64 b);

// Unique split q = u*v with gcd(u, m) = 1 and v | m^inf.
std::pair<u64, u64> crt_split(u64 q, u64 m);

// c_q(n) = sum over d | gcd(q,n) of d*mu(q/d).
i64 ramanujan_sum(u64 q, i64 n);

// Square root of a modulo an odd prime p (Tonelli-Shanks); -1 if none.
i64 sqrt_mod_p(i64 a, i64 p);

inline u64 gcd_u64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline i64 gcd_i64(i64 a, i64 b) {
    u64 x = a < 0 ? u64(-a) : u64(a);
    u64 y = b < 0 ? u64(-b) : u64(b);
    return i64(gcd_u64(x, y));
}

// Reduce to [0, m).
inline i64 mod_norm(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

inline i64 mod_norm(i128 a, i64 m) {
    i128 r = a % m;
    return i64(r < 0 ? r + m : r);
}

}  // namespace qf4::arith
