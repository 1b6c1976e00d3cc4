#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace qf4 {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i32 = std::int32_t;
using u32 = std::uint32_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline std::string to_string(u128 n) {
    if (n == 0) return "0";
    std::string s;
    while (n > 0) {
        s.push_back(char('0' + int(n % 10)));
        n /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

inline std::string to_string(i128 n) {
    if (n < 0) return "-" + to_string(u128(-n));
    return to_string(u128(n));
}

// Floor square root: double seed plus Newton cleanup.
inline u64 isqrt(u128 n) {
    if (n == 0) return 0;
    u128 x = u128(std::sqrt(double(n)));
    if (x == 0) x = 1;
    for (int i = 0; i < 64; ++i) {
        u128 y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    while (x * x > n) --x;
    while ((x + 1) * (x + 1) <= n) ++x;
    return u64(x);
}

inline bool is_square(u128 n) {
    u128 r = isqrt(n);
    return r * r == n;
}

}  // namespace qf4
