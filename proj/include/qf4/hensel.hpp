#pragma once

// Zeros of F (or of F(mx+k)) modulo prime powers, by Hensel lifting:
// non-singular classes lift analytically (p^3 children per level), only
// singular branches are walked. Counting returns exact integers; walking
// streams every solution class for exponential-sum histograms.

#include <functional>

#include "qf4/forms.hpp"
#include "qf4/int128.hpp"

namespace qf4::hensel {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// #{y mod p^nu : F(y) = 0 mod p^nu}. Uses the homogeneous reduction
// N_nu = N^prim_nu + p^4 N_{nu-2} to keep the divisible cone cheap.
u128 count_zeros(const forms::QuadForm4& f, u64 p, int nu);

// #{b mod p^nu : F(mb+k) = 0 mod p^nu}. Reduces to count_zeros when
// p does not divide m.
u128 count_zeros_cong(const forms::QuadForm4& f, const forms::CongruenceClass& cc, u64 p, int nu);

using ZeroVisitor = std::function<void(const std::array<u64, 4>&)>;

// Stream all y mod p^s with F(y) = 0 mod p^s and y = base mod p^base_level
// (base_level = 0 means unconstrained). Throws BudgetExceeded when the
// estimated walk size is out of range.
void walk_zeros(const forms::QuadForm4& f, u64 p, int s, const std::array<u64, 4>& base,
                int base_level, const ZeroVisitor& visit);

}  // namespace qf4::hensel
