#pragma once

// Dirichlet characters mod n represented exactly: the unit group is
// decomposed into cyclic factors with discrete-log tables, a character is
// an exponent vector against that decomposition, and values are roots of
// unity e(angle/L) with integer angle. This keeps orthogonality sums
// testable in exact integer arithmetic.

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "qf4/arith.hpp"
#include "qf4/forms.hpp"
#include "qf4/int128.hpp"

namespace qf4::characters {

struct UnitGroupFactor {
    u64 pe;                 // prime power component of the modulus
    u64 gen;                // generator of this cyclic factor
    u64 order;              // its order
    std::vector<i32> log;   // log[x mod pe] in [0, order), -1 for non-units
};

struct UnitGroup {
    u64 modulus;
    u64 exponent;  // lcm of factor orders (1 for modulus 1, 2)
    std::vector<UnitGroupFactor> factors;

    static std::shared_ptr<const UnitGroup> get(u64 n);
};

class DirichletCharacter {
  public:
    // Principal character mod n.
    static DirichletCharacter principal(u64 n);
    // Kronecker character (disc | .) at its natural modulus |disc|.
    static DirichletCharacter kronecker_char(i64 disc);
    // From an exponent vector against UnitGroup::get(n).
    static DirichletCharacter from_exponents(u64 n, std::vector<u32> exps);

    u64 modulus() const { return modulus_; }
    u64 order_den() const { return L_; }  // angle denominator
    bool is_principal() const;

    // Angle numerator of chi(x) as a fraction of a full turn: value is
    // e(angle/L); returns -1 when gcd(x, n) > 1.
    i64 angle(i64 x) const;
    std::complex<double> operator()(i64 x) const;

    DirichletCharacter times(const DirichletCharacter& other) const;  // same modulus
    DirichletCharacter conj() const;
    // Extend to a multiple modulus M (zero on non-units of M).
    DirichletCharacter induced(u64 M) const;

    bool operator==(const DirichletCharacter& other) const;

  private:
    u64 modulus_ = 1;
    u64 L_ = 1;
    std::vector<u32> exps_;
    std::shared_ptr<const UnitGroup> grp_;
};

struct CharacterGroup {
    u64 modulus;
    std::vector<DirichletCharacter> chars;  // all phi(n) of them

    static CharacterGroup enumerate(u64 n);  // n <= 10^4
};

// Coefficients a_chi of f(u) = sum_chi a_chi chi(u) for f supported on
// units mod n; pairs (character, coefficient).
std::vector<std::pair<DirichletCharacter, std::complex<double>>> decompose(
    const std::function<std::complex<double>(u64)>& f, u64 n);

// Exact integer test that sum over x mod n of chi(x) vanishes (or equals
// phi(n) for principal chi): reduces the angle histogram against the
// cyclotomic polynomial of the angle denominator.
bool character_sum_is_zero_exact(const DirichletCharacter& chi);

// a_chi(v, c, m, k) = (1/phi(mv)) sum_x chi(x) e_mv(x c.k) S_v(xc; m, k),
// for v | m^inf and chi mod mv.
std::complex<double> a_chi(const DirichletCharacter& chi, const forms::QuadForm4& f, u64 v,
                           const forms::Vec4& c, const forms::CongruenceClass& cc);

struct ATruncated {
    std::complex<double> value{0.0, 0.0};
    double tail_bound = 0.0;        // C * sum over skipped v of 1/v
    std::vector<u64> v_used;        // v | m^inf with Delta | m v, v <= Vmax
};

// Partial sum of A(c, m, k) = sum_v a_{chi0 chiDelta}(v,c,m,k) v^-4 over
// v | m^inf with Delta | m v, truncated at v <= Vmax.
ATruncated A_truncated(const forms::QuadForm4& f, const forms::CongruenceClass& cc,
                       const forms::Vec4& c, u64 Vmax);

// Ascending list of m-smooth numbers (v | m^inf) up to bound.
std::vector<u64> smooth_numbers(u64 m, u64 bound);

}  // namespace qf4::characters
