#pragma once

// Integer quaternary quadratic forms F(x) = sum_{i<=j} a_ij x_i x_j,
// their Gram matrix 2M, discriminant data (fundamental discriminant of
// the square class of det(2M), conductor, attached real character),
// the adjoint form, and congruence classes (m, k).

#include <array>
#include <stdexcept>
#include <string>

#include "qf4/arith.hpp"
#include "qf4/int128.hpp"

namespace qf4::forms {

using Vec4 = std::array<i64, 4>;

struct SingularFormError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct GcdFailure : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ResidueFailure : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class QuadForm4 {
  public:
    // Coefficients in the order a11,a12,a13,a14,a22,a23,a24,a33,a34,a44.
    static QuadForm4 from_coeffs(const std::array<i64, 10>& coeffs);
    static QuadForm4 parse(const std::string& text);  // 10 comma-separated ints

    const std::array<i64, 10>& coeffs() const { return coeffs_; }
    const std::array<std::array<i64, 4>, 4>& gram2() const { return gram2_; }
    i128 det2m() const { return det2m_; }
    i64 disc_fund() const { return disc_fund_; }   // 1 when det(2M) is a square
    u64 conductor() const { return conductor_; }   // |disc_fund|
    bool square_disc() const { return disc_fund_ == 1; }

    // chi_Delta(n): trivial when the determinant class is a square.
    int chi(i64 n) const;

    i128 evaluate(const Vec4& x) const;
    i128 evaluate(const std::array<i128, 4>& x) const;
    std::array<i128, 4> gradient(const Vec4& x) const;  // (2M)x
    double evaluate_real(const std::array<double, 4>& x) const;
    std::array<double, 4> gradient_real(const std::array<double, 4>& x) const;

    // Adjoint form c -> c^T adj(2M) c; eta(c) tests its vanishing.
    i128 adjoint_eval(const Vec4& c) const;
    bool eta(const Vec4& c) const { return adjoint_eval(c) == 0; }

  private:
    std::array<i64, 10> coeffs_{};
    std::array<std::array<i64, 4>, 4> gram2_{};
    std::array<std::array<i128, 4>, 4> adj_{};  // adjugate of 2M
    i128 det2m_ = 0;
    i64 disc_fund_ = 1;
    u64 conductor_ = 1;
};

struct CongruenceClass {
    u64 m = 1;
    Vec4 k{0, 0, 0, 0};  // residues in [0, m)
};

// Checks gcd(m, gcd(k)) = 1 and F(k) = 0 mod m; normalizes k to [0, m).
CongruenceClass validate_congruence(const QuadForm4& f, u64 m, const Vec4& k);

Vec4 parse_vec4(const std::string& text);
std::string format_vec4(const Vec4& v);

}  // namespace qf4::forms
