#pragma once

// Complete exponential sums S_q(c) and S_q(c; m, k), with:
//  - direct evaluation collapsed through Ramanujan sums (small q),
//  - prime-power evaluation from zero-set histograms,
//  - CRT assembly with the inverse-cofactor twists for composite q,
//  - an exact integer path at c = 0 via the Moebius/N_d identity,
//  - the partial sums S(X, c, m, k) and character-twisted sums.

#include <complex>
#include <functional>
#include <optional>

#include "qf4/forms.hpp"
#include "qf4/int128.hpp"

namespace qf4::expsums {

using forms::CongruenceClass;
using forms::QuadForm4;
using forms::Vec4;
using cplx = std::complex<double>;

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalBudget {
    u64 direct_max = 72;        // O(q^4) direct path
    u64 prime_power_max = 512;  // zero-walk path per prime power
};

struct ExpSumValue {
    cplx value{0.0, 0.0};
    std::optional<i128> exact;  // set when the value is provably integral
    u64 q = 1;
    Vec4 c{0, 0, 0, 0};
    u64 m = 1;
    Vec4 k{0, 0, 0, 0};
};

// S_q(c) = sum*_{a mod q} sum_{b mod q} e_q(a F(b) + c.b).
ExpSumValue sq_plain(const QuadForm4& f, u64 q, const Vec4& c, const EvalBudget& budget = {});

// S_q(c; m, k), phase a F(mb+k) + c.b.
ExpSumValue sq_cong(const QuadForm4& f, u64 q, const Vec4& c, const CongruenceClass& cc,
                    const EvalBudget& budget = {});

// Exact integer S_q(0; m, k) through S_q = sum_{d|q} d mu(q/d) (q/d)^4 N_d,
// assembled multiplicatively over the prime powers of q.
i128 sq_zero_exact(const QuadForm4& f, u64 q, const CongruenceClass& cc);

// Both sides of S_{uv}(c;m,k) = S_u(vbar c;m,k) S_v(ubar c;m,k), each side
// from independent direct evaluations. Preconditions: gcd(u,m)=1, v|m^inf.
std::pair<cplx, cplx> crt_check(const QuadForm4& f, u64 u, u64 v, const Vec4& c,
                                const CongruenceClass& cc);

// S(X, c, m, k) = sum_{q <= X} S_q(c; m, k) e_{mq}(c.k).
cplx partial_sum_S(const QuadForm4& f, double X, const Vec4& c, const CongruenceClass& cc,
                   const EvalBudget& budget = {});

// sum_{u <= X} chi(u) S_u(c) for a character given as a callable.
cplx twisted_partial_sum(const QuadForm4& f, double X,
                         const std::function<cplx(u64)>& chi, const Vec4& c,
                         const EvalBudget& budget = {});

// Internal building block, exposed for the a_chi kernel: phase histogram
// of the value c.b over the zero set used by the prime-power engine, so
// S_{p^s}(x c; m, k) is cheap for many unit multipliers x at once.
class PrimePowerSum {
  public:
    // Prepares S_{p^s}(. ; m, k) evaluations along the ray {x c : x}.
    PrimePowerSum(const QuadForm4& f, u64 p, int s, const Vec4& c, const CongruenceClass& cc,
                  const EvalBudget& budget = {});
    // S_{p^s}(x c; m, k) for any integer x (units are the intended use).
    cplx eval(i64 x) const;

  private:
    u64 p_, ps_;
    int s_;
    bool plain_;                 // p does not divide m
    i64 phase_shift_ = 0;        // plain path: e_{p^s}(-mbar x c.k) twist
    std::vector<i64> hist_top_;  // c.b histogram at level s
    std::vector<i64> hist_sub_;  // level s-1 (empty unless p | c ray-wise)
    bool sub_active_ = false;
    i64 scale_top_ = 1, scale_sub_ = 1;
};

}  // namespace qf4::expsums
