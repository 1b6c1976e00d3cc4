#pragma once

// Local densities sigma_p (plain, congruence, twisted), Dirichlet L-values
// with certified tails, the three singular-series Euler products, and the
// q <= X convergence table for sum q^-4 S_q(0; m, k).

#include <vector>

#include "qf4/characters.hpp"
#include "qf4/forms.hpp"
#include "qf4/qrat.hpp"

namespace qf4::local {

using forms::CongruenceClass;
using forms::QuadForm4;

enum class DensityMode { plain, congruence, twisted };

struct LocalDensity {
    u64 p = 2;
    Rat exact;           // exact rational limit when stabilized
    double value = 0.0;
    int nu_used = 0;
    DensityMode mode = DensityMode::plain;
    bool stabilized = false;
};

struct DualOracleMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// #{x mod p^nu : F(mx+k) = 0 mod p^nu}; nu = 0 gives 1.
u128 count_mod(const QuadForm4& f, const CongruenceClass& cc, u64 p, int nu);

// Local density, evaluated from the truncated S-sum (exact S_{p^s}(0;m,k))
// and from stabilized counts p^{-3 nu} N_nu; the two routes must agree
// within tol. Stabilization is certified by the exact geometric pattern of
// consecutive differences past the singularity depth, which also makes the
// tail summable in closed form.
LocalDensity sigma_p(const QuadForm4& f, const CongruenceClass& cc, u64 p, DensityMode mode,
                     double tol = 1e-9);

struct LValue {
    double value = 0.0;
    double error_bound = 0.0;
    int s = 1;
};

// L(s, chi) for real chi, s in {1, 2}; s = 1 requires non-principal chi.
// Principal chi mod m at s = 2 evaluates as zeta(2) prod_{p|m} (1 - p^-2).
LValue l_value(const characters::DirichletCharacter& chi, int s, double tol = 1e-10);

enum class SeriesVariant { sq, nonsq, dash };

struct SeriesResult {
    double value = 0.0;
    double last_decade_variation = 0.0;  // empirical truncation error
    u64 p_cut = 0;
    bool converged = false;
};

SeriesResult singular_series(const QuadForm4& f, const CongruenceClass& cc, SeriesVariant variant,
                             double tol = 1e-6, u64 p_cut = 10000);

struct CsumRow {
    double X = 0.0;
    double partial = 0.0;   // sum_{q <= X} q^-4 S_q(0; m, k)
    double residual = 0.0;  // vs L(1,chi) sigma* (nonsq) or the fit (sq)
};

struct CsumResult {
    std::vector<CsumRow> rows;
    bool square_disc = false;
    double target = 0.0;     // L(1, chi_Delta) sigma*  (nonsq case)
    double slope = 0.0;      // regression vs log X     (sq case)
    double intercept = 0.0;  // regression constant     (sq case)
};

CsumResult csum_convergence(const QuadForm4& f, const CongruenceClass& cc,
                            const std::vector<double>& X_grid);

}  // namespace qf4::local
