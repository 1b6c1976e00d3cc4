#pragma once

// Main-term predictions (square and non-square determinant cases), the
// primitive-solution bias factors, measured tau residuals with trend
// verdicts, and JSON prediction reports for the worked examples.

#include <string>
#include <vector>

#include "qf4/counting.hpp"
#include "qf4/forms.hpp"
#include "qf4/weights.hpp"

namespace qf4::predict {

using forms::CongruenceClass;
using forms::QuadForm4;

struct MainTermFactors {
    double sigma_inf = 0.0;
    double l_value = 0.0;     // L(1, chi_Delta); 1 in the square case
    double sigma_star = 0.0;  // sigma* or sigma*_sq
    double m_pow4 = 1.0;
};

// sigma_inf L(1,chi_Delta) sigma* m^-4 P^2; requires a non-square
// determinant class.
MainTermFactors main_term_nonsquare_factors(const QuadForm4& f, const CongruenceClass& cc,
                                            const weights::WeightSpec& w);
double main_term_nonsquare(const QuadForm4& f, const CongruenceClass& cc,
                           const weights::WeightSpec& w, double P);

// Leading term sigma_inf sigma*_sq m^-4 P^2 log P; requires a square
// determinant class. The order-P^2 constant is fitted, never predicted.
double main_term_square(const QuadForm4& f, const CongruenceClass& cc, const weights::WeightSpec& w,
                        double P);

struct Prop51 {
    double n_pred = 0.0;
    double nprim_pred = 0.0;
    double ratio_l2 = 0.0;  // r = L(2, chi0 chi_Delta) / L(2, chi0)
    int chi_d = 0;
    double bias_factor = 0.0;  // 1 - chi_Delta(d) r
};

// Predictions for the class d k under the hypothesis that the base class
// k carries no primitive solutions; requires Delta | m^inf.
Prop51 prop51_prediction(const QuadForm4& f, const CongruenceClass& cc,
                         const weights::WeightSpec& w, i64 d, double P);

struct TauResult {
    std::vector<double> P_grid;
    std::vector<double> counts;
    std::vector<double> residuals;  // (N - main) / P^2
    double extrapolated = 0.0;      // last residual: tau m^-4 estimate
};

TauResult tau_residual(const QuadForm4& f, const CongruenceClass& cc, const weights::WeightSpec& w,
                       const std::vector<double>& P_grid,
                       counting::Engine engine = counting::Engine::automatic);

// Trend verdict: |last| < |first| / 2 and non-increasing magnitudes on at
// least 2/3 of consecutive pairs.
bool tends_to_zero(const std::vector<double>& seq);

struct ReportRow {
    double P = 0.0;
    double N = 0.0;
    double Nprim = 0.0;
    double main = 0.0;
    double residual = 0.0;
};

struct Verdict {
    std::string name;
    bool pass = false;
    double tolerance = 0.0;
    std::string detail;
};

struct PredictionReport {
    std::string scenario;
    std::string form;    // 10 comma-separated coefficients
    u64 m = 1;
    std::string k;       // 4 comma-separated residues
    std::string weight;
    std::vector<double> P_grid;
    std::vector<ReportRow> rows;
    std::vector<Verdict> verdicts;
    std::string provenance;

    std::string to_json() const;
};

// Full pipeline for the named scenario (ex1, ex2, square); writes the JSON
// report to out_path when non-empty.
PredictionReport verify_example(const std::string& name, double P_max, const std::string& out_path);

}  // namespace qf4::predict
