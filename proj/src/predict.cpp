#include "qf4/predict.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "qf4/arith.hpp"
#include "qf4/characters.hpp"
#include "qf4/local.hpp"

namespace qf4::predict {

namespace {

u64 lcm_u64(u64 a, u64 b) { return a / arith::gcd_u64(a, b) * b; }

double l1_chi_delta(const QuadForm4& f) {
    auto chi = characters::DirichletCharacter::kronecker_char(f.disc_fund());
    return local::l_value(chi, 1, 1e-10).value;
}

}  // namespace

MainTermFactors main_term_nonsquare_factors(const QuadForm4& f, const CongruenceClass& cc,
                                            const weights::WeightSpec& w) {
    if (f.square_disc())
        throw std::invalid_argument("main_term_nonsquare: square determinant class");
    MainTermFactors out;
    out.sigma_inf = weights::singular_integral(f, w).value;
    out.l_value = l1_chi_delta(f);
    out.sigma_star = local::singular_series(f, cc, local::SeriesVariant::nonsq).value;
    double m = double(cc.m);
    out.m_pow4 = m * m * m * m;
    return out;
}

double main_term_nonsquare(const QuadForm4& f, const CongruenceClass& cc,
                           const weights::WeightSpec& w, double P) {
    auto fa = main_term_nonsquare_factors(f, cc, w);
    return fa.sigma_inf * fa.l_value * fa.sigma_star / fa.m_pow4 * P * P;
}

double main_term_square(const QuadForm4& f, const CongruenceClass& cc, const weights::WeightSpec& w,
                        double P) {
    if (!f.square_disc())
        throw std::invalid_argument("main_term_square: non-square determinant class");
    double si = weights::singular_integral(f, w).value;
    double ss = local::singular_series(f, cc, local::SeriesVariant::sq).value;
    double m = double(cc.m);
    return si * ss / (m * m * m * m) * P * P * std::log(P);
}

Prop51 prop51_prediction(const QuadForm4& f, const CongruenceClass& cc,
                         const weights::WeightSpec& w, i64 d, double P) {
    if (f.square_disc()) throw std::invalid_argument("prop51: requires non-square determinant");
    if (arith::crt_split(f.conductor(), cc.m).first != 1)
        throw std::invalid_argument("prop51: requires Delta | m^inf");
    if (arith::gcd_i64(d, i64(cc.m)) != 1) throw std::invalid_argument("prop51: requires (d, m) = 1");
    Prop51 out;
    u64 M = lcm_u64(cc.m, f.conductor());
    auto chi0chiD = characters::DirichletCharacter::kronecker_char(f.disc_fund()).induced(M);
    double l2_top = local::l_value(chi0chiD, 2, 1e-10).value;
    double l2_bot = local::l_value(characters::DirichletCharacter::principal(cc.m), 2, 1e-10).value;
    out.ratio_l2 = l2_top / l2_bot;
    out.chi_d = f.chi(d);
    out.bias_factor = 1.0 - double(out.chi_d) * out.ratio_l2;
    double mt = main_term_nonsquare(f, cc, w, P);
    out.n_pred = mt * out.bias_factor;
    out.nprim_pred = out.chi_d == 1 ? 0.0 : 2.0 * mt / l2_bot;
    return out;
}

TauResult tau_residual(const QuadForm4& f, const CongruenceClass& cc, const weights::WeightSpec& w,
                       const std::vector<double>& P_grid, counting::Engine engine) {
    if (f.square_disc()) throw std::invalid_argument("tau_residual: requires non-square determinant");
    TauResult out;
    out.P_grid = P_grid;
    auto fa = main_term_nonsquare_factors(f, cc, w);
    double coeff = fa.sigma_inf * fa.l_value * fa.sigma_star / fa.m_pow4;
    for (double P : P_grid) {
        double N = counting::count_weighted(f, cc, P, w, engine);
        out.counts.push_back(N);
        out.residuals.push_back((N - coeff * P * P) / (P * P));
    }
    if (!out.residuals.empty()) out.extrapolated = out.residuals.back();
    return out;
}

bool tends_to_zero(const std::vector<double>& seq) {
    if (seq.size() < 2) return false;
    if (!(std::abs(seq.back()) < 0.5 * std::abs(seq.front()))) return false;
    int ok = 0;
    for (size_t i = 0; i + 1 < seq.size(); ++i)
        if (std::abs(seq[i + 1]) <= std::abs(seq[i]) + 1e-15) ++ok;
    return 3 * ok >= 2 * int(seq.size() - 1);
}

std::string PredictionReport::to_json() const {
    nlohmann::json j;
    j["scenario"] = scenario;
    j["form"] = form;
    j["m"] = m;
    j["k"] = k;
    j["weight"] = weight;
    j["P_grid"] = P_grid;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"P", r.P}, {"N", r.N}, {"Nprim", r.Nprim}, {"main", r.main},
                             {"residual", r.residual}});
    j["verdicts"] = nlohmann::json::array();
    for (const auto& v : verdicts)
        j["verdicts"].push_back(
            {{"name", v.name}, {"pass", v.pass}, {"tolerance", v.tolerance}, {"detail", v.detail}});
    j["provenance"] = provenance;
    return j.dump(2);
}

namespace {

std::vector<double> geometric_grid(double P_max, int points) {
    std::vector<double> g;
    for (int i = points - 1; i >= 0; --i) g.push_back(std::floor(P_max / std::pow(2.0, i)));
    return g;
}

PredictionReport report_common(const std::string& scenario, const QuadForm4& f,
                               const CongruenceClass& cc, const weights::WeightSpec& w,
                               double P_max) {
    PredictionReport rep;
    rep.scenario = scenario;
    std::string form;
    for (int i = 0; i < 10; ++i) form += (i ? "," : "") + std::to_string(f.coeffs()[i]);
    rep.form = form;
    rep.m = cc.m;
    rep.k = forms::format_vec4(cc.k);
    rep.weight = w.to_string();
    rep.P_grid = geometric_grid(P_max, 4);
    rep.provenance =
        "engine=" + std::string(counting::fastpath_applicable(f) ? "fastpath" : "generic") +
        "; lvalue_tol=1e-10; series_pcut=10000; shell_seed=0x9e3779b97f4a7c15";
    return rep;
}

}  // namespace

PredictionReport verify_example(const std::string& name, double P_max, const std::string& out_path) {
    PredictionReport rep;
    auto box = weights::WeightSpec::box({1.0, 1.0, 1.0, 1.0}, {0.5, 0.5, 0.5, 0.5});
    if (name == "ex1") {
        // x1^2 - pq x2^2 - x3 x4 with p = 17, q = 41; k = 13 satisfies
        // (k|p) = 1, (k|q) = -1.
        auto f = QuadForm4::parse("1,0,0,0,-697,0,0,0,-1,0");
        auto cc = forms::validate_congruence(f, 697, {13, 0, 13, 13});
        rep = report_common("ex1", f, cc, box, P_max);
        bool prim_zero = true;
        for (double P : rep.P_grid) {
            ReportRow row;
            row.P = P;
            row.N = counting::count_weighted(f, cc, P, box);
            row.Nprim = counting::count_primitive(f, cc, P, box);
            row.main = main_term_nonsquare(f, cc, box, P);
            row.residual = (row.N - row.main) / (P * P);
            prim_zero = prim_zero && row.Nprim == 0.0;
            rep.rows.push_back(row);
        }
        rep.verdicts.push_back({"primitive_count_zero", prim_zero, 0.0,
                                "N^prim identically zero on the P grid"});
    } else if (name == "ex2") {
        auto f = QuadForm4::parse("1,0,0,0,1,0,0,0,-1,0");
        auto cc = forms::validate_congruence(f, 4, {0, 3, 3, 3});
        auto cc3 = forms::validate_congruence(f, 4, {0, 1, 1, 1});
        rep = report_common("ex2", f, cc, box, P_max);
        bool prim_zero = true;
        std::vector<double> n_base, n_alt;
        for (double P : rep.P_grid) {
            ReportRow row;
            row.P = P;
            row.N = counting::count_weighted(f, cc, P, box);
            row.Nprim = counting::count_primitive(f, cc, P, box);
            row.main = main_term_nonsquare(f, cc, box, P);
            row.residual = (row.N - row.main) / (P * P);
            prim_zero = prim_zero && row.Nprim == 0.0;
            n_base.push_back(row.N);
            n_alt.push_back(counting::count_weighted(f, cc3, P, box));
            rep.rows.push_back(row);
        }
        rep.verdicts.push_back({"primitive_count_zero", prim_zero, 0.0,
                                "N^prim identically zero on the P grid"});
        auto p51 = prop51_prediction(f, cc, box, 1, rep.P_grid.back());
        double want = (1.0 - p51.ratio_l2) / (1.0 + p51.ratio_l2);
        double have = n_base.back() / std::max(1.0, n_alt.back());
        rep.verdicts.push_back({"bias_ratio", std::abs(have - want) < 0.06, 0.06,
                                "N(P;m,k)/N(P;m,3k) = " + std::to_string(have) + ", predicted " +
                                    std::to_string(want)});
        // Residual antisymmetry under k -> 3k, smooth weight.
        auto bump = weights::WeightSpec::bump({1.0, 1.0, 1.0, 1.0}, {0.5, 0.5, 0.5, 0.5});
        auto t1 = tau_residual(f, cc, bump, rep.P_grid);
        auto t3 = tau_residual(f, cc3, bump, rep.P_grid);
        std::vector<double> sums;
        for (size_t i = 0; i < t1.residuals.size(); ++i)
            sums.push_back(t1.residuals[i] + t3.residuals[i]);
        rep.verdicts.push_back({"residual_antisymmetry", tends_to_zero(sums), 0.5,
                                "residual(k) + residual(3k) trends to zero (smooth weight)"});
    } else if (name == "square") {
        auto f = QuadForm4::parse("0,1,0,0,0,0,0,0,-1,0");
        CongruenceClass cc{1, {0, 0, 0, 0}};
        rep = report_common("square", f, cc, box, P_max);
        std::vector<double> xs, ys;
        for (double P : rep.P_grid) {
            ReportRow row;
            row.P = P;
            row.N = counting::count_weighted(f, cc, P, box);
            row.Nprim = counting::count_primitive(f, cc, P, box);
            row.main = main_term_square(f, cc, box, P);
            row.residual = (row.N - row.main) / (P * P);
            xs.push_back(std::log(P));
            ys.push_back(row.N / (P * P));
            rep.rows.push_back(row);
        }
        // Slope of N/P^2 against log P vs sigma_inf sigma*_sq.
        double n = double(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double predicted = weights::singular_integral(f, box).value *
                           local::singular_series(f, cc, local::SeriesVariant::sq).value;
        bool pass = std::abs(slope - predicted) <= 0.2 * std::abs(predicted);
        rep.verdicts.push_back({"log_slope_fit", pass, 0.2,
                                "fitted slope " + std::to_string(slope) + ", predicted " +
                                    std::to_string(predicted)});
    } else {
        throw std::invalid_argument("verify_example: name must be ex1, ex2 or square");
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path);
        out << rep.to_json() << "\n";
    }
    return rep;
}

}  // namespace qf4::predict
