// Command-line front end: lattice counts, exponential sums, local
// densities, L-values, main-term predictions and example reports.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "qf4/arith.hpp"
#include "qf4/characters.hpp"
#include "qf4/counting.hpp"
#include "qf4/expsums.hpp"
#include "qf4/forms.hpp"
#include "qf4/local.hpp"
#include "qf4/predict.hpp"
#include "qf4/weights.hpp"

using namespace qf4;

namespace {

struct FormArgs {
    std::string form;
    u64 m = 1;
    std::string k = "0,0,0,0";
};

void add_form_opts(CLI::App* cmd, FormArgs& fa, bool need_class) {
    cmd->add_option("--form", fa.form, "10 comma-separated coefficients a11,a12,a13,a14,a22,a23,a24,a33,a34,a44")
        ->required();
    auto* mo = cmd->add_option("--m", fa.m, "congruence modulus");
    auto* ko = cmd->add_option("--k", fa.k, "4 comma-separated residues");
    if (need_class) {
        mo->required();
        ko->required();
    }
}

forms::CongruenceClass make_class(const forms::QuadForm4& f, const FormArgs& fa) {
    return forms::validate_congruence(f, fa.m, forms::parse_vec4(fa.k));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circle-method counts and predictions for quaternary quadratic forms"};
    app.require_subcommand(1);

    // count
    auto* count = app.add_subcommand("count", "enumerate and count lattice solutions");
    FormArgs count_fa;
    double count_pmax = 100;
    bool count_prim = false;
    std::string count_weight = "bump:1,1,1,1:0.5,0.5,0.5,0.5";
    std::string count_dump;
    add_form_opts(count, count_fa, true);
    count->add_option("--pmax", count_pmax, "scale P")->required();
    count->add_flag("--primitive", count_prim, "count primitive solutions only");
    count->add_option("--weight", count_weight, "bump:c1,..,c4:r1,..,r4 or box:...");
    count->add_option("--dump", count_dump, "write solutions to a CSV file");

    // expsum
    auto* expsum = app.add_subcommand("expsum", "complete exponential sum S_q(c; m, k)");
    FormArgs exp_fa;
    u64 exp_q = 1;
    std::string exp_c = "0,0,0,0";
    add_form_opts(expsum, exp_fa, false);
    expsum->add_option("--q", exp_q, "modulus q")->required();
    expsum->add_option("--c", exp_c, "frequency vector")->required();

    // density
    auto* density = app.add_subcommand("density", "local density sigma_p");
    FormArgs den_fa;
    u64 den_p = 2;
    bool den_twisted = false;
    add_form_opts(density, den_fa, false);
    density->add_option("--p", den_p, "prime")->required();
    density->add_flag("--twisted", den_twisted, "chi_Delta-twisted density sigma_p'");

    // lvalue
    auto* lvalue = app.add_subcommand("lvalue", "Dirichlet L-value for a real character");
    i64 lv_disc = 0;
    u64 lv_principal = 0;
    int lv_s = 2;
    double lv_tol = 1e-10;
    auto* dopt = lvalue->add_option("--disc", lv_disc, "Kronecker character discriminant");
    auto* popt = lvalue->add_option("--principal", lv_principal, "principal character modulus");
    lvalue->add_option("--s", lv_s, "s in {1, 2}")->required();
    lvalue->add_option("--tol", lv_tol, "tail tolerance");
    dopt->excludes(popt);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "main term vs exact counts");
    FormArgs pred_fa;
    std::string pred_weight = "bump:1,1,1,1:0.5,0.5,0.5,0.5";
    double pred_pmax = 1000;
    add_form_opts(predict_cmd, pred_fa, true);
    predict_cmd->add_option("--weight", pred_weight, "weight spec");
    predict_cmd->add_option("--pmax", pred_pmax, "largest P")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "run a named example scenario");
    std::string ver_example;
    double ver_pmax = 1000;
    std::string ver_report;
    verify->add_option("--example", ver_example, "ex1 | ex2 | square")->required();
    verify->add_option("--pmax", ver_pmax, "largest P")->required();
    verify->add_option("--report", ver_report, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count) {
            auto f = forms::QuadForm4::parse(count_fa.form);
            auto cc = make_class(f, count_fa);
            auto w = weights::WeightSpec::parse(count_weight);
            double n = count_prim ? counting::count_primitive(f, cc, count_pmax, w)
                                  : counting::count_weighted(f, cc, count_pmax, w);
            printf("%s = %.10g\n", count_prim ? "N_prim" : "N", n);
            if (!count_dump.empty()) {
                auto sols = counting::collect(f, cc, count_pmax, w);
                counting::dump_csv(count_dump, sols);
                printf("wrote %zu solutions to %s\n", sols.size(), count_dump.c_str());
            }
        } else if (*expsum) {
            auto f = forms::QuadForm4::parse(exp_fa.form);
            auto cc = make_class(f, exp_fa);
            auto c = forms::parse_vec4(exp_c);
            auto v = expsums::sq_cong(f, exp_q, c, cc);
            printf("S_%llu(c; m, k) = %.10g %+.10gi\n", (unsigned long long)exp_q, v.value.real(),
                   v.value.imag());
            if (v.exact) printf("exact integer value: %s\n", to_string(*v.exact).c_str());
        } else if (*density) {
            auto f = forms::QuadForm4::parse(den_fa.form);
            auto cc = make_class(f, den_fa);
            auto mode = den_twisted ? local::DensityMode::twisted
                                    : (cc.m % den_p == 0 ? local::DensityMode::congruence
                                                         : local::DensityMode::plain);
            auto d = local::sigma_p(f, cc, den_p, mode);
            const char* mode_name = den_twisted ? "sigma_p'" : (cc.m % den_p == 0 ? "sigma_p(m,k)" : "sigma_p");
            printf("%s = %.12g = %s/%s  (nu = %d, stabilized = %s)\n", mode_name, d.value,
                   to_string(d.exact.num).c_str(), to_string(d.exact.den).c_str(), d.nu_used,
                   d.stabilized ? "yes" : "no");
        } else if (*lvalue) {
            characters::DirichletCharacter chi =
                lv_principal > 0 ? characters::DirichletCharacter::principal(lv_principal)
                                 : characters::DirichletCharacter::kronecker_char(lv_disc);
            if (lv_principal == 0 && lv_disc == 0)
                throw std::invalid_argument("lvalue: give --disc or --principal");
            auto v = local::l_value(chi, lv_s, lv_tol);
            printf("L(%d, chi) = %.12f  (certified error <= %.3g)\n", lv_s, v.value, v.error_bound);
        } else if (*predict_cmd) {
            auto f = forms::QuadForm4::parse(pred_fa.form);
            auto cc = make_class(f, pred_fa);
            auto w = weights::WeightSpec::parse(pred_weight);
            std::vector<double> grid;
            for (int i = 3; i >= 0; --i) grid.push_back(std::floor(pred_pmax / (1 << i)));
            if (f.square_disc()) {
                printf("square determinant class: leading term sigma_inf sigma*_sq m^-4 P^2 log P\n");
                for (double P : grid) {
                    double N = counting::count_weighted(f, cc, P, w);
                    double main = predict::main_term_square(f, cc, w, P);
                    printf("P=%-8.0f N=%-14.6g main=%-14.6g (N-main)/P^2=%+.6g\n", P, N, main,
                           (N - main) / (P * P));
                }
            } else {
                auto fa = predict::main_term_nonsquare_factors(f, cc, w);
                printf("sigma_inf=%.8g  L(1,chi_Delta)=%.8g  sigma*=%.8g  m^4=%.0f\n", fa.sigma_inf,
                       fa.l_value, fa.sigma_star, fa.m_pow4);
                auto tau = predict::tau_residual(f, cc, w, grid);
                for (size_t i = 0; i < grid.size(); ++i) {
                    double P = grid[i];
                    printf("P=%-8.0f N=%-14.6g main=%-14.6g residual/P^2=%+.6g\n", P, tau.counts[i],
                           fa.sigma_inf * fa.l_value * fa.sigma_star / fa.m_pow4 * P * P,
                           tau.residuals[i]);
                }
                if (arith::crt_split(f.conductor(), cc.m).first == 1 && !f.square_disc()) {
                    auto p51 = prop51_prediction(f, cc, w, 1, grid.back());
                    printf("L(2) ratio r=%.6f; bias factors: 1-r=%.6f (chi=+1), 1+r=%.6f (chi=-1)\n",
                           p51.ratio_l2, 1.0 - p51.ratio_l2, 1.0 + p51.ratio_l2);
                }
            }
        } else if (*verify) {
            auto rep = predict::verify_example(ver_example, ver_pmax, ver_report);
            printf("scenario %s: %zu rows\n", rep.scenario.c_str(), rep.rows.size());
            for (const auto& r : rep.rows)
                printf("P=%-8.0f N=%-12.6g Nprim=%-10.6g main=%-12.6g residual=%+.6g\n", r.P, r.N,
                       r.Nprim, r.main, r.residual);
            for (const auto& v : rep.verdicts)
                printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.detail.c_str());
            if (!ver_report.empty()) printf("report written to %s\n", ver_report.c_str());
        }
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
