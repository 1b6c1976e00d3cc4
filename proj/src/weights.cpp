#include "qf4/weights.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <vector>

namespace qf4::weights {

namespace {

std::array<double, 4> parse_d4(const std::string& text) {
    std::array<double, 4> v{};
    std::stringstream ss(text);
    std::string item;
    int n = 0;
    while (std::getline(ss, item, ',')) {
        if (n >= 4) throw std::invalid_argument("weight spec needs 4 components per block");
        v[n++] = std::stod(item);
    }
    if (n != 4) throw std::invalid_argument("weight spec needs 4 components per block");
    return v;
}

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

double shell_estimate(const forms::QuadForm4& f, const WeightSpec& w) {
    // Stratified Monte Carlo with a fixed seed; every epsilon level is
    // binned in the same pass, then the levels extrapolate linearly to 0.
    const int cells_per_axis = 8;
    const int samples_per_cell = 2200;
    const int jmin = 4, jmax = 12;
    double vol = 1.0;
    for (int i = 0; i < 4; ++i) vol *= w.hi(i) - w.lo(i);
    const u64 ncells = u64(cells_per_axis) * cells_per_axis * cells_per_axis * cells_per_axis;
    std::vector<double> acc(jmax + 1, 0.0);
    std::vector<u64> hits(jmax + 1, 0);
    for (u64 cell = 0; cell < ncells; ++cell) {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (cell * 0xbf58476d1ce4e5b9ull));
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        u64 idx = cell;
        std::array<double, 4> clo, cw;
        for (int i = 0; i < 4; ++i) {
            u64 ci = idx % cells_per_axis;
            idx /= cells_per_axis;
            double width = (w.hi(i) - w.lo(i)) / cells_per_axis;
            clo[i] = w.lo(i) + double(ci) * width;
            cw[i] = width;
        }
        for (int s = 0; s < samples_per_cell; ++s) {
            std::array<double, 4> x;
            for (int i = 0; i < 4; ++i) x[i] = clo[i] + cw[i] * unif(rng);
            double wx = eval_weight(w, x);
            if (wx == 0.0) continue;
            double Fv = std::abs(f.evaluate_real(x));
            for (int j = jmin; j <= jmax; ++j) {
                if (Fv > std::ldexp(1.0, -j)) break;
                acc[j] += wx;
                ++hits[j];
            }
        }
    }
    const double n_total = double(ncells) * samples_per_cell;
    // sigma(eps_j) with weighted least squares against [1, eps].
    double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
    for (int j = jmin; j <= jmax; ++j) {
        if (hits[j] < 64) continue;
        double eps = std::ldexp(1.0, -j);
        double sigma = vol * acc[j] / (n_total * 2.0 * eps);
        double wt = double(hits[j]);
        s0 += wt;
        s1 += wt * eps;
        s2 += wt * eps * eps;
        t0 += wt * sigma;
        t1 += wt * eps * sigma;
    }
    double det = s0 * s2 - s1 * s1;
    if (s0 == 0.0) return 0.0;  // no real zeros meet the support
    if (std::abs(det) < 1e-18 * s0 * s2 + 1e-300) return t0 / s0;
    return (s2 * t0 - s1 * t1) / det;
}

double surface_estimate(const forms::QuadForm4& f, const WeightSpec& w) {
    const auto& a = f.coeffs();
    const int n = w.kind == WeightKind::smooth_bump ? 64 : 144;
    std::vector<double> gx, gw;
    gauss_legendre(n, gx, gw);
    double total = 0.0;
    const double lo4 = w.lo(3), hi4 = w.hi(3);
    for (int i1 = 0; i1 < n; ++i1) {
        double x1 = 0.5 * (w.lo(0) + w.hi(0)) + 0.5 * (w.hi(0) - w.lo(0)) * gx[i1];
        double w1 = 0.5 * (w.hi(0) - w.lo(0)) * gw[i1];
        for (int i2 = 0; i2 < n; ++i2) {
            double x2 = 0.5 * (w.lo(1) + w.hi(1)) + 0.5 * (w.hi(1) - w.lo(1)) * gx[i2];
            double w2 = 0.5 * (w.hi(1) - w.lo(1)) * gw[i2];
            for (int i3 = 0; i3 < n; ++i3) {
                double x3 = 0.5 * (w.lo(2) + w.hi(2)) + 0.5 * (w.hi(2) - w.lo(2)) * gx[i3];
                double w3 = 0.5 * (w.hi(2) - w.lo(2)) * gw[i3];
                // F = A x4^2 + B x4 + C on this fiber.
                double A = double(a[9]);
                double B = double(a[3]) * x1 + double(a[6]) * x2 + double(a[8]) * x3;
                double C = double(a[0]) * x1 * x1 + double(a[1]) * x1 * x2 + double(a[2]) * x1 * x3 +
                           double(a[4]) * x2 * x2 + double(a[5]) * x2 * x3 + double(a[7]) * x3 * x3;
                double roots[2];
                int nr = 0;
                if (A == 0.0) {
                    if (B != 0.0) roots[nr++] = -C / B;
                } else {
                    double D = B * B - 4.0 * A * C;
                    if (D == 0.0) {
                        roots[nr++] = -B / (2.0 * A);
                    } else if (D > 0.0) {
                        double sq = std::sqrt(D);
                        roots[nr++] = (-B + sq) / (2.0 * A);
                        roots[nr++] = (-B - sq) / (2.0 * A);
                    }
                }
                for (int r = 0; r < nr; ++r) {
                    double x4 = roots[r];
                    if (x4 < lo4 || x4 > hi4) continue;
                    double dF4 = B + 2.0 * A * x4;
                    if (std::abs(dF4) < 1e-12) continue;
                    std::array<double, 4> x{x1, x2, x3, x4};
                    total += w1 * w2 * w3 * eval_weight(w, x) / std::abs(dF4);
                }
            }
        }
    }
    return total;
}

}  // namespace

WeightSpec WeightSpec::bump(const std::array<double, 4>& c, const std::array<double, 4>& r) {
    WeightSpec w;
    w.kind = WeightKind::smooth_bump;
    w.center = c;
    w.radius = r;
    return w;
}

WeightSpec WeightSpec::box(const std::array<double, 4>& c, const std::array<double, 4>& r) {
    WeightSpec w;
    w.kind = WeightKind::sharp_box;
    w.center = c;
    w.radius = r;
    return w;
}

WeightSpec WeightSpec::parse(const std::string& text) {
    auto p1 = text.find(':');
    if (p1 == std::string::npos) throw std::invalid_argument("weight spec: kind:centers:radii");
    auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string::npos) throw std::invalid_argument("weight spec: kind:centers:radii");
    std::string kind = text.substr(0, p1);
    auto c = parse_d4(text.substr(p1 + 1, p2 - p1 - 1));
    auto r = parse_d4(text.substr(p2 + 1));
    for (double ri : r)
        if (ri <= 0.0) throw std::invalid_argument("weight spec: radii must be positive");
    if (kind == "bump") return bump(c, r);
    if (kind == "box") return box(c, r);
    throw std::invalid_argument("weight spec kind must be bump or box");
}

std::string WeightSpec::to_string() const {
    std::string s = kind == WeightKind::smooth_bump ? "bump:" : "box:";
    for (int i = 0; i < 4; ++i) s += (i ? "," : "") + std::to_string(center[i]);
    s += ":";
    for (int i = 0; i < 4; ++i) s += (i ? "," : "") + std::to_string(radius[i]);
    return s;
}

double eval_weight(const WeightSpec& w, const std::array<double, 4>& x) {
    if (w.kind == WeightKind::sharp_box) {
        for (int i = 0; i < 4; ++i)
            if (x[i] < w.lo(i) || x[i] > w.hi(i)) return 0.0;
        return w.amplitude;
    }
    double v = w.amplitude;
    for (int i = 0; i < 4; ++i) {
        double t = (x[i] - w.center[i]) / w.radius[i];
        double d = 1.0 - t * t;
        if (d <= 0.0) return 0.0;
        v *= std::exp(-1.0 / d);
    }
    return v;
}

void check_support(const forms::QuadForm4& f, const WeightSpec& w) {
    bool origin = true;
    for (int i = 0; i < 4; ++i)
        if (w.lo(i) > 0.0 || w.hi(i) < 0.0) origin = false;
    if (origin) throw OriginInSupport("weight support contains the origin");

    // Grid certificate: min |grad F|_inf on the closed box must beat the
    // Lipschitz slack of the grid.
    const int n = 33;
    double row_norm = 0.0;
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += std::abs(double(f.gram2()[i][j]));
        row_norm = std::max(row_norm, s);
    }
    double hmax = 0.0;
    for (int i = 0; i < 4; ++i) hmax = std::max(hmax, (w.hi(i) - w.lo(i)) / (n - 1));
    double min_grad = 1e300;
    std::array<double, 4> x;
    for (int i0 = 0; i0 < n; ++i0) {
        x[0] = w.lo(0) + (w.hi(0) - w.lo(0)) * i0 / (n - 1);
        for (int i1 = 0; i1 < n; ++i1) {
            x[1] = w.lo(1) + (w.hi(1) - w.lo(1)) * i1 / (n - 1);
            for (int i2 = 0; i2 < n; ++i2) {
                x[2] = w.lo(2) + (w.hi(2) - w.lo(2)) * i2 / (n - 1);
                for (int i3 = 0; i3 < n; ++i3) {
                    x[3] = w.lo(3) + (w.hi(3) - w.lo(3)) * i3 / (n - 1);
                    auto g = f.gradient_real(x);
                    double gi = 0.0;
                    for (double v : g) gi = std::max(gi, std::abs(v));
                    min_grad = std::min(min_grad, gi);
                }
            }
        }
    }
    if (min_grad <= row_norm * hmax * 0.5)
        throw VanishingGradient("cannot certify grad F != 0 on the weight support");
}

SingularIntegral singular_integral(const forms::QuadForm4& f, const WeightSpec& w, double tol) {
    struct Key {
        std::array<i64, 10> coeffs;
        int kind;
        std::array<double, 4> c, r;
        double amp;
        auto operator<=>(const Key&) const = default;
    };
    static std::map<Key, SingularIntegral> cache;
    static std::mutex mu;
    Key key{f.coeffs(), int(w.kind), w.center, w.radius, w.amplitude};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    check_support(f, w);
    SingularIntegral out;
    out.shell = shell_estimate(f, w);
    out.surface = surface_estimate(f, w);
    out.value = out.surface;
    double scale = std::max({std::abs(out.surface), std::abs(out.shell), 1e-12});
    out.rel_disagreement = std::abs(out.shell - out.surface) / scale;
    if (out.surface == 0.0 && out.shell == 0.0) out.rel_disagreement = 0.0;
    if (out.rel_disagreement > std::max(tol, 0.01))
        throw QuadratureDisagreement("singular integral: shell and surface methods disagree (shell=" +
                                     std::to_string(out.shell) + ", surface=" + std::to_string(out.surface) +
                                     ")");
    {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(key, out);
    }
    return out;
}

}  // namespace qf4::weights
