#include "qf4/forms.hpp"

#include <numeric>
#include <sstream>

namespace qf4::forms {

namespace {

// Determinant and adjugate of a 4x4 integer matrix via cofactors.
i128 det3(i128 a, i128 b, i128 c, i128 d, i128 e, i128 f, i128 g, i128 h, i128 i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

std::vector<i64> parse_int_list(const std::string& text) {
    std::vector<i64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        i64 v = std::stoll(item, &pos);
        out.push_back(v);
    }
    return out;
}

}  // namespace

QuadForm4 QuadForm4::from_coeffs(const std::array<i64, 10>& coeffs) {
    QuadForm4 f;
    f.coeffs_ = coeffs;
    // Coefficient index for a_ij, i <= j.
    auto idx = [](int i, int j) {
        static const int table[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
        return table[i][j];
    };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) f.gram2_[i][j] = (i == j) ? 2 * coeffs[idx(i, i)] : coeffs[idx(i, j)];

    const auto& g = f.gram2_;
    // Adjugate: adj[j][i] = cofactor C_ij.
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            i128 minor[9];
            int t = 0;
            for (int r = 0; r < 4; ++r) {
                if (r == i) continue;
                for (int c = 0; c < 4; ++c) {
                    if (c == j) continue;
                    minor[t++] = g[r][c];
                }
            }
            i128 m = det3(minor[0], minor[1], minor[2], minor[3], minor[4], minor[5], minor[6], minor[7],
                          minor[8]);
            f.adj_[j][i] = ((i + j) % 2 == 0) ? m : -m;
        }
    }
    f.det2m_ = 0;
    for (int j = 0; j < 4; ++j) f.det2m_ += i128(g[0][j]) * f.adj_[j][0];
    if (f.det2m_ == 0) throw SingularFormError("quadratic form is singular (det 2M = 0)");

    // Fundamental discriminant of the square class of det(2M):
    // squarefree kernel D, then D or 4D so the result is 0 or 1 mod 4.
    u128 ad = f.det2m_ < 0 ? u128(-f.det2m_) : u128(f.det2m_);
    auto fac = arith::factorize(ad);
    i64 kernel = f.det2m_ < 0 ? -1 : 1;
    for (auto [p, e] : fac.factors)
        if (e % 2 == 1) kernel *= i64(p);
    if (kernel == 1) {
        f.disc_fund_ = 1;
        f.conductor_ = 1;
    } else {
        f.disc_fund_ = arith::mod_norm(kernel, 4) == 1 ? kernel : 4 * kernel;
        f.conductor_ = u64(f.disc_fund_ < 0 ? -f.disc_fund_ : f.disc_fund_);
    }
    return f;
}

QuadForm4 QuadForm4::parse(const std::string& text) {
    auto vals = parse_int_list(text);
    if (vals.size() != 10) throw std::invalid_argument("form requires 10 comma-separated coefficients");
    std::array<i64, 10> c;
    std::copy(vals.begin(), vals.end(), c.begin());
    return from_coeffs(c);
}

int QuadForm4::chi(i64 n) const {
    if (disc_fund_ == 1) return 1;  // trivial character mod 1
    return arith::kronecker(disc_fund_, n);
}

i128 QuadForm4::evaluate(const Vec4& x) const {
    std::array<i128, 4> xx{x[0], x[1], x[2], x[3]};
    return evaluate(xx);
}

i128 QuadForm4::evaluate(const std::array<i128, 4>& x) const {
    const i64* a = coeffs_.data();
    return a[0] * x[0] * x[0] + a[1] * x[0] * x[1] + a[2] * x[0] * x[2] + a[3] * x[0] * x[3] +
           a[4] * x[1] * x[1] + a[5] * x[1] * x[2] + a[6] * x[1] * x[3] + a[7] * x[2] * x[2] +
           a[8] * x[2] * x[3] + a[9] * x[3] * x[3];
}

std::array<i128, 4> QuadForm4::gradient(const Vec4& x) const {
    std::array<i128, 4> g{};
    for (int i = 0; i < 4; ++i) {
        i128 s = 0;
        for (int j = 0; j < 4; ++j) s += i128(gram2_[i][j]) * x[j];
        g[i] = s;
    }
    return g;
}

double QuadForm4::evaluate_real(const std::array<double, 4>& x) const {
    const i64* a = coeffs_.data();
    return a[0] * x[0] * x[0] + a[1] * x[0] * x[1] + a[2] * x[0] * x[2] + a[3] * x[0] * x[3] +
           a[4] * x[1] * x[1] + a[5] * x[1] * x[2] + a[6] * x[1] * x[3] + a[7] * x[2] * x[2] +
           a[8] * x[2] * x[3] + a[9] * x[3] * x[3];
}

std::array<double, 4> QuadForm4::gradient_real(const std::array<double, 4>& x) const {
    std::array<double, 4> g{};
    for (int i = 0; i < 4; ++i) {
        double s = 0;
        for (int j = 0; j < 4; ++j) s += double(gram2_[i][j]) * x[j];
        g[i] = s;
    }
    return g;
}

i128 QuadForm4::adjoint_eval(const Vec4& c) const {
    i128 s = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) s += adj_[i][j] * i128(c[i]) * i128(c[j]);
    return s;
}

CongruenceClass validate_congruence(const QuadForm4& f, u64 m, const Vec4& k) {
    if (m == 0) throw std::invalid_argument("congruence modulus must be >= 1");
    Vec4 kk;
    i64 g = i64(m);
    for (int i = 0; i < 4; ++i) {
        kk[i] = arith::mod_norm(k[i], i64(m));
        g = arith::gcd_i64(g, kk[i]);
    }
    if (g != 1) throw GcdFailure("congruence class requires gcd(m, k) = 1");
    if (arith::mod_norm(f.evaluate(kk), i64(m)) != 0)
        throw ResidueFailure("congruence class requires F(k) = 0 mod m");
    return CongruenceClass{m, kk};
}

Vec4 parse_vec4(const std::string& text) {
    std::stringstream ss(text);
    std::string item;
    Vec4 v{};
    int n = 0;
    while (std::getline(ss, item, ',')) {
        if (n >= 4) throw std::invalid_argument("vector requires exactly 4 components");
        v[n++] = std::stoll(item);
    }
    if (n != 4) throw std::invalid_argument("vector requires exactly 4 components");
    return v;
}

std::string format_vec4(const Vec4& v) {
    std::string s;
    for (int i = 0; i < 4; ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace qf4::forms
