#include <cmath>

#include "qf4/arith.hpp"
#include "qf4/characters.hpp"
#include "qf4/expsums.hpp"

// The character-coefficient kernel: a_chi(v, c, m, k) and the truncated
// bias sum A(c, m, k) over v | m^inf with Delta | mv.

namespace qf4::characters {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

std::complex<double> unit_phase(i64 num, u64 den) {
    double th = kTau * double(arith::mod_norm(num, i64(den))) / double(den);
    return {std::cos(th), std::sin(th)};
}

}  // namespace

std::complex<double> a_chi(const DirichletCharacter& chi, const forms::QuadForm4& f, u64 v,
                           const forms::Vec4& c, const forms::CongruenceClass& cc) {
    const u64 mv = cc.m * v;
    if (chi.modulus() != mv) throw std::invalid_argument("a_chi: character modulus must equal m*v");
    auto [vu, vv] = arith::crt_split(v, cc.m);
    if (vu != 1) throw std::invalid_argument("a_chi: v must divide m^inf");

    // One prime-power engine per factor of v; S_v(xc; m, k) is the product
    // of the twisted pieces evaluated at the unit x.
    std::vector<expsums::PrimePowerSum> pieces;
    if (v > 1) {
        auto fac = arith::factorize(v);
        for (auto [pw, e] : fac.factors) {
            u64 p = u64(pw);
            u64 ps = 1;
            for (int i = 0; i < e; ++i) ps *= p;
            u64 cof = v / ps;
            i64 cof_inv = arith::mod_inverse(i64(cof % ps), i64(ps));
            forms::Vec4 dir;
            for (int i = 0; i < 4; ++i) dir[i] = arith::mod_norm(i128(cof_inv) * c[i], i64(ps));
            pieces.emplace_back(f, p, e, dir, cc);
        }
    }

    i64 ck = 0;
    for (int i = 0; i < 4; ++i) ck += c[i] * cc.k[i];

    std::complex<double> acc{0.0, 0.0};
    for (u64 x = 1; x <= mv; ++x) {
        if (mv != 1 && arith::gcd_u64(x % mv, mv) != 1) continue;
        std::complex<double> w = chi(i64(x));
        std::complex<double> s{1.0, 0.0};
        for (const auto& pp : pieces) s *= pp.eval(i64(x));
        acc += w * unit_phase(i64(x % mv) * (ck % i64(mv)), mv) * s;
    }
    return acc / double(arith::euler_phi(mv));
}

ATruncated A_truncated(const forms::QuadForm4& f, const forms::CongruenceClass& cc,
                       const forms::Vec4& c, u64 Vmax) {
    if (c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0)
        throw std::invalid_argument("A_truncated: requires c != 0");
    ATruncated out;
    const u64 delta = f.conductor();
    double c_fit = 0.0;
    for (u64 v : smooth_numbers(cc.m, Vmax)) {
        if ((cc.m * v) % delta != 0) continue;
        u64 mv = cc.m * v;
        DirichletCharacter chi = (delta == 1)
                                     ? DirichletCharacter::principal(mv)
                                     : DirichletCharacter::kronecker_char(f.disc_fund()).induced(mv);
        std::complex<double> a = a_chi(chi, f, v, c, cc);
        out.value += a / (double(v) * double(v) * double(v) * double(v));
        out.v_used.push_back(v);
        c_fit = std::max(c_fit, std::abs(a) / (double(v) * double(v) * double(v)));
    }
    // Tail from |a_chi| <= C v^3: C fitted on the computed range.
    double tail = 0.0;
    for (u64 v : smooth_numbers(cc.m, std::max<u64>(Vmax * 4096, 1u << 22))) {
        if (v <= Vmax) continue;
        if ((cc.m * v) % delta != 0) continue;
        tail += 1.0 / double(v);
    }
    out.tail_bound = c_fit * tail;
    return out;
}

}  // namespace qf4::characters
