#pragma once

// Weight functions w on R^4 (smooth product bumps and sharp boxes) and the
// singular integral sigma_inf(F, w), evaluated two independent ways:
// epsilon-shell averages with Richardson extrapolation, and a surface
// integral of w/|grad F| over {F = 0} solved slice-wise for x4.

#include <array>
#include <stdexcept>
#include <string>

#include "qf4/forms.hpp"

namespace qf4::weights {

enum class WeightKind { smooth_bump, sharp_box };

struct WeightSpec {
    WeightKind kind = WeightKind::smooth_bump;
    std::array<double, 4> center{1.0, 1.0, 1.0, 1.0};
    std::array<double, 4> radius{0.5, 0.5, 0.5, 0.5};
    double amplitude = 1.0;

    double lo(int i) const { return center[i] - radius[i]; }
    double hi(int i) const { return center[i] + radius[i]; }

    static WeightSpec bump(const std::array<double, 4>& c, const std::array<double, 4>& r);
    static WeightSpec box(const std::array<double, 4>& c, const std::array<double, 4>& r);
    // "bump:c1,c2,c3,c4:r1,r2,r3,r4" or "box:..."
    static WeightSpec parse(const std::string& text);
    std::string to_string() const;
};

struct OriginInSupport : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct VanishingGradient : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct QuadratureDisagreement : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double eval_weight(const WeightSpec& w, const std::array<double, 4>& x);

// Verifies 0 is outside the support and that |grad F| stays away from 0 on
// a grid certificate over the support closure. Throws on failure.
void check_support(const forms::QuadForm4& f, const WeightSpec& w);

struct SingularIntegral {
    double value = 0.0;      // surface-integral estimate (primary)
    double shell = 0.0;      // epsilon-shell estimate
    double surface = 0.0;
    double rel_disagreement = 0.0;
};

SingularIntegral singular_integral(const forms::QuadForm4& f, const WeightSpec& w,
                                   double tol = 0.01);

}  // namespace qf4::weights
