#pragma once

// Exact enumeration of integer zeros of F in weight-support boxes under a
// congruence condition, with a generic quadratic-in-x4 solver and a
// divisor-pair fast path for forms of the shape Q(x1,x2) - x3 x4.
// Weighted and primitive counts plus the Moebius relations between them.

#include <functional>
#include <string>
#include <vector>

#include "qf4/forms.hpp"
#include "qf4/weights.hpp"

namespace qf4::counting {

using forms::CongruenceClass;
using forms::QuadForm4;
using forms::Vec4;

struct PatternMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BoxTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Solution {
    Vec4 x{0, 0, 0, 0};
    i64 gcd = 0;
};

using SolutionSink = std::function<void(const Solution&)>;

enum class Engine { automatic, generic, fastpath };

bool fastpath_applicable(const QuadForm4& f);

// Stream every x with F(x) = 0, x = k mod m, and x/P inside the support
// box of w, in a deterministic order (lexicographic in the iterated
// coordinates). Solutions are emitted exactly once.
void enumerate(const QuadForm4& f, const CongruenceClass& cc, double P,
               const weights::WeightSpec& w, const SolutionSink& sink);

void divisor_fastpath(const QuadForm4& f, const CongruenceClass& cc, double P,
                      const weights::WeightSpec& w, const SolutionSink& sink);

std::vector<Solution> collect(const QuadForm4& f, const CongruenceClass& cc, double P,
                              const weights::WeightSpec& w, Engine engine = Engine::automatic);

// N_{F,w}(P; m, k) = sum w(x/P) over the stream.
double count_weighted(const QuadForm4& f, const CongruenceClass& cc, double P,
                      const weights::WeightSpec& w, Engine engine = Engine::automatic);

// Primitive solutions only (gcd of the coordinates is 1).
double count_primitive(const QuadForm4& f, const CongruenceClass& cc, double P,
                       const weights::WeightSpec& w, Engine engine = Engine::automatic);

// Both sides of N^prim(P,m,k) = sum_{(d,m)=1} mu(d) N(P/d, m, dbar k).
std::pair<double, double> moebius_check_prim(const QuadForm4& f, const CongruenceClass& cc, double P,
                                             const weights::WeightSpec& w,
                                             Engine engine = Engine::automatic);

// Both sides of N(P,m,k) = sum_{(d,m)=1} N^prim(P/d, m, dbar k).
std::pair<double, double> moebius_check_normal(const QuadForm4& f, const CongruenceClass& cc,
                                               double P, const weights::WeightSpec& w,
                                               Engine engine = Engine::automatic);

// CSV dump, header x1,x2,x3,x4,gcd.
void dump_csv(const std::string& path, const std::vector<Solution>& sols);

}  // namespace qf4::counting
