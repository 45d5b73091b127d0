#include "ncsched/primal_dual.hpp"

#include <cmath>

namespace ncsched {

Theta compute_theta(double c) {
  if (!(c > 1.0) || !std::isfinite(c))
    throw RejectedInput("theta needs a finite transmission cost greater than one");
  Theta th;
  th.c = c;
  th.floor_c = static_cast<Count>(std::floor(c));
  th.value = std::expm1(static_cast<double>(th.floor_c) * std::log1p(1.0 / c));
  if (th.floor_c <= kExactThetaMaxExponent) {
    Rational growth = 1 + 1 / to_rational(c);
    Rational p = 1;
    for (Count k = 0; k < th.floor_c; ++k) p *= growth;
    th.exact = p - 1;
    th.value = to_double(*th.exact);
  }
  return th;
}

double competitive_bound(double c) { return 1.0 + 1.0 / compute_theta(c).value; }

Rational competitive_bound_exact(double c) {
  Theta th = compute_theta(c);
  if (!th.exact) throw RejectedInput("cost too large for an exact bound");
  return 1 + 1 / *th.exact;
}

}  // namespace ncsched
