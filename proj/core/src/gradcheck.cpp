#include <algorithm>
#include <cmath>

#include "wastegrasp/detmath.hpp"
#include "wastegrasp/error.hpp"

namespace wastegrasp::detmath {

GradCheckResult grad_check(const ScalarFn& f, const GradientFn& gradient, const Eigen::VectorXd& x,
                           double h, double stencil_step) {
  if (!(h > 0.0) || !(stencil_step > 0.0)) {
    throw Error(ErrorCode::kPrecondition, "finite-difference steps must be positive");
  }
  const Eigen::VectorXd analytic = gradient(x);
  if (analytic.size() != x.size()) {
    throw Error(ErrorCode::kDimension, "gradient length differs from the input length");
  }
  const double f0 = f(x);
  GradCheckResult result;
  Eigen::VectorXd probe = x;
  auto at = [&](Eigen::Index i, double offset) {
    probe(i) = x(i) + offset;
    const double v = f(probe);
    probe(i) = x(i);
    return v;
  };
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double fp = at(i, h);
    const double fm = at(i, -h);
    const double central = (fp - fm) / (2.0 * h);
    const double forward = (fp - f0) / h;
    const double backward = (f0 - fm) / h;

    // Fourth-order central stencil: truncation O(s^4) and rounding
    // O(eps / s), so small gradient entries are resolved far better than by
    // the plain central difference whose rounding error is O(eps / h).
    const double s = stencil_step;
    const double numeric = (at(i, -2.0 * s) - 8.0 * at(i, -s) + 8.0 * at(i, s) - at(i, 2.0 * s)) / (12.0 * s);

    // A kink shows up as disagreeing one-sided slopes, or as the wide stencil
    // disagreeing with the narrow difference.
    const double scale = 1e-3 * std::max(1.0, std::abs(central));
    if (std::abs(forward - backward) > scale || std::abs(numeric - central) > scale) {
      result.non_smooth.push_back(static_cast<std::size_t>(i));
      continue;
    }
    const double a = analytic(i);
    const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
    if (err > result.max_relative_error) {
      result.max_relative_error = err;
      result.worst_index = static_cast<std::size_t>(i);
    }
  }
  return result;
}

}  // namespace wastegrasp::detmath
