#include "telet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace telet {

WelchBound welch_bound(std::int64_t d, std::int64_t n) {
  if (d < 1 || n < d) throw InvalidInput("welch bound needs 1 <= d <= N");
  if (n == 1) return {0.0, true};
  const double num = static_cast<double>(n - d);
  const double den = static_cast<double>(d) * static_cast<double>(n - 1);
  return {std::sqrt(num / den), false};
}

namespace {

// sqrt(num/den) when the ratio is nonnegative, otherwise 0 (term absent).
double root_term(double num, double den) {
  if (den <= 0.0) return 0.0;
  const double ratio = num / den;
  return ratio > 0.0 ? std::sqrt(ratio) : 0.0;
}

}  // namespace

double composite_bound(std::int64_t d, std::int64_t n, Field field) {
  if (d < 1 || n < d) throw InvalidInput("composite bound needs 1 <= d <= N");
  if (n < 2) throw InvalidInput("composite bound needs N >= 2");
  const double welch = welch_bound(d, n).value;
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);

  if (field == Field::real) {
    return std::max(welch, root_term(3.0 * nn - dd * dd - 2.0 * dd, (dd + 2.0) * (nn - dd)));
  }

  if (n <= d * d) return welch;
  if (d == 1) throw DegenerateInput("complex composite bound undefined for d = 1");
  const double orthoplex = root_term(2.0 * nn - dd * dd - dd, (dd + 1.0) * (nn - dd));
  const double spherical = 1.0 - 2.0 * std::pow(nn, -1.0 / (dd - 1.0));
  if (n <= 2 * (d * d - 1)) return std::max({std::sqrt(1.0 / dd), orthoplex, spherical});
  return std::max(orthoplex, spherical);
}

double recoverability_bound(double mu) {
  if (!(mu >= 0.0) || mu > 1.0) throw InvalidInput("coherence must lie in [0, 1]");
  if (mu == 0.0) return std::numeric_limits<double>::infinity();
  return 0.5 * (1.0 + 1.0 / mu);
}

}  // namespace telet
