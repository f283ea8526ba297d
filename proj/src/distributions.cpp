#include "recourse/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "recourse/error.hpp"

namespace recourse {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10'000;

double gamma_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz's method for the continued fraction of Q(a, x).
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0) || !(x >= 0) || std::isnan(x))
    throw Error(ErrorCode::InvalidArgument, "incomplete gamma needs a > 0 and x >= 0");
}

// 20-point Gauss-Legendre nodes and weights on [-1, 1] (positive half).
constexpr std::array<double, 10> kNodes{
    0.07652652113349734, 0.2277858511416451, 0.37370608871541955, 0.5108670019508271, 0.636053680726515,
    0.7463319064601508,  0.8391169718222188, 0.9122344282513258,  0.9639719272779138, 0.9931285991850949};
constexpr std::array<double, 10> kWeights{
    0.15275338713072578, 0.14917298647260366, 0.14209610931838187, 0.13168863844917653, 0.11819453196151825,
    0.10193011981724026, 0.08327674157670467, 0.06267204833410944, 0.04060142980038622, 0.017614007139153273};

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return 0.0;
  return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_continued_fraction(a, x);
}

double chi_square_sf(double stat, double df) {
  if (!(df > 0)) throw Error(ErrorCode::InvalidArgument, "degrees of freedom must be positive");
  if (std::isnan(stat)) throw Error(ErrorCode::InvalidArgument, "statistic is NaN");
  if (stat <= 0) return 1.0;
  return regularized_gamma_q(df / 2.0, stat / 2.0);
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double studentized_range_sf(double q, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "studentized range needs k >= 2");
  if (std::isnan(q)) throw Error(ErrorCode::InvalidArgument, "q is NaN");
  if (q <= 0) return 1.0;
  // a^(k-1) - b^(k-1) = (a - b) * sum_i a^i b^(k-2-i), with a - b = Phi(z - q)
  // evaluated directly so that tiny tails survive.
  auto integrand = [q, k](double z) {
    const double a = normal_cdf(z);
    const double diff = normal_cdf(z - q);
    // Phi(z) - Phi(z - q) from whichever tail is smaller
    const double b = z - q > 0 ? normal_sf(z - q) - normal_sf(z) : a - diff;
    double sum = 0.0, ai = 1.0;
    for (int i = 0; i <= k - 2; ++i) {
      sum += ai * std::pow(b, k - 2 - i);
      ai *= a;
    }
    return normal_pdf(z) * diff * sum;
  };
  const double lo = -12.0, hi = q + 12.0, width = 0.25;
  const int panels = static_cast<int>(std::ceil((hi - lo) / width));
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * width, mid = a + 0.5 * width, half = 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i)
      s += kWeights[i] * (integrand(mid - half * kNodes[i]) + integrand(mid + half * kNodes[i]));
    total += s * half;
  }
  return std::clamp(k * total, 0.0, 1.0);
}

double studentized_range_critical(double alpha, int k) {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  double lo = 0.0, hi = 1.0;
  while (studentized_range_sf(hi, k) > alpha) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (studentized_range_sf(mid, k) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace recourse
