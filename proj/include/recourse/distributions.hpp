#pragma once

namespace recourse {

/// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x),
/// by series for x < a + 1 and by continued fraction otherwise.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double stat, double df);

double normal_pdf(double z);
double normal_cdf(double z);
/// 1 - normal_cdf(z) without cancellation.
double normal_sf(double z);

/// Upper tail of the studentized range of `k` independent standard normals
/// (infinite degrees of freedom):
///   P(Q > q) = k * int phi(z) [Phi(z)^(k-1) - (Phi(z) - Phi(z - q))^(k-1)] dz.
double studentized_range_sf(double q, int k);

/// Smallest q with studentized_range_sf(q, k) <= alpha.
double studentized_range_critical(double alpha, int k);

}  // namespace recourse
