#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bziso/metrics.hpp"

namespace bziso {

// Sufficient subdivision counts. All logarithms are base 2; every real-valued
// count is clamped at 0, since a negative value means the condition already
// holds before any subdivision.

/// 1/2 log(N_inf(n-1) |D2 P'| / sigma), unclamped. -inf when |D2 P'| = 0.
double n1_raw(const GeometricConstants& gc);

/// n1_raw clamped to >= 0.
double n1(const GeometricConstants& gc);

/// Smallest integer iteration count strictly above n1_raw, clamped to >= 0.
/// For every i >= this count, B'_dist(i) < sigma.
int n1_threshold(const GeometricConstants& gc);

/// Lower bound sigma - B'_dist(n1_threshold) on the discrete-derivative norms
/// of every subdivided polygon at or past n1_threshold.
double derivative_floor(const GeometricConstants& gc);

/// 2M / ((1 - cos nu) * derivative_floor).
double f_nu(double nu, const GeometricConstants& gc);

/// max{N1, log f(nu)} clamped at 0 (before the ceiling).
double n_of_nu_real(double nu, const GeometricConstants& gc);

/// ceil(n_of_nu_real); 0 for degree <= 2.
int n_of_nu(double nu, const GeometricConstants& gc);

/// 1/2 log(N_inf(n) |D2 P| / r) clamped at 0.
double n_prime(double r, const GeometricConstants& gc);

/// 1/2 log(2 N_inf(n-1) |D2 P'| / ((1 - sqrt(3)/2) sigma)) clamped at 0.
double n2(const GeometricConstants& gc);

/// ceil(N(pi/(n-1))); 0 for degree <= 2.
int iterations_for_simplicity(const GeometricConstants& gc);

/// ceil(max{N(pi/(2(n-1))), N'(r)}); 0 for degree <= 2. Needs gc.pipe_radius.
int iterations_for_homeomorphism(const GeometricConstants& gc);

/// ceil(max{N(pi/(2(n-1))), N'(r/2), N2}); 0 for degree <= 2. Needs gc.pipe_radius.
int iterations_for_isotopy(const GeometricConstants& gc);

struct IterationBounds {
  double N1 = 0.0;
  double N1_raw = 0.0;
  int N1_threshold = 0;
  double derivative_floor = 0.0;
  /// (nu, N(nu)) for each requested nu.
  std::vector<std::pair<double, int>> N_of_nu;
  double N_prime_r = 0.0;
  double N_prime_half_r = 0.0;
  double N2 = 0.0;
  int simplicity = 0;
  double N_hat_real = 0.0;
  int N_hat = 0;
  double N_star_real = 0.0;
  int N_star = 0;
  /// Name of the term achieving each maximum.
  std::string simplicity_term;
  std::string N_hat_term;
  std::string N_star_term;
  /// N2 < N1 + 2, N'(r/2) < N'(r) + 1 and N* < N_hat + 2, before ceilings.
  bool remark_n2_ok = true;
  bool remark_nprime_ok = true;
  bool remark_nstar_ok = true;
};

/// Evaluates every bound. Terms needing the pipe radius stay 0 when it is absent.
IterationBounds compute_bounds(const GeometricConstants& gc, const std::vector<double>& nus = {});

}  // namespace bziso
