#include "bziso/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bziso/errors.hpp"

namespace bziso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double half_log2(double arg) { return arg > 0.0 ? 0.5 * std::log2(arg) : -kInf; }

double n_inf_below(int degree) { return degree >= 2 ? n_infinity(degree - 1) : 0.0; }

void require_sigma(const GeometricConstants& gc) {
  if (!(gc.sigma > 0.0)) throw DomainError("sigma must be positive");
}

double require_radius(const GeometricConstants& gc) {
  if (!gc.pipe_radius) throw DomainError("pipe radius required");
  return *gc.pipe_radius;
}

double nu_simple(int n) { return std::numbers::pi / (n - 1); }
double nu_homeo(int n) { return std::numbers::pi / (2.0 * (n - 1)); }

}  // namespace

double n1_raw(const GeometricConstants& gc) {
  require_sigma(gc);
  return half_log2(n_inf_below(gc.degree) * gc.delta2_Pprime.norm / gc.sigma);
}

double n1(const GeometricConstants& gc) { return std::max(0.0, n1_raw(gc)); }

int n1_threshold(const GeometricConstants& gc) {
  const double raw = n1_raw(gc);
  if (raw < 0.0) return 0;
  return static_cast<int>(std::floor(raw)) + 1;
}

double derivative_floor(const GeometricConstants& gc) {
  return gc.sigma - b_prime_dist(n1_threshold(gc), gc.degree, gc.delta2_Pprime.norm);
}

double f_nu(double nu, const GeometricConstants& gc) {
  if (!(nu > 0.0 && nu <= std::numbers::pi)) throw DomainError("nu must lie in (0, pi]");
  require_sigma(gc);
  if (gc.M == 0.0) return 0.0;
  const double floor_value = derivative_floor(gc);
  const double denom = (1.0 - std::cos(nu)) * floor_value;
  if (!(denom > 0.0)) throw InconsistentConstantsError("sigma - B'_dist(N1) is not positive");
  return 2.0 * gc.M / denom;
}

double n_of_nu_real(double nu, const GeometricConstants& gc) {
  const double f = f_nu(nu, gc);
  const double log_f = f > 0.0 ? std::log2(f) : -kInf;
  return std::max({0.0, n1(gc), log_f});
}

int n_of_nu(double nu, const GeometricConstants& gc) {
  const double value = n_of_nu_real(nu, gc);
  if (gc.degree <= 2) return 0;
  return static_cast<int>(std::ceil(value));
}

double n_prime(double r, const GeometricConstants& gc) {
  if (!(r > 0.0)) throw DomainError("pipe radius must be positive");
  return std::max(0.0, half_log2(n_infinity(gc.degree) * gc.delta2_P.norm / r));
}

double n2(const GeometricConstants& gc) {
  require_sigma(gc);
  const double arg = 2.0 * n_inf_below(gc.degree) * gc.delta2_Pprime.norm /
                     ((1.0 - std::sqrt(3.0) / 2.0) * gc.sigma);
  return std::max(0.0, half_log2(arg));
}

int iterations_for_simplicity(const GeometricConstants& gc) {
  if (gc.degree <= 2) return 0;
  return n_of_nu(nu_simple(gc.degree), gc);
}

int iterations_for_homeomorphism(const GeometricConstants& gc) {
  const double r = require_radius(gc);
  if (gc.degree <= 2) return 0;
  const double value = std::max(static_cast<double>(n_of_nu(nu_homeo(gc.degree), gc)),
                                n_prime(r, gc));
  return static_cast<int>(std::ceil(value));
}

int iterations_for_isotopy(const GeometricConstants& gc) {
  const double r = require_radius(gc);
  if (gc.degree <= 2) return 0;
  const double value = std::max({static_cast<double>(n_of_nu(nu_homeo(gc.degree), gc)),
                                 n_prime(r / 2.0, gc), n2(gc)});
  return static_cast<int>(std::ceil(value));
}

IterationBounds compute_bounds(const GeometricConstants& gc, const std::vector<double>& nus) {
  IterationBounds b;
  const int n = gc.degree;
  b.N1_raw = n1_raw(gc);
  b.N1 = n1(gc);
  b.N1_threshold = n1_threshold(gc);
  b.derivative_floor = derivative_floor(gc);
  b.N2 = n2(gc);
  for (double nu : nus) b.N_of_nu.emplace_back(nu, n_of_nu(nu, gc));
  b.remark_n2_ok = b.N2 < b.N1 + 2.0;

  if (n <= 2) {
    b.simplicity_term = b.N_hat_term = b.N_star_term = "degree<=2";
  } else {
    b.simplicity = iterations_for_simplicity(gc);
    const double f = f_nu(nu_simple(n), gc);
    b.simplicity_term = f == 0.0 || b.N1 >= std::log2(f) ? "N1" : "log f(pi/(n-1))";
  }

  if (gc.pipe_radius) {
    const double r = *gc.pipe_radius;
    b.N_prime_r = n_prime(r, gc);
    b.N_prime_half_r = n_prime(r / 2.0, gc);
    b.remark_nprime_ok = b.N_prime_half_r < b.N_prime_r + 1.0;
    if (n > 2) {
      const double angle_term = static_cast<double>(n_of_nu(nu_homeo(n), gc));
      b.N_hat_real = std::max(angle_term, b.N_prime_r);
      b.N_hat_term = angle_term >= b.N_prime_r ? "N(pi/(2(n-1)))" : "N'(r)";
      b.N_star_real = std::max({angle_term, b.N_prime_half_r, b.N2});
      if (b.N_star_real == angle_term) {
        b.N_star_term = "N(pi/(2(n-1)))";
      } else if (b.N_star_real == b.N_prime_half_r) {
        b.N_star_term = "N'(r/2)";
      } else {
        b.N_star_term = "N2";
      }
      b.N_hat = static_cast<int>(std::ceil(b.N_hat_real));
      b.N_star = static_cast<int>(std::ceil(b.N_star_real));
      b.remark_nstar_ok = b.N_star_real < b.N_hat_real + 2.0;
    }
  }
  return b;
}

}  // namespace bziso
