#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bziso/bounds.hpp"
#include "bziso/errors.hpp"
#include "support/corpus.hpp"

using namespace bziso;
using namespace bziso::testing;

namespace {

constexpr double kPi = std::numbers::pi;

GeometricConstants tuple(int n, double M, double sigma, double d2, double d2p,
                         std::optional<double> r = std::nullopt) {
  GeometricConstants gc;
  gc.degree = n;
  gc.M = M;
  gc.sigma = sigma;
  gc.delta2_P.norm = d2;
  gc.delta2_Pprime.norm = d2p;
  gc.pipe_radius = r;
  return gc;
}

// Plain restatements of the closed forms, written independently of the library.
double ninf(int n) { return std::floor(n / 2.0) * std::ceil(n / 2.0) / (2.0 * n); }

double ref_n1_raw(const GeometricConstants& g) {
  return 0.5 * std::log2(ninf(g.degree - 1) * g.delta2_Pprime.norm / g.sigma);
}

double ref_n_of_nu(double nu, const GeometricConstants& g) {
  const double raw = ref_n1_raw(g);
  const int k = raw < 0 ? 0 : static_cast<int>(std::floor(raw)) + 1;
  const double lambda = g.sigma - std::pow(0.25, k) * ninf(g.degree - 1) * g.delta2_Pprime.norm;
  const double f = 2 * g.M / ((1 - std::cos(nu)) * lambda);
  return std::max({0.0, raw, std::log2(f)});
}

double ref_n_prime(double r, const GeometricConstants& g) {
  return std::max(0.0, 0.5 * std::log2(ninf(g.degree) * g.delta2_P.norm / r));
}

double ref_n2(const GeometricConstants& g) {
  return std::max(0.0, 0.5 * std::log2(2 * ninf(g.degree - 1) * g.delta2_Pprime.norm /
                                       ((1 - std::sqrt(3.0) / 2) * g.sigma)));
}

}  // namespace

TEST_CASE("closed forms match an independent restatement") {
  Rng rng(31);
  for (int k = 0; k < 2000; ++k) {
    const int n = 3 + k % 6;
    const auto g = tuple(n, uniform(rng, 0.01, 50), uniform(rng, 0.01, 10), uniform(rng, 0.01, 30),
                         uniform(rng, 0.01, 60), uniform(rng, 1e-3, 2));
    CHECK(n1_raw(g) == doctest::Approx(ref_n1_raw(g)).epsilon(1e-12));
    CHECK(n1(g) == doctest::Approx(std::max(0.0, ref_n1_raw(g))).epsilon(1e-12));
    for (double nu : {kPi / (n - 1), kPi / (2.0 * (n - 1)), 0.3}) {
      CHECK(n_of_nu_real(nu, g) == doctest::Approx(ref_n_of_nu(nu, g)).epsilon(1e-12));
      CHECK(n_of_nu(nu, g) == static_cast<int>(std::ceil(ref_n_of_nu(nu, g))));
    }
    CHECK(n_prime(*g.pipe_radius, g) == doctest::Approx(ref_n_prime(*g.pipe_radius, g)).epsilon(1e-12));
    CHECK(n2(g) == doctest::Approx(ref_n2(g)).epsilon(1e-12));

    const double simp = std::ceil(ref_n_of_nu(kPi / (n - 1), g));
    const double hat = std::ceil(std::max(ref_n_of_nu(kPi / (2.0 * (n - 1)), g),
                                          ref_n_prime(*g.pipe_radius, g)));
    const double star = std::ceil(std::max({ref_n_of_nu(kPi / (2.0 * (n - 1)), g),
                                            ref_n_prime(*g.pipe_radius / 2, g), ref_n2(g)}));
    CHECK(iterations_for_simplicity(g) == simp);
    CHECK(iterations_for_homeomorphism(g) == hat);
    CHECK(iterations_for_isotopy(g) == star);
  }
}

TEST_CASE("derivative floor is positive at the integer threshold") {
  Rng rng(32);
  for (int k = 0; k < 1000; ++k) {
    const auto g = tuple(3 + k % 5, 1.0, uniform(rng, 1e-3, 10), 1.0, uniform(rng, 0, 100));
    const int i = n1_threshold(g);
    CHECK(i >= n1(g));
    CHECK(derivative_floor(g) > 0.0);
    CHECK(b_prime_dist(i, g.degree, g.delta2_Pprime.norm) < g.sigma);
    if (i > 0) CHECK(b_prime_dist(i - 1, g.degree, g.delta2_Pprime.norm) >= g.sigma);
  }
}

TEST_CASE("bounds vanish for straight lines and low degree") {
  for (int n = 1; n <= 6; ++n) {
    const auto gc = compute_constants(straight_line(n), 0.25);
    const auto b = compute_bounds(gc, {0.5});
    CHECK(b.N1 == 0.0);
    CHECK(b.N2 == 0.0);
    CHECK(b.N_prime_r == 0.0);
    CHECK(b.simplicity == 0);
    CHECK(b.N_hat == 0);
    CHECK(b.N_star == 0);
    CHECK(b.N_of_nu.front().second == 0);
  }
  const auto quad = tuple(2, 4.0, 2.0, 2.0, 0.0, 0.01);
  CHECK(iterations_for_simplicity(quad) == 0);
  CHECK(iterations_for_homeomorphism(quad) == 0);
  CHECK(iterations_for_isotopy(quad) == 0);
  CHECK(n_of_nu(0.1, quad) == 0);
}

TEST_CASE("halving the radius adds exactly one half") {
  const auto g = tuple(4, 3.0, 1.0, 5.0, 7.0);
  for (double r : {1e-4, 1e-2, 0.1}) {
    CHECK(n_prime(r / 2, g) - n_prime(r, g) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("remark inequalities hold on random tuples") {
  Rng rng(33);
  for (int k = 0; k < 10000; ++k) {
    const auto g = tuple(3 + k % 8, uniform(rng, 1e-3, 100), uniform(rng, 1e-4, 100),
                         uniform(rng, 0, 100), uniform(rng, 0, 100), uniform(rng, 1e-4, 10));
    const auto b = compute_bounds(g);
    CHECK(b.remark_n2_ok);
    CHECK(b.remark_nprime_ok);
    CHECK(b.remark_nstar_ok);
    CHECK(b.N2 < b.N1 + 2.0 + 1e-12);
    CHECK(b.N_prime_half_r < b.N_prime_r + 1.0 + 1e-12);
  }
}

TEST_CASE("monotonicity") {
  const auto base = tuple(5, 3.0, 1.0, 5.0, 7.0, 0.1);
  auto bigger_M = base;
  bigger_M.M = 30.0;
  CHECK(n_of_nu_real(0.4, bigger_M) >= n_of_nu_real(0.4, base));
  auto smaller_sigma = base;
  smaller_sigma.sigma = 0.1;
  CHECK(n2(smaller_sigma) >= n2(base));
  CHECK(n_of_nu_real(0.2, base) >= n_of_nu_real(0.4, base));
  CHECK(n_prime(0.01, base) >= n_prime(0.1, base));
}

TEST_CASE("argument checks") {
  const auto g = tuple(4, 3.0, 1.0, 5.0, 7.0);
  CHECK_THROWS_AS(f_nu(0.0, g), DomainError);
  CHECK_THROWS_AS(f_nu(4.0, g), DomainError);
  CHECK_THROWS_AS(n_prime(0.0, g), DomainError);
  CHECK_THROWS_AS(iterations_for_homeomorphism(g), DomainError);
  CHECK_THROWS_AS(n1_raw(tuple(4, 1, 0.0, 1, 1)), DomainError);
  CHECK(f_nu(1.0, tuple(4, 0.0, 1.0, 1.0, 1.0)) == 0.0);
}

TEST_CASE("compute_bounds reports the achieving terms") {
  const auto g = tuple(4, 3.0, 1.0, 5.0, 7.0, 1e-6);
  const auto b = compute_bounds(g, {kPi / 3});
  CHECK(b.N_hat_term == "N'(r)");
  CHECK(b.N_star_term == "N'(r/2)");
  CHECK(b.N_hat == static_cast<int>(std::ceil(b.N_prime_r)));
  REQUIRE(b.N_of_nu.size() == 1);
  CHECK(b.N_of_nu[0].second == n_of_nu(kPi / 3, g));
}
