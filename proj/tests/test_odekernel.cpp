#include "doctest.h"

#include "affc/odekernel.hpp"
#include "affc/specialfns.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace affc;

namespace {
const double kSinh1 = 1.17520119364380145688;

ScalarFunction constant_fn(double c) {
  return [c](double) { return c; };
}

// Random polynomial coefficient with |a(s)| <= 5 on [0, 1].
ScalarFunction random_poly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0 / 3.0, 5.0 / 3.0);
  const double c0 = u(rng), c1 = u(rng), c2 = u(rng);
  return [=](double s) { return c0 + s * (c1 + s * c2); };
}
}  // namespace

TEST_CASE("solve_ivp closed forms") {
  const DomainInterval I(0, 3);
  {
    auto op = LinearOperator::constant({0, 0, 0}, I);
    auto y = solve_ivp(op, constant_fn(0.5), 0.0, Eigen::Vector3d::Zero());
    for (double s : {0.5, 1.7, 3.0}) CHECK(std::abs(y(s) - s * s * s / 12) <= 1e-10);
  }
  {
    auto op = LinearOperator::constant({1, 0}, I);
    auto y = solve_ivp(op, {}, 0.0, Eigen::Vector2d(0, 1));
    for (double s : {0.3, 1.5, 3.0}) {
      CHECK(std::abs(y(s) - std::sin(s)) <= 1e-9);
      CHECK(std::abs(y(s) - sk(1.0, s)) <= 1e-9);
    }
  }
  {
    auto op = LinearOperator::constant({0, -1, 0}, I);
    auto y = solve_ivp(op, {}, 0.0, Eigen::Vector3d(0, 1, 0));
    CHECK(std::abs(y(1.0) - kSinh1) <= 1e-9);
    CHECK(std::abs(y(1.0) - xbar(-1.0, 1.0)) <= 1e-9);
  }
}

TEST_CASE("solve_ivp runs both ways from an interior point") {
  auto op = LinearOperator::constant({1, 0}, DomainInterval(-2, 2));
  auto y = solve_ivp(op, {}, 0.5, Eigen::Vector2d(std::sin(0.5), std::cos(0.5)));
  for (double s : {-2.0, -1.0, 0.5, 1.9}) {
    CHECK(std::abs(y(s) - std::sin(s)) <= 1e-9);
    CHECK(std::abs(y.jet(s)(1) - std::cos(s)) <= 1e-9);
  }
  CHECK_THROWS_AS(y(2.5), DomainError);
  CHECK_THROWS_AS(solve_ivp(op, {}, 3.0, Eigen::Vector2d(0, 1)), DomainError);
  CHECK_THROWS_AS(solve_ivp(op, {}, 0.0, Eigen::Vector3d(0, 1, 0)), ArgumentError);
}

TEST_CASE("solve_ivp residual") {
  const DomainInterval I(0, 2);
  ScalarFunction a0 = [](double s) { return std::cos(3 * s); };
  ScalarFunction a1 = [](double s) { return 1 + s; };
  ScalarFunction f = [](double s) { return std::exp(-s); };
  LinearOperator op({a0, a1}, I);
  auto y = solve_ivp(op, f, 0.0, Eigen::Vector2d(1, -1));
  const double h = 1e-4;
  for (double s = 0.1; s < 1.95; s += 0.1) {
    const double ypp = (y.jet(s + h)(1) - y.jet(s - h)(1)) / (2 * h);
    const double res = ypp + a1(s) * y.jet(s)(1) + a0(s) * y(s) - f(s);
    CHECK(std::abs(res) <= 1e-6 * (1 + std::abs(f(s))));
  }
}

TEST_CASE("solve_ivp reports blow-up") {
  // y' = y² style growth through a linear system with a huge coefficient.
  auto op = LinearOperator::constant({-1e6}, DomainInterval(0, 10));
  CHECK_THROWS_AS(solve_ivp(op, {}, 0.0, Eigen::VectorXd::Ones(1)), IntegrationError);
}

TEST_CASE("kernel closed forms") {
  const DomainInterval I(-1, 3);
  for (double k : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
    auto P = lagrange_kernel(LinearOperator::constant({k, 0}, I));
    auto Q = lagrange_kernel(LinearOperator::constant({0, k, 0}, I));
    for (double r : {-1.0, 0.0, 1.2})
      for (double s : {-0.5, 0.7, 2.9}) {
        CHECK(std::abs(P(s, r) - sk(k, s - r)) <= 1e-8 * std::max(1.0, std::abs(sk(k, s - r))));
        const double q = k == 0 ? (s - r) * (s - r) / 2 : (1 - ck(k, s - r)) / k;
        CHECK(std::abs(Q(s, r) - q) <= 1e-8 * std::max(1.0, std::abs(q)));
      }
  }
}

TEST_CASE("kernel jet at the diagonal and caching") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ur(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    std::vector<ScalarFunction> a;
    for (int j = 0; j < n; ++j) a.push_back(random_poly(rng));
    KernelFn K(LinearOperator(a, DomainInterval(0, 1)), 1e-10);
    const double r = ur(rng);
    const Eigen::VectorXd jet = K.jet(r, r);
    for (int j = 0; j < n; ++j) CHECK(std::abs(jet(j) - (j == n - 1 ? 1.0 : 0.0)) <= 1e-8);
    K(0.9, r);
    KernelFn copy = K;
    copy(0.1, r);
    CHECK(K.cached_columns() == 1);
  }
}

TEST_CASE("kernel solution matches the direct solve") {
  {
    auto op = LinearOperator::constant({0, 0, 0}, DomainInterval(0, 2));
    auto y = solve_via_kernel(op, constant_fn(0.5), 0.0);
    for (double s : {0.4, 1.0, 2.0}) CHECK(std::abs(y(s) - s * s * s / 12) <= 1e-9);
    auto z = solve_via_kernel(op, {}, 0.0);
    CHECK(z(1.3) == 0.0);
  }
  {
    auto op = LinearOperator::constant({0, 1, 0}, DomainInterval(0, 3));
    auto y = solve_via_kernel(op, constant_fn(0.5), 0.0);
    for (double s : {0.5, 2.0, 3.0}) {
      CHECK(std::abs(y(s) - (s - std::sin(s)) / 2) <= 1e-9);
      CHECK(std::abs(y(s) - abar(1.0, s)) <= 1e-9);
    }
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<ScalarFunction> a;
    for (int j = 0; j < n; ++j) a.push_back(random_poly(rng));
    const double f0 = u(rng), f1 = u(rng), w = 3 * u(rng);
    ScalarFunction f = [=](double s) { return f0 + f1 * std::sin(w * s); };
    LinearOperator op(a, DomainInterval(0, 1));
    auto direct = solve_ivp(op, f, 0.0, Eigen::VectorXd::Zero(n));
    auto viak = solve_via_kernel(op, f, 0.0);
    double sup = 0;
    for (int i = 0; i <= 20; ++i) sup = std::max(sup, std::abs(direct(i / 20.0) - viak(i / 20.0)));
    CHECK(sup <= 1e-6);
  }
}

TEST_CASE("forward positivity") {
  for (double k : {-3.0, 0.0, 2.0, 10.0}) {
    auto rep = check_forward_positive(LinearOperator::constant({0, k, 0}, DomainInterval(0, 4)),
                                      DomainInterval(0, 4), 41);
    CHECK(rep.positive());
  }
  {
    // Length 4 with k = 1 > (π/4)²: sin turns negative past π.
    auto rep = check_forward_positive(LinearOperator::constant({1, 0}, DomainInterval(0, 4)),
                                      DomainInterval(0, 4), 41);
    CHECK_FALSE(rep.positive());
    CHECK(rep.min_value < -1e-10);
    CHECK(rep.min_s - rep.min_r > std::numbers::pi);
  }
  {
    auto rep = check_forward_positive(LinearOperator::constant({1, 0}, DomainInterval(0, 3)),
                                      DomainInterval(0, 3), 41);
    CHECK(rep.positive());
  }
  {
    ScalarFunction kappa = [](double s) { return -1 + std::sin(s) / 2; };
    auto op = LinearOperator::single_term(3, 1, kappa, DomainInterval(0, 5));
    CHECK(check_forward_positive(op, DomainInterval(0, 5), 51).positive());
  }
  CHECK_THROWS_AS(check_forward_positive(LinearOperator::constant({1, 0}, DomainInterval(0, 1)),
                                         DomainInterval(0, 2), 11),
                  DomainError);
}

TEST_CASE("Sturm: no sign change below the first conjugate point") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = 0.0, b = 0.5 + 2.5 * u(rng);
    const double k0 = std::pow(std::numbers::pi / (b - a), 2) * u(rng);
    const double c = k0 * u(rng), amp = (k0 + 3) * u(rng), w = 4 * u(rng);
    // κ(s) = c − amp·sin²(ws) <= k0
    ScalarFunction kappa = [=](double s) { return c - amp * std::pow(std::sin(w * s), 2); };
    auto op = LinearOperator::single_term(2, 0, kappa, DomainInterval(a, b));
    auto y = solve_ivp(op, {}, a, Eigen::Vector2d(0, 1));
    bool sign_change = false;
    for (int i = 1; i < 400; ++i)
      if (y(a + (b - a) * i / 400.0) <= 0) sign_change = true;
    CHECK_FALSE(sign_change);
  }
}

TEST_CASE("comparison of solutions") {
  ComparisonOptions opt;
  opt.positivity_grid = 51;
  {
    auto rep = compare_solutions(constant_fn(-1), constant_fn(0), 3, 1, constant_fn(0.5),
                                 Eigen::Vector3d::Zero(), DomainInterval(0, 2), opt);
    CHECK(rep.holds());
    CHECK(rep.hypotheses_hold());
    CHECK(std::abs(rep.rhs - abar(-1.0, rep.witness.value())) <= 1e-8);
  }
  {
    auto rep = compare_solutions(constant_fn(0), constant_fn(1), 2, 0, {},
                                 Eigen::Vector2d(0, 1), DomainInterval(0, std::numbers::pi), opt);
    CHECK(rep.holds());
  }
  {
    ScalarFunction k = [](double s) { return -0.5 - s; };
    auto rep = compare_solutions(k, k, 3, 1, constant_fn(0.5), Eigen::Vector3d::Zero(),
                                 DomainInterval(0, 2), opt);
    CHECK(rep.holds());
    CHECK(rep.equality);
  }
  {
    // Hypothesis (a) fails: y'' + 2y has a sign-changing kernel on [0, 4].
    auto rep = compare_solutions(constant_fn(0), constant_fn(2), 2, 0, {},
                                 Eigen::Vector2d(0, 1), DomainInterval(0, 4), opt);
    CHECK(rep.verdict == Verdict::hypotheses_failed);
    CHECK_FALSE(rep.hypotheses[0].checked);
  }
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  opt.positivity_grid = 21;
  opt.sample_grid = 101;
  for (int trial = 0; trial < 100; ++trial) {
    const double c = -3 * u(rng), d = 2 * u(rng), w = 3 * u(rng);
    ScalarFunction kbar = [=](double s) { return c * (1 + 0.5 * std::sin(w * s)); };
    ScalarFunction kap = [=](double s) { return kbar(s) - d * (1 + std::cos(w * s)); };
    auto rep = compare_solutions(kap, kbar, 3, 1, constant_fn(0.5), Eigen::Vector3d::Zero(),
                                 DomainInterval(0, 1.5), opt);
    CHECK(rep.holds());
  }
}

TEST_CASE("positive almost everywhere") {
  std::vector<double> v(200, 1.0);
  CHECK(positive_almost_everywhere(v, 1e-9));
  v[3] = 0.0;
  v[4] = 0.0;
  CHECK(positive_almost_everywhere(v, 1e-9));
  v[5] = v[6] = 0.0;
  CHECK_FALSE(positive_almost_everywhere(v, 1e-9));
  v.assign(10, 1.0);
  v[1] = -1e-6;
  CHECK_FALSE(positive_almost_everywhere(v, 1e-9));
  CHECK_FALSE(positive_almost_everywhere({}, 1e-9));
}
