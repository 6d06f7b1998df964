#include "modortho/families.hpp"
#include "modortho/quadrature.hpp"

#include <doctest.h>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <vector>

using namespace modortho;
using rational = boost::multiprecision::cpp_rational;

namespace {

// Exact recurrence-coefficient oracle: normalized moments (rational) feed a
// rational Stieltjes / Gram-Schmidt process; entirely independent of the
// closed-form coefficient formulas in the library.
struct MonicRecurrence {
  std::vector<rational> alpha;  // diagonal
  std::vector<rational> b;      // monic beta^2, b[k] pairs pi_k with pi_{k-1}
};

MonicRecurrence stieltjes(const std::vector<rational>& moments, int nsteps) {
  auto inner = [&](const std::vector<rational>& p, const std::vector<rational>& q) {
    rational s = 0;
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = 0; j < q.size(); ++j) s += p[i] * q[j] * moments[i + j];
    return s;
  };
  auto shift = [](const std::vector<rational>& p) {  // multiply by x
    std::vector<rational> q(p.size() + 1, rational(0));
    for (size_t i = 0; i < p.size(); ++i) q[i + 1] = p[i];
    return q;
  };
  MonicRecurrence out;
  std::vector<rational> prev, cur = {rational(1)};
  rational norm_prev = 0, norm_cur = inner(cur, cur);
  for (int k = 0; k < nsteps; ++k) {
    std::vector<rational> xc = shift(cur);
    rational a = inner(xc, cur) / norm_cur;
    out.alpha.push_back(a);
    rational bk = (k == 0) ? rational(0) : norm_cur / norm_prev;
    if (k > 0) out.b.push_back(bk);
    std::vector<rational> next = xc;
    for (size_t i = 0; i < cur.size(); ++i) next[i] -= a * cur[i];
    for (size_t i = 0; i < prev.size(); ++i) next[i] -= bk * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
    norm_prev = norm_cur;
    norm_cur = inner(cur, cur);
  }
  out.b.push_back(norm_cur / norm_prev);
  return out;
}

// Normalized moments of (1-x)^a (1+x)^b on [-1, 1] from integration by parts
// of (x^k sigma w)' with sigma = 1 - x^2, tau = (b-a) - (a+b+2) x.
std::vector<rational> jacobi_moments(rational a, rational b, int count) {
  std::vector<rational> m = {rational(1), (b - a) / (a + b + 2)};
  for (int k = 1; m.size() < size_t(count); ++k)
    m.push_back((k * m[k - 1] + (b - a) * m[k]) / (k + a + b + 2));
  return m;
}

std::vector<rational> laguerre_moments(rational a, int count) {
  std::vector<rational> m = {rational(1)};
  for (int k = 1; k < count; ++k) m.push_back(m[k - 1] * (a + k));
  return m;
}

std::vector<rational> hermite_moments(int count) {
  // m_{2k} / m_0 = (2k-1)!! / 2^k for exp(-x^2); odd moments vanish.
  std::vector<rational> m = {rational(1)};
  for (int k = 1; k < count; ++k)
    m.push_back((k % 2 == 0) ? m[k - 2] * rational(k - 1, 2) : rational(0));
  return m;
}

void check_against_oracle(const OrthonormalFamily& fam,
                          const MonicRecurrence& mr, int depth) {
  for (int k = 0; k < depth; ++k) {
    const double alpha = static_cast<double>(mr.alpha[k]);
    CHECK(fam.diag(k) == doctest::Approx(alpha).epsilon(1e-13));
    const double beta2 = static_cast<double>(mr.b[k]);
    const double off = fam.offdiag(k);
    CHECK(off * off == doctest::Approx(beta2).epsilon(1e-13));
  }
}

double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("closed-form Jacobi matrix entries") {
  OrthonormalFamily u = OrthonormalFamily::chebyshev_u();
  for (int k = 0; k < 6; ++k) {
    CHECK(u.diag(k) == 0.0);
    CHECK(u.offdiag(k) == doctest::Approx(0.5));
  }
  OrthonormalFamily t = OrthonormalFamily::chebyshev_t();
  CHECK(t.offdiag(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(t.offdiag(1) == doctest::Approx(0.5));

  OrthonormalFamily lag = OrthonormalFamily::laguerre(0.0);
  CHECK(lag.diag(0) == doctest::Approx(1.0));
  CHECK(lag.diag(1) == doctest::Approx(3.0));
  CHECK(lag.diag(2) == doctest::Approx(5.0));
  CHECK(lag.offdiag(0) == doctest::Approx(-1.0));
  CHECK(lag.offdiag(1) == doctest::Approx(-2.0));

  OrthonormalFamily leg = OrthonormalFamily::legendre();
  CHECK(leg.diag(3) == 0.0);
  CHECK(leg.offdiag(0) == doctest::Approx(1.0 / std::sqrt(3.0)));

  OrthonormalFamily h = OrthonormalFamily::hermite();
  CHECK(h.offdiag(3) == doctest::Approx(std::sqrt(2.0)));
  CHECK(h.mass == doctest::Approx(std::sqrt(M_PI)));
}

TEST_CASE("recurrence coefficients match the exact rational moment oracle") {
  const int depth = 12;
  const int nm = 2 * depth + 4;

  SUBCASE("legendre") {
    check_against_oracle(OrthonormalFamily::legendre(),
                         stieltjes(jacobi_moments(0, 0, nm), depth), depth);
  }
  SUBCASE("chebyshev (both kinds as Jacobi measures)") {
    check_against_oracle(OrthonormalFamily::chebyshev_t(),
                         stieltjes(jacobi_moments(rational(-1, 2), rational(-1, 2), nm), depth),
                         depth);
    check_against_oracle(OrthonormalFamily::chebyshev_u(),
                         stieltjes(jacobi_moments(rational(1, 2), rational(1, 2), nm), depth),
                         depth);
  }
  SUBCASE("jacobi, including the parameter pair with a + b = -1") {
    check_against_oracle(OrthonormalFamily::jacobi(-0.25, -0.75),
                         stieltjes(jacobi_moments(rational(-1, 4), rational(-3, 4), nm), depth),
                         depth);
    check_against_oracle(OrthonormalFamily::jacobi(1.5, 0.5),
                         stieltjes(jacobi_moments(rational(3, 2), rational(1, 2), nm), depth),
                         depth);
    check_against_oracle(OrthonormalFamily::jacobi(1.0, 0.0),
                         stieltjes(jacobi_moments(1, 0, nm), depth), depth);
  }
  SUBCASE("laguerre") {
    check_against_oracle(OrthonormalFamily::laguerre(0.25),
                         stieltjes(laguerre_moments(rational(1, 4), nm), depth), depth);
    check_against_oracle(OrthonormalFamily::laguerre(2.0),
                         stieltjes(laguerre_moments(2, nm), depth), depth);
  }
  SUBCASE("hermite") {
    check_against_oracle(OrthonormalFamily::hermite(),
                         stieltjes(hermite_moments(nm), depth), depth);
  }
}

TEST_CASE("masses") {
  CHECK(OrthonormalFamily::legendre().mass == doctest::Approx(2.0));
  CHECK(OrthonormalFamily::chebyshev_t().mass == doctest::Approx(M_PI));
  CHECK(OrthonormalFamily::chebyshev_u().mass == doctest::Approx(M_PI / 2.0));
  CHECK(OrthonormalFamily::laguerre(0.0).mass == doctest::Approx(1.0));
  CHECK(OrthonormalFamily::laguerre(0.5).mass ==
        doctest::Approx(std::tgamma(1.5)));
  // Jacobi(1,0): 2^2 G(2) G(1) / G(3) = 2.
  CHECK(OrthonormalFamily::jacobi(1.0, 0.0).mass == doctest::Approx(2.0));
  CHECK(OrthonormalFamily::jacobi(-0.25, -0.75).mass ==
        doctest::Approx(std::pow(2.0, 0.0) * std::tgamma(0.75) *
                        std::tgamma(0.25) / std::tgamma(1.0)));
}

TEST_CASE("orthonormality through Gaussian quadrature") {
  for (const OrthonormalFamily& fam :
       {OrthonormalFamily::legendre(), OrthonormalFamily::jacobi(-0.25, -0.75),
        OrthonormalFamily::laguerre(0.25), OrthonormalFamily::hermite(),
        OrthonormalFamily::chebyshev_t()}) {
    const Index n = 16;
    QuadratureRule rule = gauss_rule(fam, n);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (Index q = 0; q < n; ++q) {
      Eigen::VectorXd p = eval_basis(fam, n, rule.nodes(q));
      G += rule.weights(q) * p * p.transpose();
    }
    CHECK(max_abs(G - Eigen::MatrixXd::Identity(n, n)) < 1e-10);
  }
}

TEST_CASE("op_poly equals the dense polynomial of the Jacobi matrix") {
  OrthonormalFamily leg = OrthonormalFamily::legendre();
  const Index n = 20;
  Eigen::VectorXd c = coeffs_of_polynomial(
      leg, [](double x) { return 1.0 - x * x; }, 2);
  SymBanded U = op_poly(leg, c, n);
  CHECK(U.bandwidth == 2);
  CHECK(U(0, 0) == doctest::Approx(2.0 / 3.0));

  // Dense oracle evaluated on a guard-extended section, then truncated.
  const Index m = n + 2;
  Eigen::MatrixXd X = jacobi_matrix(leg, m).dense();
  Eigen::MatrixXd ref = Eigen::MatrixXd::Identity(m, m) - X * X;
  CHECK(max_abs(U.dense() - ref.topLeftCorner(n, n)) < 1e-14);

  // Laziness: extension preserves the leading section.
  SymBanded U2 = U.extended(2 * n);
  CHECK(max_abs(U2.dense().topLeftCorner(n, n) - U.dense()) == 0.0);
}

TEST_CASE("op_poly is linear and handles higher degree on Laguerre") {
  OrthonormalFamily lag = OrthonormalFamily::laguerre(0.5);
  const Index n = 15, m = n + 3;
  auto f = [](double x) { return 2.0 + x - 0.5 * x * x + x * x * x / 7.0; };
  Eigen::VectorXd c = coeffs_of_polynomial(lag, f, 3);
  Eigen::MatrixXd X = jacobi_matrix(lag, m).dense();
  Eigen::MatrixXd ref = 2.0 * Eigen::MatrixXd::Identity(m, m) + X -
                        0.5 * X * X + X * X * X / 7.0;
  SymBanded U = op_poly(lag, c, n);
  CHECK(max_abs(U.dense() - ref.topLeftCorner(n, n)) < 1e-11);
}

TEST_CASE("coeffs_of_polynomial and clenshaw_eval round-trip") {
  OrthonormalFamily leg = OrthonormalFamily::legendre();
  Eigen::VectorXd c1 = coeffs_of_polynomial(leg, [](double) { return 1.0; }, 0);
  REQUIRE(c1.size() == 1);
  CHECK(c1(0) == doctest::Approx(std::sqrt(2.0)));

  auto f = [](double x) { return (x - 0.3) * (x + 0.9) * x; };
  Eigen::VectorXd c = coeffs_of_polynomial(leg, f, 3);
  Eigen::VectorXd xs = Eigen::VectorXd::LinSpaced(11, -1.0, 1.0);
  Eigen::VectorXd vals = clenshaw_eval(leg, c, xs);
  for (Index i = 0; i < xs.size(); ++i)
    CHECK(vals(i) == doctest::Approx(f(xs(i))).epsilon(1e-13));

  // Clenshaw agrees with the forward recurrence.
  for (double x : {-0.7, 0.1, 0.99}) {
    Eigen::VectorXd p = eval_basis(leg, c.size(), x);
    Eigen::VectorXd pt(1);
    pt(0) = x;
    CHECK(clenshaw_eval(leg, c, pt)(0) == doctest::Approx(p.dot(c)).epsilon(1e-13));
  }
}

TEST_CASE("raised families") {
  CHECK(OrthonormalFamily::legendre().raised().name() == "jacobi(1,1)");
  CHECK(OrthonormalFamily::chebyshev_t().raised().name() == "jacobi(0.5,0.5)");
  OrthonormalFamily rj = OrthonormalFamily::jacobi(-0.25, -0.75).raised();
  CHECK(rj.a == doctest::Approx(0.75));
  CHECK(rj.b == doctest::Approx(0.25));
  CHECK(OrthonormalFamily::laguerre(1.0).raised().a == doctest::Approx(2.0));
  CHECK(OrthonormalFamily::hermite().raised().kind ==
        OrthonormalFamily::Kind::Hermite);
}

TEST_CASE("from_jacobi_matrix reproduces the source recurrence") {
  OrthonormalFamily leg = OrthonormalFamily::legendre();
  SymBanded X = jacobi_matrix(leg, 12);
  OrthonormalFamily f = OrthonormalFamily::from_jacobi_matrix(X, leg.mass);
  CHECK(f.mass == doctest::Approx(2.0));
  for (Index k = 0; k < 11; ++k) {
    CHECK(f.diag(k) == doctest::Approx(leg.diag(k)));
    CHECK(f.offdiag(k) == doctest::Approx(leg.offdiag(k)));
  }
  // Beyond the stored section the generator must take over.
  CHECK(f.offdiag(30) == doctest::Approx(leg.offdiag(30)));
}
