#include "modortho/quadrature.hpp"

#include "modortho/modify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace modortho {

QuadratureRule golub_welsch(const SymBanded& X, Index n, double mass) {
  if (X.bandwidth != 1 || n < 1 || n > X.size)
    throw std::invalid_argument("golub_welsch: need a tridiagonal section");
  if (!(mass > 0.0)) throw std::invalid_argument("golub_welsch: mass must be > 0");

  Eigen::VectorXd d(n), e(n), z = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) d(i) = X(i, i);
  for (Index i = 0; i + 1 < n; ++i) e(i) = X(i, i + 1);
  e(n - 1) = 0.0;
  z(0) = 1.0;

  const double ulp = std::numeric_limits<double>::epsilon();
  for (Index l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      Index m = l;
      for (; m + 1 < n; ++m)
        if (std::abs(e(m)) <= ulp * (std::abs(d(m)) + std::abs(d(m + 1)))) break;
      if (m == l) break;
      if (++iter > 50)
        throw std::runtime_error("golub_welsch: eigenvalue iteration stalled");

      double g = (d(l + 1) - d(l)) / (2.0 * e(l));
      double r = std::hypot(g, 1.0);
      g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (Index i = m - 1; i >= l; --i) {
        double f = s * e(i), bb = c * e(i);
        r = std::hypot(f, g);
        e(i + 1) = r;
        if (r == 0.0) {
          d(i + 1) -= p;
          e(m) = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d(i + 1) - p;
        r = (d(i) - g) * s + 2.0 * c * bb;
        p = s * r;
        d(i + 1) = g + p;
        g = c * r - bb;
        f = z(i + 1);
        z(i + 1) = s * z(i) + c * f;
        z(i) = c * z(i) - s * f;
      }
      if (underflow) continue;
      d(l) -= p;
      e(l) = g;
      e(m) = 0.0;
    }
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&d](Index i, Index j) { return d(i) < d(j); });

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Index i = 0; i < n; ++i) {
    rule.nodes(i) = d(order[i]);
    rule.weights(i) = mass * z(order[i]) * z(order[i]);
  }
  rule.mass = rule.weights.sum();
  return rule;
}

QuadratureRule gauss_rule(const OrthonormalFamily& family, Index n) {
  return golub_welsch(jacobi_matrix(family, n), n, family.mass);
}

QuadratureRule modified_rule(const OrthonormalFamily& family,
                             const Eigen::VectorXd& u_coeffs,
                             const Eigen::VectorXd& v_coeffs, Index n,
                             double eps) {
  ConnectionFactors cf =
      connect_rational_auto(family, u_coeffs, v_coeffs, n + 1, eps);
  SymBanded XQ = modified_jacobi(cf, jacobi_matrix(family, n + 1), n + 1);
  return golub_welsch(XQ, n, modified_mass(cf));
}

}  // namespace modortho
