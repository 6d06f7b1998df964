#include "modortho/toeplitz.hpp"

#include <cmath>

namespace modortho {

ToeplitzModel::ToeplitzModel(double alpha, double beta)
    : alpha(alpha), beta(beta) {
  if (!(alpha > 2.0 * std::abs(beta)) || beta == 0.0)
    throw std::domain_error("toeplitz model: requires alpha > 2|beta| > 0");
  disc = std::sqrt(alpha * alpha - 4.0 * beta * beta);
  rho = (alpha + disc) / (2.0 * std::abs(beta));
}

SymBanded ToeplitzModel::matrix(Index n) const {
  SymBanded V(1, n);
  V.bands.row(0).setConstant(alpha);
  V.bands.row(1).setConstant(beta);
  if (n > 0) V.bands(1, n - 1) = 0.0;
  const double a = alpha, b = beta;
  V.generator = [a, b](Index m) { return ToeplitzModel(a, b).matrix(m); };
  return V;
}

InfiniteQL infinite_ql(const ToeplitzModel& model) {
  const double ab = std::abs(model.beta);
  const double sgn = model.beta < 0.0 ? -1.0 : 1.0;
  const double t = model.alpha + model.disc;
  InfiniteQL f;
  f.s = 2.0 * ab / t;
  f.c = std::sqrt(2.0 * model.disc / t);
  f.corner = std::sqrt(t * model.disc / 2.0);
  f.diag = t / 2.0;
  f.sub1 = sgn * 2.0 * ab;
  f.sub2 = 2.0 * ab * ab / t;
  return f;
}

FiniteQL finite_ql(const ToeplitzModel& model, Index N) {
  if (N < 2) throw std::invalid_argument("finite_ql: N must be >= 2");
  const double a = model.alpha, ab = std::abs(model.beta);
  const double sgn = model.beta < 0.0 ? -1.0 : 1.0;

  // 1-based sines/cosines s(k), c(k), k = 1..N, with s_N = 0, c_N = 1.
  // s_{N-k}, c_{N-k} come from partial sums of a_j^2; the geometric growth
  // of a_j is kept at unit scale by tracking t_k = a_{k+1}/a_k and
  // u_k = (sum_{j<=k} a_j^2) / a_k^2.
  Eigen::VectorXd s = Eigen::VectorXd::Zero(N + 2), c = Eigen::VectorXd::Ones(N + 2);
  double t = a / ab;  // a_2 / a_1
  double u = 1.0;     // S_1 / a_1^2
  for (Index k = 1; k <= N - 1; ++k) {
    const double u_next = u / (t * t) + 1.0;  // S_{k+1} / a_{k+1}^2
    s(N - k) = std::sqrt(u / (u_next * t * t));
    c(N - k) = std::sqrt(1.0 / u_next);
    u = u_next;
    t = a / ab - 1.0 / t;
  }

  TriBanded L(TriBanded::Shape::Lower, 2, N);
  for (Index k = 1; k <= N; ++k) {
    const double g = c(k) * a - s(k) * c(k + 1) * ab;
    L.ref(k - 1, k - 1) = (k == 1) ? g : std::sqrt(g * g + ab * ab);
    if (k <= N - 1) L.ref(k, k - 1) = sgn * (s(k) * a + c(k) * c(k + 1) * ab);
    if (k <= N - 2) L.ref(k + 1, k - 1) = s(k + 1) * ab;
  }

  FiniteQL out;
  out.s = s.segment(1, N - 1);
  out.c = c.segment(1, N - 1);
  out.L = std::move(L);
  return out;
}

InfiniteRC infinite_reverse_cholesky(const ToeplitzModel& model) {
  const double t = model.alpha + model.disc;
  InfiniteRC f;
  f.l_d = std::sqrt(t / 2.0);
  f.l_o = model.beta * std::sqrt(2.0 / t);
  return f;
}

FiniteRC finite_reverse_cholesky(const ToeplitzModel& model, Index N) {
  if (N < 1) throw std::invalid_argument("finite_reverse_cholesky: N >= 1");
  const double a = model.alpha, b = model.beta;
  FiniteRC out;
  out.diag.resize(N);
  out.sub.resize(std::max<Index>(0, N - 1));
  double d = a;  // d_0
  for (Index k = 0; k < N; ++k) {
    out.diag(k) = std::sqrt(d);
    if (k < N - 1) out.sub(k) = b / std::sqrt(d);
    d = a - b * b / d;
  }
  TriBanded L(TriBanded::Shape::Lower, 1, N);
  for (Index r = 0; r < N; ++r) {
    const Index k = N - 1 - r;
    L.ref(r, r) = out.diag(k);
    if (r >= 1) L.ref(r, r - 1) = out.sub(k);
  }
  out.L = std::move(L);
  return out;
}

Index ql_window_bound(const ToeplitzModel& model, Index n, double eps) {
  if (!(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument("ql_window_bound: need 0 < eps < 1");
  const double t = (model.rho - 1.0 / model.rho) / (2.0 * eps);
  const double rhs = n + std::asinh(t) / std::log(model.rho) - 1.0;
  return static_cast<Index>(std::floor(rhs)) + 1;
}

Index rc_window_bound(const ToeplitzModel& model, Index n, double eps) {
  if (!(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument("rc_window_bound: need 0 < eps < 1");
  const double arg =
      (2.0 / eps) * std::sqrt(std::abs(model.beta) / (model.alpha + 2.0 * std::abs(model.beta)));
  const double rhs = n + std::log(arg) / std::log(model.rho) - 0.5;
  return static_cast<Index>(std::floor(rhs)) + 1;
}

}  // namespace modortho
