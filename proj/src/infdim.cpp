#include "modortho/infdim.hpp"

#include <cmath>

namespace modortho {

double slab_two_norm(const Eigen::MatrixXd& B) {
  if (B.rows() == 0 || B.cols() == 0) return 0.0;
  const Index k = B.cols();
  Eigen::MatrixXd G = B.transpose() * B;
  Eigen::VectorXd v(k);
  for (Index i = 0; i < k; ++i) v(i) = 1.0 + double(i) / double(k);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Eigen::VectorXd w = G * v;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    if (std::abs(nw - lambda) <= 1e-10 * nw) {
      lambda = nw;
      break;
    }
    lambda = nw;
  }
  return std::sqrt(lambda);
}

namespace {

// Columns N..N+b-1 of the infinite V restricted to the first N rows: the
// slab coupling the window to the tail, nonzero only in a b x b
// lower-triangular corner.
Eigen::MatrixXd tail_slab(const SymBanded& V, Index N) {
  const int b = V.bandwidth;
  SymBanded Vx = V.extended(N + b);
  Eigen::MatrixXd slab = Eigen::MatrixXd::Zero(N, b);
  for (Index j = 0; j < b; ++j)
    for (Index i = std::max<Index>(0, N + j - b); i < N; ++i)
      slab(i, j) = Vx(i, N + j);
  return slab;
}

[[noreturn]] void no_convergence(Index window_max) {
  throw std::runtime_error(
      "adaptive factorization did not certify within window " +
      std::to_string(window_max) +
      " (pole too close to the support, or operator not invertible)");
}

}  // namespace

AdaptiveResult adaptive_ql(const SymBanded& V, Index n, double eps,
                           Index window_max) {
  if (n < 1 || !(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument("adaptive_ql: need n >= 1 and 0 < eps < 1");
  for (Index N = 2 * n;; N *= 2) {
    if (N > window_max) no_convergence(window_max);
    SymBanded VN = V.extended(N);
    auto [Q, L] = ql_banded(VN, N);
    Eigen::MatrixXd slab = tail_slab(V, N);
    const double denom = slab_two_norm(slab);
    double ratio = 0.0;
    if (denom > 0.0) {
      Eigen::MatrixXd W = apply_givens(Q, /*transpose=*/true, slab);
      ratio = slab_two_norm(W.topRows(n)) / denom;
    }
    if (ratio < eps) {
      AdaptiveResult out;
      out.factor = L.section(n);
      out.factor_window = std::move(L);
      out.q_window = std::move(Q);
      out.window = N;
      out.criterion = ratio;
      return out;
    }
  }
}

AdaptiveResult adaptive_reverse_cholesky(const SymBanded& V, Index n, double eps,
                                         Index window_max) {
  if (n < 1 || !(eps > 0.0) || eps >= 1.0)
    throw std::invalid_argument(
        "adaptive_reverse_cholesky: need n >= 1 and 0 < eps < 1");
  for (Index N = 2 * n;; N *= 2) {
    if (N > window_max) no_convergence(window_max);
    SymBanded VN = V.extended(N);
    TriBanded L = reverse_cholesky_banded(VN, N);
    Eigen::MatrixXd slab = tail_slab(V, N);
    const double denom = slab_two_norm(slab);
    double ratio = 0.0;
    if (denom > 0.0) {
      Eigen::MatrixXd Y = solve_tri(transposed(L), slab);  // L^{-T} V_b
      Y.bottomRows(N - n).setZero();                       // P_n
      Eigen::MatrixXd Z = multiply(transposed(L).to_banded(), Y);
      ratio = slab_two_norm(Z) / denom;
    }
    if (ratio < eps) {
      AdaptiveResult out;
      out.factor = L.section(n);
      out.factor_window = std::move(L);
      out.window = N;
      out.criterion = ratio;
      return out;
    }
  }
}

}  // namespace modortho
