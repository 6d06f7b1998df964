#pragma once

#include "modortho/banded.hpp"

#include <Eigen/Core>

namespace modortho {

/// Tridiagonal Toeplitz model: V has diagonal alpha and off-diagonal beta,
/// the operator v(X) for v(x) = alpha + 2 beta x on second-kind Chebyshev.
/// Requires alpha > 2|beta| > 0.  Negative beta is handled by conjugation
/// with diag(+1, -1, +1, ...), which flips the sign of the odd off-diagonals
/// of every factor.
struct ToeplitzModel {
  double alpha, beta;
  double disc;  // sqrt(alpha^2 - (2 beta)^2)
  double rho;   // (alpha + disc) / (2 |beta|), > 1

  ToeplitzModel(double alpha, double beta);

  SymBanded matrix(Index n) const;  // V_n with generator
};

struct InfiniteQL {
  double s, c;          // the repeating rotation
  double corner;        // L(0,0)
  double diag;          // repeating diagonal
  double sub1, sub2;    // first and second sub-diagonal
};

/// Closed-form infinite-dimensional QL factor entries.
InfiniteQL infinite_ql(const ToeplitzModel& model);

struct FiniteQL {
  Eigen::VectorXd s, c;  // s(k), c(k) for k = 1..N-1 (entry k-1), 1-based
  TriBanded L;           // lower bandwidth 2
};

/// Closed-form QL factorization of the N x N section; the a_j sums are
/// accumulated through a linear recurrence to avoid overflow.
FiniteQL finite_ql(const ToeplitzModel& model, Index N);

struct InfiniteRC {
  double l_d, l_o;  // bidiagonal Toeplitz factor entries
};

InfiniteRC infinite_reverse_cholesky(const ToeplitzModel& model);

struct FiniteRC {
  Eigen::VectorXd diag;  // (L_N)_{N-k,N-k} = sqrt(d_k), index N-1-k from the end
  Eigen::VectorXd sub;   // (L_N)_{N-k,N-k-1} = beta / sqrt(d_k)
  TriBanded L;
};

/// Closed-form reverse Cholesky of the N x N section via the stable ratio
/// recurrence d_k = alpha - beta^2 / d_{k-1}, d_0 = alpha.
FiniteRC finite_reverse_cholesky(const ToeplitzModel& model, Index N);

/// Smallest window N guaranteeing a 2-normwise eps-accurate first-n-rows QL
/// section.
Index ql_window_bound(const ToeplitzModel& model, Index n, double eps);

/// Same for reverse Cholesky.
Index rc_window_bound(const ToeplitzModel& model, Index n, double eps);

}  // namespace modortho
