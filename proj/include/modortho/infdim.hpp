#pragma once

#include "modortho/banded.hpp"

#include <Eigen/Core>

namespace modortho {

/// Certified section of an infinite-dimensional factorization.
struct AdaptiveResult {
  TriBanded factor;         // n x n certified lower factor
  TriBanded factor_window;  // N x N factor actually computed
  GivensSeq q_window;       // QL only: the window's orthogonal factor
  Index window = 0;         // N, a power-of-two multiple of n (doubling from 2n)
  double criterion = 0.0;   // certified ratio, < eps at return
};

constexpr Index kDefaultWindowMax = Index{1} << 20;

/// QL factorization of the infinite operator V, certified on the first n rows:
/// doubles the window N from 2n until ||P_n Q_N^T V_b||_2 < eps ||V_b||_2,
/// where V_b is the N x b slab coupling the window to the tail.
AdaptiveResult adaptive_ql(const SymBanded& V, Index n, double eps,
                           Index window_max = kDefaultWindowMax);

/// Reverse Cholesky V = L^T L, certified via
/// ||L_N^T P_n L_N^{-T} V_b||_2 < eps ||V_b||_2.
AdaptiveResult adaptive_reverse_cholesky(const SymBanded& V, Index n, double eps,
                                         Index window_max = kDefaultWindowMax);

/// Largest singular value of a thin slab to 1e-10 relative, by power
/// iteration on B^T B with a deterministic start vector.
double slab_two_norm(const Eigen::MatrixXd& B);

}  // namespace modortho
