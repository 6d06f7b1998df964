#pragma once

#include "modortho/banded.hpp"
#include "modortho/families.hpp"
#include "modortho/modify.hpp"

#include <Eigen/Core>

#include <vector>

namespace modortho {

/// Banded differentiation matrix: maps expansion coefficients in `source`
/// to coefficients of the derivative in `target`.  Strictly upper:
/// entry (i, j) = 0 for j <= i and for j > i + upper_bandwidth.
struct DiffMatrix {
  Banded D;  // size x size, stored band (1, upper_bandwidth)
  int upper_bandwidth = 1;
  Index size = 0;
  OrthonormalFamily source, target;
};

/// Differentiation of a classical family into its raised family: single
/// superdiagonal with entry (n, n+1) = sqrt(lambda_{n+1}),
/// lambda_n = -(n/2) [(n-1) sigma'' + 2 tau'].
DiffMatrix classical_diff(const OrthonormalFamily& family, Index n);

/// Differentiation matrix of the rationally (u/v) modified family; upper
/// bandwidth at most deg u + deg v + 1.
DiffMatrix modified_diff(const OrthonormalFamily& family,
                         const Eigen::VectorXd& u_coeffs,
                         const Eigen::VectorXd& v_coeffs, Index n,
                         double eps = 1e-14);

/// D-factors for k successive derivatives of the u-modified family; each
/// upper bandwidth at most deg(u sigma) + 1 and built from banded polynomial
/// connections only.
std::vector<DiffMatrix> higher_diff_chain(const OrthonormalFamily& family,
                                          const Eigen::VectorXd& u_coeffs,
                                          Index n, int k, double eps = 1e-14);

/// Right pseudoinverse integration matrix: (n+1) x n with zero first row and
/// rows 2..n+1 equal to the inverse of D's shifted upper-triangular block,
/// so that D(1:n, :) * Dplus = I.
Eigen::MatrixXd integration_pinv(const DiffMatrix& D, Index n);

/// D^T D: the symmetric positive semi-definite weak-form second-order
/// operator (diagonal Lambda for classical families).
SymBanded weak_laplacian(const DiffMatrix& D, Index n);

}  // namespace modortho
