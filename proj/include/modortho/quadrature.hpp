#pragma once

#include "modortho/banded.hpp"
#include "modortho/families.hpp"

#include <Eigen/Core>

namespace modortho {

struct QuadratureRule {
  Eigen::VectorXd nodes;    // strictly increasing
  Eigen::VectorXd weights;  // positive
  double mass = 0.0;        // sum of weights
};

/// Gaussian rule from a symmetric tridiagonal section: nodes are the
/// eigenvalues, weights the scaled squared first eigenvector components.
/// Implicitly shifted QL iteration with Wilkinson shifts, tracking only the
/// first row of the eigenvector matrix; O(n^2).
QuadratureRule golub_welsch(const SymBanded& X, Index n, double mass);

/// n-point Gaussian rule of a classical family.
QuadratureRule gauss_rule(const OrthonormalFamily& family, Index n);

/// n-point Gaussian rule for the measure (u/v) dmu, built from the rational
/// connection problem.  u, v are expansion coefficients in the family basis.
QuadratureRule modified_rule(const OrthonormalFamily& family,
                             const Eigen::VectorXd& u_coeffs,
                             const Eigen::VectorXd& v_coeffs, Index n,
                             double eps = 1e-14);

}  // namespace modortho
