#pragma once

#include "modortho/banded.hpp"
#include "modortho/families.hpp"
#include "modortho/infdim.hpp"

#include <Eigen/Core>

namespace modortho {

enum class ConnCase { Poly, SqrtPoly, ReciprocalRC, ReciprocalQL, Rational1, Rational2 };

/// Factored representation of the connection operator R with P(x) = Q(x) R,
/// where Q is the family orthonormal under the modified measure.  The full
/// R is applied only through the stored banded factors:
///   Poly / SqrtPoly:   R itself (upper banded);
///   ReciprocalRC / QL: R = L^{-T};
///   Rational1:         R = Rt L^{-T}  (Rt stored in `R`);
///   Rational2:         R = Rb L^{-T}  (Rb stored in `R`).
struct ConnectionFactors {
  ConnCase kind = ConnCase::Poly;
  Index n = 0;
  double eps = 0.0;
  OrthonormalFamily family;

  TriBanded R;  // upper factor (identity-like placeholder when unused)
  TriBanded L;  // lower factor (reciprocal/rational cases)
  GivensSeq Q;  // SqrtPoly / ReciprocalQL / Rational1

  Index window = 0;       // adaptive window used (0 for finite cases)
  double criterion = 0.0; // certified adaptive ratio

  bool has_R() const {
    return kind == ConnCase::Poly || kind == ConnCase::SqrtPoly ||
           kind == ConnCase::Rational1 || kind == ConnCase::Rational2;
  }
  bool has_L() const {
    return kind == ConnCase::ReciprocalRC || kind == ConnCase::ReciprocalQL ||
           kind == ConnCase::Rational1 || kind == ConnCase::Rational2;
  }
};

enum class ReciprocalMethod { ReverseCholesky, QL };
enum class ConvertDirection { OriginalToModified, ModifiedToOriginal };

/// Measure modification by the polynomial u: U = R^T R.
ConnectionFactors connect_poly(const OrthonormalFamily& family,
                               const Eigen::VectorXd& u_coeffs, Index n,
                               double eps = 1e-14);

/// Modification by u = (sqrt_u)^2 through sqrt(U) = Q R.
ConnectionFactors connect_sqrt_poly(const OrthonormalFamily& family,
                                    const Eigen::VectorXd& sqrt_u_coeffs, Index n,
                                    double eps = 1e-14);

/// Modification by 1/v: V = L^T L (reverse Cholesky) or sqrt(V) = Q L (QL,
/// caller supplies sqrt_v).
ConnectionFactors connect_reciprocal(const OrthonormalFamily& family,
                                     const Eigen::VectorXd& v_coeffs, Index n,
                                     double eps = 1e-14,
                                     ReciprocalMethod method =
                                         ReciprocalMethod::ReverseCholesky,
                                     Index window_max = kDefaultWindowMax);

/// Rational modification u/v, case 1: V = QL, then Q^T U L^T = Rt^T Rt.
ConnectionFactors connect_rational_case1(const OrthonormalFamily& family,
                                         const Eigen::VectorXd& u_coeffs,
                                         const Eigen::VectorXd& v_coeffs, Index n,
                                         double eps = 1e-14,
                                         Index window_max = kDefaultWindowMax);

/// Rational modification u/v, case 2: V = L^T L, then L U L^{-1} = Rb^T Rb.
ConnectionFactors connect_rational_case2(const OrthonormalFamily& family,
                                         const Eigen::VectorXd& u_coeffs,
                                         const Eigen::VectorXd& v_coeffs, Index n,
                                         double eps = 1e-14,
                                         Index window_max = kDefaultWindowMax);

/// Dispatches on the degrees of u and v (constant v -> Poly, constant
/// u -> ReciprocalRC, otherwise case 2).
ConnectionFactors connect_rational_auto(const OrthonormalFamily& family,
                                        const Eigen::VectorXd& u_coeffs,
                                        const Eigen::VectorXd& v_coeffs, Index n,
                                        double eps = 1e-14,
                                        Index window_max = kDefaultWindowMax);

/// Main and first super-diagonal of the full connection R, for all cases.
std::pair<Eigen::VectorXd, Eigen::VectorXd> connection_diagonals(
    const ConnectionFactors& cf);

/// (n-1) x (n-1) section of the modified Jacobi matrix recovered from the
/// connection diagonals in O(n).
SymBanded modified_jacobi(const ConnectionFactors& cf, const SymBanded& XP,
                          Index n);

/// Mass of the modified measure: mu_0 * R_{0,0}^2.
double modified_mass(const ConnectionFactors& cf);

/// Applies R (original -> modified) or R^{-1} through the factors.
Eigen::VectorXd convert_coeffs(const ConnectionFactors& cf,
                               const Eigen::VectorXd& coeffs,
                               ConvertDirection direction);

struct MMatrixReport {
  bool ok = true;
  Index i = -1, j = -1;  // first violating entry when !ok
};

/// Positive diagonal, non-positive off-diagonal (within tol slack).
MMatrixReport is_m_matrix(const TriBanded& T, double tol = 1e-14);
MMatrixReport is_m_matrix(const SymBanded& A, double tol = 1e-14);
MMatrixReport is_m_matrix(const Eigen::MatrixXd& A, double tol = 1e-14);

}  // namespace modortho
