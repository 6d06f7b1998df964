#include "modortho/banded.hpp"

#include <cmath>

namespace modortho {

SymBanded SymBanded::extended(Index n) const {
  if (n <= size) return *this;
  if (!generator)
    throw std::logic_error("SymBanded::extended: no generator attached");
  SymBanded out = generator(n);
  out.generator = generator;
  return out;
}

Banded multiply(const Banded& A, const Banded& B) {
  if (A.cols() != B.rows())
    throw std::invalid_argument("banded multiply: dimension mismatch");
  Banded C(A.rows(), B.cols(), A.dmin() + B.dmin(), A.dmax() + B.dmax());
  for (Index j = 0; j < C.cols(); ++j) {
    Index ilo = std::max<Index>(0, j - C.dmax());
    Index ihi = std::min<Index>(C.rows() - 1, j - C.dmin());
    for (Index i = ilo; i <= ihi; ++i) {
      Index klo = std::max<Index>({0, i + A.dmin(), j - B.dmax()});
      Index khi = std::min<Index>({A.cols() - 1, i + A.dmax(), j - B.dmin()});
      double acc = 0.0;
      for (Index k = klo; k <= khi; ++k) acc += A(i, k) * B(k, j);
      C.ref(i, j) = acc;
    }
  }
  return C;
}

Eigen::MatrixXd multiply(const Banded& A, const Eigen::MatrixXd& x) {
  if (A.cols() != x.rows())
    throw std::invalid_argument("banded multiply: dimension mismatch");
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(A.rows(), x.cols());
  for (Index i = 0; i < A.rows(); ++i) {
    Index klo = std::max<Index>(0, i + A.dmin());
    Index khi = std::min<Index>(A.cols() - 1, i + A.dmax());
    for (Index k = klo; k <= khi; ++k) y.row(i) += A(i, k) * x.row(k);
  }
  return y;
}

TriBanded transposed(const TriBanded& T) {
  TriBanded out(T.shape == TriBanded::Shape::Upper ? TriBanded::Shape::Lower
                                                   : TriBanded::Shape::Upper,
                T.bandwidth, T.size);
  out.bands = T.bands;
  return out;
}

void apply_givens_inplace(const GivensSeq& Q, bool transpose,
                          Eigen::Ref<Eigen::MatrixXd> B) {
  if (B.rows() != Q.dimension)
    throw std::invalid_argument("apply_givens: row count != Q.dimension");
  auto rotate = [&B](Index i, double c, double s) {
    Eigen::RowVectorXd top = B.row(i);
    B.row(i) = c * top + s * B.row(i + 1);
    B.row(i + 1) = -s * top + c * B.row(i + 1);
  };
  if (!transpose) {
    for (Index i : Q.flipped) B.row(i) = -B.row(i);
    for (const auto& g : Q.rotations) rotate(g.plane, g.c, g.s);
  } else {
    for (auto it = Q.rotations.rbegin(); it != Q.rotations.rend(); ++it)
      rotate(it->plane, it->c, -it->s);
    for (Index i : Q.flipped) B.row(i) = -B.row(i);
  }
}

Eigen::MatrixXd apply_givens(const GivensSeq& Q, bool transpose,
                             Eigen::MatrixXd B) {
  apply_givens_inplace(Q, transpose, B);
  return B;
}

namespace {
constexpr double kPivotFloor = 1e-300;
}

TriBanded cholesky_banded(const SymBanded& A, Index n) {
  if (n < 1 || n > A.size)
    throw std::invalid_argument("cholesky_banded: bad section size");
  const int b = A.bandwidth;
  TriBanded R(TriBanded::Shape::Upper, b, n);
  for (Index i = 0; i < n; ++i) {
    double piv = A(i, i);
    for (Index k = std::max<Index>(0, i - b); k < i; ++k) piv -= R(k, i) * R(k, i);
    if (!(piv > kPivotFloor))
      throw factorization_error("cholesky_banded: not positive definite at pivot " +
                                    std::to_string(i),
                                i);
    const double rii = std::sqrt(piv);
    R.ref(i, i) = rii;
    for (Index j = i + 1; j <= std::min<Index>(n - 1, i + b); ++j) {
      double acc = A(i, j);
      for (Index k = std::max<Index>(0, j - b); k < i; ++k) acc -= R(k, i) * R(k, j);
      R.ref(i, j) = acc / rii;
    }
  }
  return R;
}

TriBanded reverse_cholesky_banded(const SymBanded& A, Index n) {
  if (n < 1 || n > A.size)
    throw std::invalid_argument("reverse_cholesky_banded: bad section size");
  const int b = A.bandwidth;
  TriBanded L(TriBanded::Shape::Lower, b, n);
  for (Index i = n - 1; i >= 0; --i) {
    double piv = A(i, i);
    for (Index k = i + 1; k <= std::min<Index>(n - 1, i + b); ++k)
      piv -= L(k, i) * L(k, i);
    if (!(piv > kPivotFloor))
      throw factorization_error(
          "reverse_cholesky_banded: not positive definite at pivot " +
              std::to_string(i),
          i);
    const double lii = std::sqrt(piv);
    L.ref(i, i) = lii;
    for (Index j = i - 1; j >= std::max<Index>(0, i - b); --j) {
      double acc = A(i, j);
      for (Index k = i + 1; k <= std::min<Index>(n - 1, j + b); ++k)
        acc -= L(k, i) * L(k, j);
      L.ref(i, j) = acc / lii;
    }
  }
  return L;
}

namespace {

// Folds the residual sign of untouched diagonal entries into the orthogonal
// factor: A = (G D)(D W) for any diagonal D of +-1.
void fix_phase(GivensSeq& Q, Banded& W, Index n) {
  for (Index i = 0; i < n; ++i) {
    if (W(i, i) < 0.0) {
      Q.flipped.push_back(i);
      Index jlo = std::max<Index>(0, i - std::max(0, -W.dmin()));
      Index jhi = std::min<Index>(n - 1, i + std::max(0, W.dmax()));
      for (Index j = jlo; j <= jhi; ++j)
        if (W.in_band(i, j)) W.ref(i, j) = -W.ref(i, j);
    }
  }
}

}  // namespace

std::pair<GivensSeq, TriBanded> qr_banded(const Banded& A, Index n) {
  if (n < 1 || n > A.rows() || n > A.cols())
    throw std::invalid_argument("qr_banded: bad section size");
  const int l = std::max(0, -A.dmin());
  const int u = std::max(0, A.dmax());
  Banded W(n, n, -l, l + u);
  for (Index j = 0; j < n; ++j)
    for (Index i = std::max<Index>(0, j - u); i <= std::min<Index>(n - 1, j + l); ++i)
      W.ref(i, j) = A(i, j);

  // Rotations g_1..g_m with g_m...g_1 A = R; Q is their reversed transpose.
  std::vector<GivensRotation> gens;
  for (Index j = 0; j < n; ++j) {
    for (Index i = std::min<Index>(n - 1, j + l); i > j; --i) {
      const double x = W(i - 1, j), y = W(i, j);
      if (y == 0.0) continue;
      const double r = std::hypot(x, y);
      const double c = x / r, s = y / r;
      gens.push_back({i - 1, c, s});
      Index jhi = std::min<Index>(n - 1, i - 1 + l + u);
      for (Index k = j; k <= jhi; ++k) {
        const double a = W(i - 1, k), d = W(i, k);
        if (W.in_band(i - 1, k)) W.ref(i - 1, k) = c * a + s * d;
        if (W.in_band(i, k)) W.ref(i, k) = -s * a + c * d;
      }
      W.ref(i, j) = 0.0;
    }
    if (W(j, j) == 0.0)
      throw factorization_error("qr_banded: rank deficiency at column " +
                                    std::to_string(j),
                                j);
  }

  GivensSeq Q;
  Q.dimension = n;
  Q.rotations.reserve(gens.size());
  for (auto it = gens.rbegin(); it != gens.rend(); ++it)
    Q.rotations.push_back({it->plane, it->c, -it->s});
  fix_phase(Q, W, n);

  TriBanded R(TriBanded::Shape::Upper, l + u, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j <= std::min<Index>(n - 1, i + l + u); ++j)
      R.ref(i, j) = W(i, j);
  return {std::move(Q), std::move(R)};
}

std::pair<GivensSeq, TriBanded> ql_banded(const SymBanded& A, Index n) {
  if (n < 1 || n > A.size)
    throw std::invalid_argument("ql_banded: bad section size");
  const int b = A.bandwidth;
  // One spare subdiagonal below the theoretical fill of 2b; it must stay
  // zero and is checked structurally below.
  Banded W(n, n, -(2 * b + 1), b);
  for (Index i = 0; i < n; ++i)
    for (Index j = std::max<Index>(0, i - b); j <= std::min<Index>(n - 1, i + b); ++j)
      W.ref(i, j) = A(i, j);

  std::vector<GivensRotation> gens;
  for (Index j = n - 1; j >= 1; --j) {
    for (Index i = std::max<Index>(0, j - b); i < j; ++i) {
      const double x = W(i, j), y = W(i + 1, j);
      if (x == 0.0) continue;
      const double r = std::hypot(x, y);
      const double c = y / r, s = -x / r;
      gens.push_back({i, c, s});
      Index klo = std::max<Index>(0, i - 2 * b - 1);
      for (Index k = klo; k <= j; ++k) {
        const double a = W(i, k), d = W(i + 1, k);
        if (W.in_band(i, k)) W.ref(i, k) = c * a + s * d;
        if (W.in_band(i + 1, k)) W.ref(i + 1, k) = -s * a + c * d;
      }
      W.ref(i, j) = 0.0;
    }
    if (W(j, j) == 0.0)
      throw factorization_error("ql_banded: singular section at row " +
                                    std::to_string(j),
                                j);
  }
  if (W(0, 0) == 0.0)
    throw factorization_error("ql_banded: singular section at row 0", 0);

  GivensSeq Q;
  Q.dimension = n;
  Q.rotations.reserve(gens.size());
  for (auto it = gens.rbegin(); it != gens.rend(); ++it)
    Q.rotations.push_back({it->plane, it->c, -it->s});
  fix_phase(Q, W, n);

  TriBanded L(TriBanded::Shape::Lower, 2 * b, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i <= std::min<Index>(n - 1, j + 2 * b); ++i)
      L.ref(i, j) = W(i, j);
  return {std::move(Q), std::move(L)};
}

Eigen::MatrixXd solve_tri(const TriBanded& T, const Eigen::MatrixXd& rhs) {
  if (rhs.rows() != T.size)
    throw std::invalid_argument("solve_tri: dimension mismatch");
  const Index n = T.size;
  const int b = T.bandwidth;
  Eigen::MatrixXd x = rhs;
  if (T.shape == TriBanded::Shape::Upper) {
    for (Index i = n - 1; i >= 0; --i) {
      const double tii = T(i, i);
      if (tii == 0.0)
        throw factorization_error("solve_tri: zero diagonal at " + std::to_string(i),
                                  i);
      for (Index j = i + 1; j <= std::min<Index>(n - 1, i + b); ++j)
        x.row(i) -= T(i, j) * x.row(j);
      x.row(i) /= tii;
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      const double tii = T(i, i);
      if (tii == 0.0)
        throw factorization_error("solve_tri: zero diagonal at " + std::to_string(i),
                                  i);
      for (Index j = std::max<Index>(0, i - b); j < i; ++j)
        x.row(i) -= T(i, j) * x.row(j);
      x.row(i) /= tii;
    }
  }
  return x;
}

}  // namespace modortho
