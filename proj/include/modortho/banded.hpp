#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace modortho {

using Index = Eigen::Index;

/// Thrown when a factorization cannot proceed (loss of definiteness,
/// rank deficiency, singular pivot). `index` names the failing pivot.
class factorization_error : public std::runtime_error {
public:
  factorization_error(const std::string& what, Index index)
      : std::runtime_error(what), index(index) {}
  Index index;
};

/// General banded matrix storing diagonals d = col - row in [dmin, dmax].
/// Diagonal-major storage: unit stride along each diagonal.
class Banded {
public:
  Banded() = default;
  Banded(Index rows, Index cols, int dmin, int dmax)
      : rows_(rows), cols_(cols), dmin_(dmin), dmax_(dmax),
        data_(Eigen::MatrixXd::Zero(dmax - dmin + 1, std::max(rows, cols))) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  int dmin() const { return dmin_; }
  int dmax() const { return dmax_; }

  bool in_band(Index i, Index j) const {
    long d = j - i;
    return i >= 0 && j >= 0 && i < rows_ && j < cols_ && d >= dmin_ && d <= dmax_;
  }

  double operator()(Index i, Index j) const {
    return in_band(i, j) ? data_(j - i - dmin_, j) : 0.0;
  }

  double& ref(Index i, Index j) {
    if (!in_band(i, j))
      throw std::out_of_range("Banded::ref outside stored band");
    return data_(j - i - dmin_, j);
  }

  static Banded identity(Index n) {
    Banded I(n, n, 0, 0);
    for (Index i = 0; i < n; ++i) I.ref(i, i) = 1.0;
    return I;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(rows_, cols_);
    for (Index j = 0; j < cols_; ++j) {
      Index ilo = std::max<Index>(0, j - dmax_);
      Index ihi = std::min<Index>(rows_ - 1, j - dmin_);
      for (Index i = ilo; i <= ihi; ++i) M(i, j) = (*this)(i, j);
    }
    return M;
  }

private:
  Index rows_ = 0, cols_ = 0;
  int dmin_ = 0, dmax_ = 0;
  Eigen::MatrixXd data_;
};

/// C = A * B with summed band extents.
Banded multiply(const Banded& A, const Banded& B);

/// y = A * x for a dense block x.
Eigen::MatrixXd multiply(const Banded& A, const Eigen::MatrixXd& x);

/// Symmetric banded matrix; only diagonals d >= 0 are stored.
/// An optional generator extends the matrix to larger truncations;
/// extension never changes previously produced entries.
struct SymBanded {
  int bandwidth = 0;
  Index size = 0;
  Eigen::MatrixXd bands;  // bands(d, i) = A(i, i+d), valid for i < size - d
  std::function<SymBanded(Index)> generator;

  SymBanded() = default;
  SymBanded(int bandwidth, Index size)
      : bandwidth(bandwidth), size(size),
        bands(Eigen::MatrixXd::Zero(bandwidth + 1, size)) {}

  double operator()(Index i, Index j) const {
    if (j < i) std::swap(i, j);
    long d = j - i;
    if (i < 0 || j >= size || d > bandwidth) return 0.0;
    return bands(d, i);
  }

  double& ref(Index i, Index j) {
    if (j < i) std::swap(i, j);
    long d = j - i;
    if (i < 0 || j >= size || d > bandwidth)
      throw std::out_of_range("SymBanded::ref outside stored band");
    return bands(d, i);
  }

  /// Returns this matrix at truncation n, using the generator if n > size.
  SymBanded extended(Index n) const;

  static SymBanded identity(Index n) {
    SymBanded I(0, n);
    I.bands.setOnes();
    I.generator = [](Index m) { return SymBanded::identity(m); };
    return I;
  }

  Banded to_banded() const {
    Banded B(size, size, -bandwidth, bandwidth);
    for (int d = 0; d <= bandwidth; ++d)
      for (Index i = 0; i + d < size; ++i) {
        B.ref(i, i + d) = bands(d, i);
        if (d > 0) B.ref(i + d, i) = bands(d, i);
      }
    return B;
  }

  Eigen::MatrixXd dense() const { return to_banded().dense(); }
};

/// Triangular banded matrix with strictly positive diagonal
/// (positive phase convention).
struct TriBanded {
  enum class Shape { Upper, Lower };

  Shape shape = Shape::Upper;
  int bandwidth = 0;
  Index size = 0;
  // Upper: bands(d, i) = T(i, i+d).  Lower: bands(d, j) = T(j+d, j).
  Eigen::MatrixXd bands;

  TriBanded() = default;
  TriBanded(Shape shape, int bandwidth, Index size)
      : shape(shape), bandwidth(bandwidth), size(size),
        bands(Eigen::MatrixXd::Zero(bandwidth + 1, size)) {}

  double operator()(Index i, Index j) const {
    long d = (shape == Shape::Upper) ? j - i : i - j;
    Index base = (shape == Shape::Upper) ? i : j;
    if (d < 0 || d > bandwidth || base < 0 || base + d >= size) return 0.0;
    return bands(d, base);
  }

  double& ref(Index i, Index j) {
    long d = (shape == Shape::Upper) ? j - i : i - j;
    Index base = (shape == Shape::Upper) ? i : j;
    if (d < 0 || d > bandwidth || base < 0 || base + d >= size)
      throw std::out_of_range("TriBanded::ref outside stored band");
    return bands(d, base);
  }

  static TriBanded identity(Shape shape, Index n) {
    TriBanded T(shape, 0, n);
    T.bands.setOnes();
    return T;
  }

  /// Leading m x m section.
  TriBanded section(Index m) const {
    TriBanded T(shape, bandwidth, m);
    T.bands = bands.leftCols(m);
    return T;
  }

  Banded to_banded() const {
    int lo = (shape == Shape::Upper) ? 0 : -bandwidth;
    int hi = (shape == Shape::Upper) ? bandwidth : 0;
    Banded B(size, size, lo, hi);
    for (Index j = 0; j < size; ++j)
      for (Index i = 0; i < size; ++i)
        if ((*this)(i, j) != 0.0 || i == j) {
          if (B.in_band(i, j)) B.ref(i, j) = (*this)(i, j);
        }
    return B;
  }

  Eigen::MatrixXd dense() const { return to_banded().dense(); }
};

/// T^T as a TriBanded of the opposite shape.
TriBanded transposed(const TriBanded& T);

/// Ordered sequence of plane rotations (optionally right-multiplied by a
/// diagonal sign matrix) representing an orthogonal factor.  Applying the
/// sequence computes Q * x; the transpose flag computes Q^T * x.
struct GivensRotation {
  Index plane;  // acts on rows (plane, plane+1)
  double c, s;
};

struct GivensSeq {
  std::vector<GivensRotation> rotations;
  std::vector<Index> flipped;  // rows of the trailing sign matrix equal to -1
  Index dimension = 0;
};

/// B <- Q * B (transpose == false) or B <- Q^T * B (transpose == true).
void apply_givens_inplace(const GivensSeq& Q, bool transpose,
                          Eigen::Ref<Eigen::MatrixXd> B);
Eigen::MatrixXd apply_givens(const GivensSeq& Q, bool transpose,
                             Eigen::MatrixXd B);

/// A = R^T R with upper triangular R, bandwidth = A.bandwidth.
TriBanded cholesky_banded(const SymBanded& A, Index n);

/// A = L^T L with lower triangular L, elimination from the bottom-right.
TriBanded reverse_cholesky_banded(const SymBanded& A, Index n);

/// A = Q R via Givens rotations; R upper bandwidth <= lower + upper of A.
std::pair<GivensSeq, TriBanded> qr_banded(const Banded& A, Index n);

/// A = Q L via Givens rotations ordered from the bottom-right;
/// L lower bandwidth <= 2 * A.bandwidth.
std::pair<GivensSeq, TriBanded> ql_banded(const SymBanded& A, Index n);

/// Solves T x = rhs by forward/back substitution; rhs may be a block.
Eigen::MatrixXd solve_tri(const TriBanded& T, const Eigen::MatrixXd& rhs);

}  // namespace modortho
