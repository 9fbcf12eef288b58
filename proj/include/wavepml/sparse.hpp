#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include "wavepml/errors.hpp"

namespace wavepml {

using cplx = std::complex<double>;

/// Complex sparse matrix in compressed row storage, column indices
/// ascending within each row, no duplicates. The symmetric flag asserts
/// unconjugated symmetry A = A^T, verified on construction.
class ComplexSparse {
 public:
  ComplexSparse() = default;
  ComplexSparse(int n, std::vector<int> row_ptr, std::vector<int> col,
                std::vector<cplx> val, bool symmetric = false);

  static ComplexSparse from_triplets(
      int n, const std::vector<std::tuple<int, int, cplx>>& entries,
      bool symmetric = false);
  static ComplexSparse identity(int n);

  int size() const { return n_; }
  long nnz() const { return static_cast<long>(col_.size()); }
  bool symmetric() const { return symmetric_; }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col() const { return col_; }
  const std::vector<cplx>& values() const { return val_; }
  std::vector<cplx>& values() { return val_; }

  cplx at(int i, int j) const;  // zero when the entry is not stored
  int bandwidth() const;        // max |i - j| over stored entries

  /// y = A x (OpenMP over rows; per-row accumulation order is fixed).
  void matvec(const cplx* x, cplx* y) const;
  std::vector<cplx> matvec(const std::vector<cplx>& x) const;

  /// Largest row sum of absolute values (infinity norm).
  double norm_inf() const;

  /// max_ij |A_ij - A_ji| over the stored pattern.
  double symmetry_defect() const;

  /// Coordinate text format, one entry per line: row col re im.
  void export_coordinate(std::ostream& os) const;
  static ComplexSparse import_coordinate(std::istream& is,
                                         bool symmetric = false);

 private:
  void check_structure() const;
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<cplx> val_;
  bool symmetric_ = false;
};

struct SolveResult {
  std::vector<cplx> x;
  double residual = 0.0;  // ||Ax - b|| / ||b||, checked against tol
};

struct SolveOptions {
  double tol = 1e-10;
  int band_limit = 2000;         // fall back to sparse LU beyond this
  long band_bytes_limit = 1'500'000'000;
};

/// Direct solve of A x = b. Banded LAPACK factorization sized by the
/// matrix bandwidth; sparse LU fallback for wide-band patterns. The
/// relative residual is always computed and checked against tol
/// (SolverError on miss); the achieved value is returned.
SolveResult solve(const ComplexSparse& A, const std::vector<cplx>& b,
                  const SolveOptions& opts = {});

/// Reusable factorization handle; immutable and shareable after creation.
class Factorization {
 public:
  explicit Factorization(const ComplexSparse& A, const SolveOptions& opts = {});
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  Factorization(const Factorization&) = delete;
  Factorization& operator=(const Factorization&) = delete;

  SolveResult solve(const std::vector<cplx>& b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// All eigenvalues of the densified matrix (diagnostics only).
/// Throws ResourceError when the dimension exceeds `limit`.
std::vector<cplx> dense_eigenvalues(const ComplexSparse& A, int limit = 2500);

}  // namespace wavepml
