#include "wavepml/sparse.hpp"

#include <lapacke.h>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace wavepml {

ComplexSparse::ComplexSparse(int n, std::vector<int> row_ptr,
                             std::vector<int> col, std::vector<cplx> val,
                             bool symmetric)
    : n_(n),
      row_ptr_(std::move(row_ptr)),
      col_(std::move(col)),
      val_(std::move(val)),
      symmetric_(symmetric) {
  check_structure();
  if (symmetric_ && symmetry_defect() > 1e-12 * (norm_inf() + 1e-300))
    throw InvalidArgument("matrix marked symmetric but A != A^T");
}

void ComplexSparse::check_structure() const {
  if (static_cast<int>(row_ptr_.size()) != n_ + 1)
    throw InvalidArgument("sparse: row_ptr size mismatch");
  if (col_.size() != val_.size())
    throw InvalidArgument("sparse: col/val size mismatch");
  for (int i = 0; i < n_; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1])
      throw InvalidArgument("sparse: row_ptr not monotone");
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_[k] < 0 || col_[k] >= n_)
        throw InvalidArgument("sparse: column index out of range");
      if (k > row_ptr_[i] && col_[k] <= col_[k - 1])
        throw InvalidArgument("sparse: duplicate or unsorted column indices");
    }
  }
}

ComplexSparse ComplexSparse::from_triplets(
    int n, const std::vector<std::tuple<int, int, cplx>>& entries,
    bool symmetric) {
  std::map<std::pair<int, int>, cplx> acc;
  for (const auto& [i, j, v] : entries) acc[{i, j}] += v;
  std::vector<int> row_ptr(n + 1, 0), col;
  std::vector<cplx> val;
  col.reserve(acc.size());
  val.reserve(acc.size());
  for (const auto& [ij, v] : acc) row_ptr[ij.first + 1]++;
  for (int i = 0; i < n; ++i) row_ptr[i + 1] += row_ptr[i];
  for (const auto& [ij, v] : acc) {
    col.push_back(ij.second);
    val.push_back(v);
  }
  return ComplexSparse(n, std::move(row_ptr), std::move(col), std::move(val),
                       symmetric);
}

ComplexSparse ComplexSparse::identity(int n) {
  std::vector<int> row_ptr(n + 1), col(n);
  std::vector<cplx> val(n, 1.0);
  for (int i = 0; i <= n; ++i) row_ptr[i] = i;
  for (int i = 0; i < n; ++i) col[i] = i;
  return ComplexSparse(n, std::move(row_ptr), std::move(col), std::move(val),
                       true);
}

cplx ComplexSparse::at(int i, int j) const {
  auto lo = col_.begin() + row_ptr_[i];
  auto hi = col_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(lo, hi, j);
  if (it == hi || *it != j) return 0.0;
  return val_[it - col_.begin()];
}

int ComplexSparse::bandwidth() const {
  int bw = 0;
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      bw = std::max(bw, std::abs(col_[k] - i));
  return bw;
}

void ComplexSparse::matvec(const cplx* x, cplx* y) const {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n_; ++i) {
    cplx acc = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      acc += val_[k] * x[col_[k]];
    y[i] = acc;
  }
}

std::vector<cplx> ComplexSparse::matvec(const std::vector<cplx>& x) const {
  if (static_cast<int>(x.size()) != n_)
    throw InvalidArgument("matvec: dimension mismatch");
  std::vector<cplx> y(n_);
  matvec(x.data(), y.data());
  return y;
}

double ComplexSparse::norm_inf() const {
  double best = 0.0;
  for (int i = 0; i < n_; ++i) {
    double s = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += std::abs(val_[k]);
    best = std::max(best, s);
  }
  return best;
}

double ComplexSparse::symmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      worst = std::max(worst, std::abs(val_[k] - at(col_[k], i)));
  return worst;
}

void ComplexSparse::export_coordinate(std::ostream& os) const {
  os << n_ << " " << nnz() << "\n";
  os.precision(17);
  for (int i = 0; i < n_; ++i)
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      os << i << " " << col_[k] << " " << val_[k].real() << " "
         << val_[k].imag() << "\n";
}

ComplexSparse ComplexSparse::import_coordinate(std::istream& is,
                                               bool symmetric) {
  int n;
  long nnz;
  if (!(is >> n >> nnz)) throw InvalidArgument("coordinate import: bad header");
  std::vector<std::tuple<int, int, cplx>> tr;
  tr.reserve(nnz);
  for (long k = 0; k < nnz; ++k) {
    int i, j;
    double re, im;
    if (!(is >> i >> j >> re >> im))
      throw InvalidArgument("coordinate import: truncated entry list");
    tr.emplace_back(i, j, cplx(re, im));
  }
  return from_triplets(n, tr, symmetric);
}

namespace {

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

double relative_residual(const ComplexSparse& A, const std::vector<cplx>& x,
                         const std::vector<cplx>& b, std::vector<cplx>* r_out) {
  std::vector<cplx> r = A.matvec(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  double nb = norm2(b);
  double res = nb > 0.0 ? norm2(r) / nb : norm2(r);
  if (r_out) *r_out = std::move(r);
  return res;
}

std::string fmt_sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

}  // namespace

struct Factorization::Impl {
  const ComplexSparse A;  // kept for residual checks
  SolveOptions opts;
  bool banded = false;
  // banded path
  int kl = 0, ku = 0, ldab = 0;
  std::vector<cplx> ab;
  std::vector<lapack_int> ipiv;
  // fallback
  Eigen::SparseMatrix<cplx> eigenA;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
};

Factorization::Factorization(const ComplexSparse& A, const SolveOptions& opts)
    : impl_(new Impl{A, opts}) {
  const int n = A.size();
  if (n == 0) throw InvalidArgument("solve: empty system");
  int bw = A.bandwidth();
  long band_bytes = static_cast<long>(3 * bw + 1) * n * sizeof(cplx);
  impl_->banded = bw <= opts.band_limit && band_bytes <= opts.band_bytes_limit;

  if (impl_->banded) {
    impl_->kl = impl_->ku = bw;
    impl_->ldab = 2 * impl_->kl + impl_->ku + 1;
    impl_->ab.assign(static_cast<std::size_t>(impl_->ldab) * n, cplx(0.0));
    const auto& rp = A.row_ptr();
    const auto& col = A.col();
    const auto& val = A.values();
    for (int i = 0; i < n; ++i)
      for (int k = rp[i]; k < rp[i + 1]; ++k) {
        int j = col[k];
        impl_->ab[static_cast<std::size_t>(j) * impl_->ldab +
                  (impl_->kl + impl_->ku + i - j)] = val[k];
      }
    impl_->ipiv.resize(n);
    lapack_int info = LAPACKE_zgbtrf(
        LAPACK_COL_MAJOR, n, n, impl_->kl, impl_->ku,
        reinterpret_cast<lapack_complex_double*>(impl_->ab.data()),
        impl_->ldab, impl_->ipiv.data());
    if (info != 0)
      throw SolverError("banded factorization failed (LAPACK info=" +
                            std::to_string(info) + ")",
                        std::numeric_limits<double>::infinity());
  } else {
    std::vector<Eigen::Triplet<cplx>> tr;
    tr.reserve(A.nnz());
    const auto& rp = A.row_ptr();
    for (int i = 0; i < n; ++i)
      for (int k = rp[i]; k < rp[i + 1]; ++k)
        tr.emplace_back(i, A.col()[k], A.values()[k]);
    impl_->eigenA.resize(n, n);
    impl_->eigenA.setFromTriplets(tr.begin(), tr.end());
    impl_->lu.compute(impl_->eigenA);
    if (impl_->lu.info() != Eigen::Success)
      throw SolverError("sparse LU factorization failed",
                        std::numeric_limits<double>::infinity());
  }
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

SolveResult Factorization::solve(const std::vector<cplx>& b) const {
  const int n = impl_->A.size();
  if (static_cast<int>(b.size()) != n)
    throw InvalidArgument("solve: rhs dimension mismatch");
  auto apply_factors = [&](std::vector<cplx> rhs) {
    if (impl_->banded) {
      // zgbtrs only reads the factors
      lapack_int info = LAPACKE_zgbtrs(
          LAPACK_COL_MAJOR, 'N', n, impl_->kl, impl_->ku, 1,
          reinterpret_cast<lapack_complex_double*>(
              const_cast<cplx*>(impl_->ab.data())),
          impl_->ldab, impl_->ipiv.data(),
          reinterpret_cast<lapack_complex_double*>(rhs.data()), n);
      if (info != 0)
        throw SolverError("banded back-substitution failed",
                          std::numeric_limits<double>::infinity());
      return rhs;
    }
    Eigen::Map<const Eigen::VectorXcd> bb(rhs.data(), n);
    Eigen::VectorXcd xx = impl_->lu.solve(bb);
    return std::vector<cplx>(xx.data(), xx.data() + n);
  };

  SolveResult out;
  out.x = apply_factors(b);
  std::vector<cplx> r;
  out.residual = relative_residual(impl_->A, out.x, b, &r);
  // iterative refinement recovers the last digits on ill-conditioned
  // (near-resonant) systems
  for (int round = 0; round < 2 && out.residual > impl_->opts.tol; ++round) {
    std::vector<cplx> d = apply_factors(r);
    for (int i = 0; i < n; ++i) out.x[i] += d[i];
    out.residual = relative_residual(impl_->A, out.x, b, &r);
  }
  if (!(out.residual <= impl_->opts.tol))
    throw SolverError("solve: residual " + fmt_sci(out.residual) +
                          " misses tolerance " + fmt_sci(impl_->opts.tol),
                      out.residual);
  return out;
}

SolveResult solve(const ComplexSparse& A, const std::vector<cplx>& b,
                  const SolveOptions& opts) {
  if (static_cast<int>(b.size()) != A.size())
    throw InvalidArgument("solve: dimension mismatch");
  Factorization f(A, opts);
  return f.solve(b);
}

std::vector<cplx> dense_eigenvalues(const ComplexSparse& A, int limit) {
  const int n = A.size();
  if (n > limit)
    throw ResourceError("dense eigensolve limited to n <= " +
                        std::to_string(limit));
  std::vector<cplx> dense(static_cast<std::size_t>(n) * n, cplx(0.0));
  const auto& rp = A.row_ptr();
  for (int i = 0; i < n; ++i)
    for (int k = rp[i]; k < rp[i + 1]; ++k)
      dense[static_cast<std::size_t>(i) * n + A.col()[k]] = A.values()[k];
  std::vector<cplx> evals(n);
  // eigenvalues only: column-major interpretation transposes the matrix,
  // which leaves the spectrum unchanged
  lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n,
      reinterpret_cast<lapack_complex_double*>(dense.data()), n,
      reinterpret_cast<lapack_complex_double*>(evals.data()), nullptr, 1,
      nullptr, 1);
  if (info != 0)
    throw Error("dense eigensolve failed (LAPACK info=" + std::to_string(info) + ")");
  std::sort(evals.begin(), evals.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return evals;
}

}  // namespace wavepml
