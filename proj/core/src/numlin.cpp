#include "geophase/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geophase/error.hpp"

namespace geophase {

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) : dim_(rows.size()) {
  data_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    require(row.size() == dim_, "CMatrix: initializer rows must form a square matrix");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t dim) {
  CMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require(other.dim_ == dim_, "CMatrix: dimension mismatch in +=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require(other.dim_ == dim_, "CMatrix: dimension mismatch in -=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require(a.dim() == b.dim(), "CMatrix: dimension mismatch in product");
  const std::size_t n = a.dim();
  CMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

CVector operator*(const CMatrix& m, const CVector& v) {
  require(m.dim() == v.size(), "CMatrix * vector: dimension mismatch");
  CVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += m(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

cplx inner(const CVector& a, const CVector& b) {
  require(a.size() == b.size(), "inner: dimension mismatch");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm(const CVector& v) { return std::sqrt(inner(v, v).real()); }

double hermiticity_defect(const CMatrix& m) {
  double d = 0.0;
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = r; c < m.dim(); ++c) d = std::max(d, std::abs(m(r, c) - std::conj(m(c, r))));
  return d;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim();
  CMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return out;
}

CMatrix outer(const CVector& ket, const CVector& bra) {
  require(ket.size() == bra.size(), "outer: dimension mismatch");
  CMatrix out(ket.size());
  for (std::size_t i = 0; i < ket.size(); ++i)
    for (std::size_t j = 0; j < bra.size(); ++j) out(i, j) = ket[i] * std::conj(bra[j]);
  return out;
}

cplx expectation(const CMatrix& m, const CVector& bra, const CVector& ket) { return inner(bra, m * ket); }

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  require(a.dim() == b.dim(), "max_abs_diff: dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

// ---------------------------------------------------------------------------

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  require(!amps_.empty(), "PureState: empty amplitude vector");
  const double n = norm(amps_);
  if (std::abs(n - 1.0) > Tolerances::kPureNorm) {
    std::ostringstream os;
    os << "PureState: norm " << n << " differs from 1 by more than " << Tolerances::kPureNorm;
    fail(ErrorKind::kInvalidArgument, os.str());
  }
}

PureState PureState::normalized(CVector amplitudes) {
  const double n = norm(amplitudes);
  require(n > 0.0 && std::isfinite(n), "PureState::normalized: zero or non-finite vector");
  for (auto& a : amplitudes) a /= n;
  return PureState(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
  require(index < dim, "PureState::basis: index out of range");
  CVector v(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

// ---------------------------------------------------------------------------

DensityDefects density_defects(const CMatrix& m) {
  DensityDefects d;
  d.hermitian = hermiticity_defect(m);
  d.trace = std::abs(m.trace() - 1.0);
  // Eigenvalues of the Hermitian part; the anti-Hermitian part is reported separately.
  CMatrix h = m + m.adjoint();
  h *= 0.5;
  d.min_eigenvalue = hermitian_eigenvalues(h).front();
  return d;
}

DensityMatrix::DensityMatrix(CMatrix m, DensityTolerance tol) : mat_(std::move(m)) {
  require(mat_.dim() > 0, "DensityMatrix: empty matrix");
  require(mat_.all_finite(), "DensityMatrix: non-finite entries");
  const double scale = std::max(1.0, mat_.max_abs());
  const DensityDefects d = density_defects(mat_);
  std::ostringstream os;
  if (d.hermitian > tol.hermitian_rel * scale)
    os << "non-Hermitian (max |M - M^dagger| = " << d.hermitian << ")";
  else if (d.trace > tol.trace)
    os << "trace deviates from 1 by " << d.trace;
  else if (d.min_eigenvalue < -tol.psd)
    os << "not positive semidefinite (min eigenvalue " << d.min_eigenvalue << ")";
  if (!os.str().empty()) fail(ErrorKind::kInvalidArgument, "DensityMatrix: " + os.str());
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  return DensityMatrix(outer(psi.amplitudes(), psi.amplitudes()), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  require(dim > 0, "maximally_mixed: dim must be positive");
  CMatrix m = CMatrix::identity(dim);
  m *= 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m), Trusted{});
}

DensityMatrix DensityMatrix::mix(double p, const DensityMatrix& a, const DensityMatrix& b) {
  require(p >= 0.0 && p <= 1.0, "DensityMatrix::mix: weight outside [0, 1]");
  require(a.dim() == b.dim(), "DensityMatrix::mix: dimension mismatch");
  return DensityMatrix(a.mat_ * p + b.mat_ * (1.0 - p), Trusted{});
}

// ---------------------------------------------------------------------------

namespace {

double off_diagonal_norm2(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return s;
}

// Cyclic complex Jacobi. On return `a` is (numerically) diagonal and, when
// `v` is non-null, a_in = V diag(a) V^dagger.
void jacobi_diagonalize(CMatrix& a, CMatrix* v) {
  const std::size_t n = a.dim();
  double total = 0.0;
  for (const auto& z : a.data()) total += std::norm(z);
  const double threshold = 1e-34 * std::max(total, 1e-300);
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // J = diag(phase) * real Givens rotation; J^dagger A J zeroes (p, q).
        const cplx phase = std::conj(apq) / r;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {  // A <- A J
          const cplx x = a(k, p), y = a(k, q);
          a(k, p) = x * jpp + y * jqp;
          a(k, q) = x * jpq + y * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
          const cplx x = a(p, k), y = a(q, k);
          a(p, k) = std::conj(jpp) * x + std::conj(jqp) * y;
          a(q, k) = std::conj(jpq) * x + std::conj(jqq) * y;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx x = (*v)(k, p), y = (*v)(k, q);
            (*v)(k, p) = x * jpp + y * jqp;
            (*v)(k, q) = x * jpq + y * jqq;
          }
        }
      }
    }
  }
}

void check_hermitian_input(const CMatrix& m) {
  require(m.dim() > 0, "hermitian_eigenvalues: empty matrix");
  const double defect = hermiticity_defect(m);
  const double scale = std::max(1.0, m.max_abs());
  if (defect > Tolerances::kEigenInputHermitian * scale) {
    std::ostringstream os;
    os << "hermitian_eigenvalues: input is not Hermitian (max |M - M^dagger| = " << defect << ")";
    fail(ErrorKind::kInvalidArgument, os.str());
  }
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  check_hermitian_input(m);
  CMatrix a = m;
  jacobi_diagonalize(a, nullptr);
  std::vector<double> values(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) values[i] = a(i, i).real();
  std::sort(values.begin(), values.end());
  return values;
}

EigenSystem hermitian_eigensystem(const CMatrix& m) {
  check_hermitian_input(m);
  CMatrix a = m;
  CMatrix v = CMatrix::identity(m.dim());
  jacobi_diagonalize(a, &v);

  const std::size_t n = m.dim();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenSystem es{std::vector<double>(n), CMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) es.vectors(r, k) = v(r, order[k]);
  }
  return es;
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  require(a.dim() == b.dim(), "trace_distance: dimension mismatch");
  CMatrix diff = a - b;
  // Symmetrize so that integrator-level Hermiticity drift does not trip the solver check.
  diff = (diff + diff.adjoint()) * 0.5;
  double s = 0.0;
  for (double ev : hermitian_eigenvalues(diff)) s += std::abs(ev);
  return 0.5 * s;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return trace_distance(a.matrix(), b.matrix());
}

CMatrix partial_trace_cavity(const CMatrix& s, std::size_t atom_dim, std::size_t fock_dim) {
  require(atom_dim > 0 && fock_dim > 0 && atom_dim * fock_dim == s.dim(),
          "partial_trace_cavity: atom_dim * fock_dim does not match the input dimension");
  CMatrix out(atom_dim);
  for (std::size_t i = 0; i < atom_dim; ++i)
    for (std::size_t j = 0; j < atom_dim; ++j) {
      cplx acc = 0.0;
      for (std::size_t n = 0; n < fock_dim; ++n) acc += s(i * fock_dim + n, j * fock_dim + n);
      out(i, j) = acc;
    }
  return out;
}

DensityMatrix partial_trace_cavity(const DensityMatrix& s, std::size_t atom_dim, std::size_t fock_dim) {
  return DensityMatrix(partial_trace_cavity(s.matrix(), atom_dim, fock_dim), DensityMatrix::Trusted{});
}

}  // namespace geophase
