#pragma once

// Dense complex linear algebra for the small Hilbert spaces used throughout
// (3-level atom, optionally tensored with a truncated Fock ladder).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace geophase {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Tolerances shared by the library and its tests.
struct Tolerances {
  static constexpr double kHermitianRel = 1e-12;       // density-matrix Hermiticity, relative to max|M|
  static constexpr double kTrace = 1e-10;              // density-matrix unit trace
  static constexpr double kPsd = 1e-9;                 // density-matrix min eigenvalue >= -kPsd
  static constexpr double kPureNorm = 1e-12;           // pure-state unit norm
  static constexpr double kEigenInputHermitian = 1e-10;  // eigensolver input check, relative
  static constexpr double kEigenResidual = 1e-9;       // ||Mv - lambda v|| per eigenpair
  static constexpr double kIntegratorTraceDrift = 1e-8;
  static constexpr double kIntegratorPsd = 1e-8;
  static constexpr double kIntegratorHermitian = 1e-8;
  static constexpr double kCoherenceFloor = 1e-12;     // |rho_dg(0)| below this: phase undefined
  static constexpr double kConfluentRel = 1e-12;       // |discriminant| < this * Gamma^2
};

class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t dim);
  static CMatrix diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return data_.size(); }

  cplx& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * dim_ + col]; }
  const cplx& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * dim_ + col];
  }

  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  CMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  bool all_finite() const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx scale);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

using CVector = std::vector<cplx>;

CVector operator*(const CMatrix& m, const CVector& v);
cplx inner(const CVector& a, const CVector& b);  // <a|b>
double norm(const CVector& v);

/// max entrywise |M - M^dagger|.
double hermiticity_defect(const CMatrix& m);

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix outer(const CVector& ket, const CVector& bra);  // |ket><bra|
cplx expectation(const CMatrix& m, const CVector& bra, const CVector& ket);  // <bra|M|ket>
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// Unit-norm state vector.
class PureState {
 public:
  /// Throws if the norm differs from 1 by more than Tolerances::kPureNorm.
  explicit PureState(CVector amplitudes);
  static PureState normalized(CVector amplitudes);
  static PureState basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  const CVector& amplitudes() const noexcept { return amps_; }
  cplx operator[](std::size_t i) const noexcept { return amps_[i]; }

 private:
  CVector amps_;
};

struct DensityTolerance {
  double hermitian_rel = Tolerances::kHermitianRel;
  double trace = Tolerances::kTrace;
  double psd = Tolerances::kPsd;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates against `tol`; throws ErrorKind::kInvalidArgument with the offending defect.
  explicit DensityMatrix(CMatrix m, DensityTolerance tol = {});

  static DensityMatrix pure(const PureState& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return mat_.dim(); }
  const CMatrix& matrix() const noexcept { return mat_; }
  cplx operator()(std::size_t r, std::size_t c) const noexcept { return mat_(r, c); }

  /// p * a + (1 - p) * b.
  static DensityMatrix mix(double p, const DensityMatrix& a, const DensityMatrix& b);

 private:
  struct Trusted {};
  DensityMatrix(CMatrix m, Trusted) : mat_(std::move(m)) {}
  friend DensityMatrix partial_trace_cavity(const DensityMatrix&, std::size_t, std::size_t);

  CMatrix mat_;
};

struct DensityDefects {
  double hermitian = 0.0;  // max |M - M^dagger|
  double trace = 0.0;      // |tr M - 1|
  double min_eigenvalue = 0.0;
};

DensityDefects density_defects(const CMatrix& m);

/// Ascending eigenvalues of a Hermitian matrix (cyclic complex Jacobi).
/// Throws if the input is non-Hermitian beyond Tolerances::kEigenInputHermitian.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

struct EigenSystem {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k is the eigenvector of values[k]
};

EigenSystem hermitian_eigensystem(const CMatrix& m);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance(const CMatrix& a, const CMatrix& b);

/// Traces out the cavity factor of an atom (x) Fock density matrix.
/// Composite index is atom * fock_dim + photon_number.
DensityMatrix partial_trace_cavity(const DensityMatrix& s, std::size_t atom_dim, std::size_t fock_dim);
CMatrix partial_trace_cavity(const CMatrix& s, std::size_t atom_dim, std::size_t fock_dim);

}  // namespace geophase
