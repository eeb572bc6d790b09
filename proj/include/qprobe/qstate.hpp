// Density matrices for one- and two-qubit probes.
//
// Basis order is (|e>, |g>) for a single qubit and A-major for two qubits:
// (|e_A e_B>, |e_A g_B>, |g_A e_B>, |g_A g_B>).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qprobe {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Failure of one of the density-matrix invariants, or a shape error.
class StateError : public std::runtime_error {
public:
  enum class Kind { NotHermitian, TraceNotOne, NegativeEigenvalue, DimensionMismatch, ConvergenceFailure };

  StateError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct ValidationTolerances {
  double hermiticity = 1e-10;
  double trace = 1e-10;
  /// Most negative eigenvalue accepted before the clamp to [0, 1].
  double min_eigenvalue = -1e-10;
};

/// A validated Hermitian, unit-trace, positive-semidefinite matrix of
/// dimension 2 or 4. Only obtainable through validate_density().
class DensityMatrix {
public:
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  /// Spectrum clamped to [0, 1], descending.
  const RVector& eigenvalues() const noexcept { return eigenvalues_; }

private:
  DensityMatrix(CMatrix m, RVector eigenvalues) : m_(std::move(m)), eigenvalues_(std::move(eigenvalues)) {}

  friend DensityMatrix validate_density(const CMatrix& m, const ValidationTolerances& tol);

  CMatrix m_;
  RVector eigenvalues_;
};

DensityMatrix validate_density(const CMatrix& m, const ValidationTolerances& tol = {});

struct EigenSystem {
  RVector values;   // descending
  CMatrix vectors;  // column k pairs with values[k]
};

/// Hermitian eigendecomposition, eigenvalues sorted descending.
/// Accepts any Hermitian matrix; throws StateError(ConvergenceFailure) if the
/// iterative solver does not converge.
EigenSystem eig_hermitian(const CMatrix& h);
EigenSystem eig_hermitian(const DensityMatrix& rho);

DensityMatrix partial_trace_B(const DensityMatrix& rho);

struct BlochVector {
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;

  double dot(const BlochVector& o) const { return ax * o.ax + ay * o.ay + az * o.az; }
  double norm2() const { return dot(*this); }
};

/// az = rho_ee - rho_gg, ax = 2 Re rho_eg, ay = -2 Im rho_eg.
BlochVector bloch_vector(const DensityMatrix& rho);

/// (1 + a.sigma) / 2 in the (|e>, |g>) basis.
CMatrix from_bloch(const BlochVector& a);

/// Squared (Uhlmann) fidelity of two qubit states written in Bloch form.
double fidelity_bloch(const DensityMatrix& rho0, const DensityMatrix& rho1);

/// tr(rho0 rho1) + 2 sqrt(det rho0 det rho1); independent route to the
/// same qubit fidelity.
double fidelity_uhlmann_oracle(const DensityMatrix& rho0, const DensityMatrix& rho1);

// Small helpers shared by the other modules.
CMatrix pure_state(const CVector& psi);
double hermiticity_error(const CMatrix& m);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

}  // namespace qprobe
