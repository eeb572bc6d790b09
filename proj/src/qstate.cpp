#include "qprobe/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qprobe {

namespace {

std::string describe(const char* what, double magnitude, double bound) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: worst offender %.3e exceeds bound %.1e", what, magnitude, bound);
  return buf;
}

void require_dim(const CMatrix& m, int dim, const char* op) {
  if (m.rows() != dim || m.cols() != dim) {
    throw StateError(StateError::Kind::DimensionMismatch,
                     std::string(op) + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                         " input, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

double hermiticity_error(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

CMatrix pure_state(const CVector& psi) {
  return psi * psi.adjoint();
}

EigenSystem eig_hermitian(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw StateError(StateError::Kind::ConvergenceFailure, "eig_hermitian: eigensolver did not converge");
  }
  const auto n = h.rows();
  EigenSystem out{RVector(n), CMatrix(n, n)};
  // Eigen returns ascending order.
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = solver.eigenvalues()[n - 1 - k];
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

EigenSystem eig_hermitian(const DensityMatrix& rho) {
  return eig_hermitian(rho.matrix());
}

DensityMatrix validate_density(const CMatrix& m, const ValidationTolerances& tol) {
  if (m.rows() != m.cols() || (m.rows() != 2 && m.rows() != 4)) {
    throw StateError(StateError::Kind::DimensionMismatch,
                     "validate_density: matrix must be 2x2 or 4x4, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw StateError(StateError::Kind::NotHermitian, "validate_density: non-finite entries");
  }
  const double herm = hermiticity_error(m);
  if (herm > tol.hermiticity) {
    throw StateError(StateError::Kind::NotHermitian, describe("NotHermitian", herm, tol.hermiticity));
  }
  const double trace_dev = std::abs(m.trace() - Complex(1.0, 0.0));
  if (trace_dev > tol.trace) {
    throw StateError(StateError::Kind::TraceNotOne, describe("TraceNotOne", trace_dev, tol.trace));
  }
  // Hermitian part only; the anti-Hermitian residue is already below tolerance.
  const CMatrix h = 0.5 * (m + m.adjoint());
  RVector ev = eig_hermitian(h).values;
  const double lowest = ev.minCoeff();
  if (lowest < tol.min_eigenvalue) {
    throw StateError(StateError::Kind::NegativeEigenvalue,
                     describe("NegativeEigenvalue", -lowest, -tol.min_eigenvalue));
  }
  for (auto& p : ev) p = std::clamp(p, 0.0, 1.0);
  return DensityMatrix(m, std::move(ev));
}

DensityMatrix partial_trace_B(const DensityMatrix& rho) {
  require_dim(rho.matrix(), 4, "partial_trace_B");
  const CMatrix& r = rho.matrix();
  CMatrix out(2, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      out(a, b) = r(2 * a, 2 * b) + r(2 * a + 1, 2 * b + 1);
    }
  }
  return validate_density(out);
}

BlochVector bloch_vector(const DensityMatrix& rho) {
  require_dim(rho.matrix(), 2, "bloch_vector");
  const Complex eg = rho(0, 1);
  return BlochVector{2.0 * eg.real(), -2.0 * eg.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

CMatrix from_bloch(const BlochVector& a) {
  CMatrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + a.az);
  m(1, 1) = 0.5 * (1.0 - a.az);
  m(0, 1) = 0.5 * Complex(a.ax, -a.ay);
  m(1, 0) = 0.5 * Complex(a.ax, a.ay);
  return m;
}

double fidelity_bloch(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  const BlochVector a0 = bloch_vector(rho0);
  const BlochVector a1 = bloch_vector(rho1);
  double radicand = (1.0 - a0.norm2()) * (1.0 - a1.norm2());
  if (radicand < 0.0 && radicand >= -1e-12) radicand = 0.0;
  const double f = 0.5 * (1.0 + a0.dot(a1) + std::sqrt(radicand));
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_uhlmann_oracle(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  require_dim(rho0.matrix(), 2, "fidelity_uhlmann_oracle");
  require_dim(rho1.matrix(), 2, "fidelity_uhlmann_oracle");
  const double overlap = (rho0.matrix() * rho1.matrix()).trace().real();
  double d0 = rho0.matrix().determinant().real();
  double d1 = rho1.matrix().determinant().real();
  for (double* d : {&d0, &d1}) {
    if (*d < -1e-12) {
      throw StateError(StateError::Kind::NegativeEigenvalue,
                       describe("fidelity_uhlmann_oracle: negative determinant", -*d, 1e-12));
    }
    *d = std::max(*d, 0.0);
  }
  return overlap + 2.0 * std::sqrt(d0 * d1);
}

}  // namespace qprobe
