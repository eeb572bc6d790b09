#include "qprobe/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qprobe {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, int dim) {
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

CVector rk4_step(const CMatrix& L, const CVector& y, double h) {
  const CVector k1 = L * y;
  const CVector k2 = L * (y + 0.5 * h * k1);
  const CVector k3 = L * (y + 0.5 * h * k2);
  const CVector k4 = L * (y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Trace-one PSD projection for states that integration error pushed a hair
// below zero.
DensityMatrix finalize_state(const CMatrix& raw, IntegrationStats& stats) {
  CMatrix rho = 0.5 * (raw + raw.adjoint());
  const EigenSystem es = eig_hermitian(rho);
  const double lowest = es.values.minCoeff();
  stats.min_eigenvalue = std::min(stats.min_eigenvalue, lowest);
  if (lowest < 0.0) {
    ValidationTolerances relaxed;
    relaxed.min_eigenvalue = -1e-8;
    validate_density(rho, relaxed);
    RVector p = es.values.cwiseMax(0.0);
    p /= p.sum();
    rho = es.vectors * p.asDiagonal() * es.vectors.adjoint();
  }
  return validate_density(rho);
}

}  // namespace

LindbladGenerator::LindbladGenerator(int dim, std::vector<JumpTerm> jumps, std::vector<CrossTerm> cross,
                                     CMatrix hamiltonian)
    : dim_(dim), jumps_(std::move(jumps)), cross_(std::move(cross)), hamiltonian_(std::move(hamiltonian)) {
  require(dim > 0, "generator dimension must be positive");
  if (hamiltonian_.size() == 0) hamiltonian_ = CMatrix::Zero(dim, dim);
  require(hamiltonian_.rows() == dim && hamiltonian_.cols() == dim, "hamiltonian has wrong shape");
  require(hermiticity_error(hamiltonian_) <= 1e-12, "hamiltonian must be Hermitian");

  const CMatrix id = CMatrix::Identity(dim, dim);
  const Complex I(0.0, 1.0);
  super_ = -I * (kron(id, hamiltonian_) - kron(hamiltonian_.transpose(), id));
  for (const auto& j : jumps_) {
    require(j.op.rows() == dim && j.op.cols() == dim, "jump operator has wrong shape");
    require(j.rate >= 0.0 && std::isfinite(j.rate), "jump rate must be >= 0");
    const CMatrix ldl = j.op.adjoint() * j.op;
    super_ += j.rate * (kron(j.op.conjugate(), j.op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  }
  for (const auto& c : cross_) {
    require(c.left.rows() == dim && c.left.cols() == dim && c.right.rows() == dim && c.right.cols() == dim,
            "cross-term operator has wrong shape");
    require(std::isfinite(c.rate), "cross-term rate must be finite");
    // tr(left rho right) = tr(right left rho) must vanish for every rho.
    require((c.right * c.left).cwiseAbs().maxCoeff() <= 1e-14, "cross term does not preserve the trace");
    super_ += c.rate * kron(c.right.transpose(), c.left);
  }
}

CMatrix LindbladGenerator::apply(const CMatrix& rho) const {
  const Complex I(0.0, 1.0);
  CMatrix out = -I * (hamiltonian_ * rho - rho * hamiltonian_);
  for (const auto& j : jumps_) {
    const CMatrix ldl = j.op.adjoint() * j.op;
    out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  for (const auto& c : cross_) out += c.rate * (c.left * rho * c.right);
  return out;
}

CMatrix sigma_minus() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

CMatrix sigma_plus() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

CMatrix on_qubit_A(const CMatrix& op) { return kron(op, CMatrix::Identity(2, 2)); }

CMatrix on_qubit_B(const CMatrix& op) { return kron(CMatrix::Identity(2, 2), op); }

LindbladGenerator thermal_generator(double m, double gamma) {
  require(m >= 0.0 && std::isfinite(m), "thermal_generator: negative rate (m must be >= 0)");
  require(gamma > 0.0 && std::isfinite(gamma), "thermal_generator: gamma must be > 0");
  std::vector<JumpTerm> jumps{{sigma_minus(), gamma * (m + 1.0)}};
  if (m > 0.0) jumps.push_back({sigma_plus(), gamma * m});
  return LindbladGenerator(2, std::move(jumps));
}

LindbladGenerator squeezed_generator(double r, double gamma) {
  require(r >= 0.0 && std::isfinite(r), "squeezed_generator: squeezing strength r must be >= 0");
  require(gamma > 0.0 && std::isfinite(gamma), "squeezed_generator: gamma must be > 0");
  const double M = std::sinh(r) * std::sinh(r);
  const double N = std::cosh(r) * std::sinh(r);
  std::vector<JumpTerm> jumps{{sigma_minus(), gamma * (M + 1.0)}};
  std::vector<CrossTerm> cross;
  if (r > 0.0) {
    jumps.push_back({sigma_plus(), gamma * M});
    cross.push_back({sigma_minus(), sigma_minus(), -gamma * N});
    cross.push_back({sigma_plus(), sigma_plus(), -gamma * N});
  }
  return LindbladGenerator(2, std::move(jumps), std::move(cross));
}

void TwoQubitReservoirParams::validate() const {
  require(a == 0.0, "two-qubit reservoir: dipole coupling a must be 0");
  require(theta == 0.0, "two-qubit reservoir: squeezing phase theta must be 0");
  require(m_or_r >= 0.0 && std::isfinite(m_or_r), "two-qubit reservoir: m or r must be >= 0");
  require(gamma > 0.0 && std::isfinite(gamma), "two-qubit reservoir: gamma must be > 0");
  require(kind == ReservoirKind::Thermal || kind == ReservoirKind::Squeezed,
          "two-qubit reservoir: unsupported kind");
}

LindbladGenerator two_qubit_generator(const TwoQubitReservoirParams& p) {
  p.validate();
  const LindbladGenerator single = p.kind == ReservoirKind::Thermal ? thermal_generator(p.m_or_r, p.gamma)
                                                                    : squeezed_generator(p.m_or_r, p.gamma);
  std::vector<JumpTerm> jumps;
  std::vector<CrossTerm> cross;
  for (const auto& lift : {on_qubit_A, on_qubit_B}) {
    for (const auto& j : single.jumps()) jumps.push_back({lift(j.op), j.rate});
    for (const auto& c : single.cross_terms()) cross.push_back({lift(c.left), lift(c.right), c.rate});
  }
  return LindbladGenerator(4, std::move(jumps), std::move(cross));
}

Trajectory integrate_trajectory(const LindbladGenerator& g, const DensityMatrix& rho0,
                                std::span<const double> times, double tol) {
  require(tol >= 1e-12 && tol <= 1e-6, "integrate: tol must lie in [1e-12, 1e-6]");
  require(rho0.dim() == g.dim(), "integrate: state and generator dimensions differ");
  double t_end = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    require(std::isfinite(times[k]) && times[k] >= 0.0, "integrate: times must be >= 0");
    require(k == 0 || times[k] >= times[k - 1], "integrate: times must be non-decreasing");
    t_end = times[k];
  }

  const CMatrix& L = g.superoperator();
  const int dim = g.dim();
  const double floor = 1e-12 * t_end;
  const double norm = L.cwiseAbs().rowwise().sum().maxCoeff();
  double h = norm > 0.0 ? 0.5 / norm : t_end;

  Trajectory out;
  out.states.reserve(times.size());
  out.stats.smallest_step = std::numeric_limits<double>::infinity();
  CVector y = vec(rho0.matrix());
  double t = 0.0;

  for (double target : times) {
    while (t < target) {
      const double remaining = target - t;
      double step = std::min(h, remaining);
      for (;;) {
        const CVector full = rk4_step(L, y, step);
        const CVector half = rk4_step(L, rk4_step(L, y, 0.5 * step), 0.5 * step);
        const double err = (full - half).cwiseAbs().maxCoeff();
        if (err <= tol) {
          y = half + (half - full) / 15.0;
          t = step == remaining ? target : t + step;
          ++out.stats.accepted_steps;
          out.stats.smallest_step = std::min(out.stats.smallest_step, step);
          const CMatrix rho = unvec(y, dim);
          out.stats.max_trace_error = std::max(out.stats.max_trace_error, std::abs(rho.trace() - 1.0));
          out.stats.max_hermiticity_error = std::max(out.stats.max_hermiticity_error, hermiticity_error(rho));
          if (step == h && err < tol / 32.0) h *= 2.0;
          break;
        }
        ++out.stats.rejected_steps;
        step *= 0.5;
        h = step;
        if (step < floor) {
          throw StepUnderflow("integrate: step " + std::to_string(step) + " fell below floor " +
                              std::to_string(floor));
        }
      }
    }
    out.states.push_back(finalize_state(unvec(y, dim), out.stats));
  }
  if (out.stats.accepted_steps == 0) out.stats.smallest_step = 0.0;
  return out;
}

DensityMatrix integrate(const LindbladGenerator& g, const DensityMatrix& rho0, double t_end, double tol) {
  const double times[] = {t_end};
  return std::move(integrate_trajectory(g, rho0, times, tol).states.front());
}

double forbidden_entry_magnitude(const CMatrix& rho4, bool allow_corner) {
  if (rho4.rows() != 4 || rho4.cols() != 4) {
    throw StateError(StateError::Kind::DimensionMismatch, "forbidden_entry_magnitude: expected a 4x4 matrix");
  }
  auto allowed = [allow_corner](int i, int j) {
    if (i == j) return true;
    if ((i == 1 && j == 2) || (i == 2 && j == 1)) return true;
    return allow_corner && ((i == 0 && j == 3) || (i == 3 && j == 0));
  };
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!allowed(i, j)) worst = std::max(worst, std::abs(rho4(i, j)));
    }
  }
  return worst;
}

ChannelModel reservoir2_model(TwoQubitReservoirParams p, double tol) {
  p.validate();
  ChannelModel model;
  model.id = p.kind == ReservoirKind::Thermal ? "thermal2" : "squeezed2";
  model.phi_min = 0.0;
  const bool corner = p.kind == ReservoirKind::Squeezed;
  model.trajectory = [p, tol, corner](double phi, std::span<const double> times) {
    TwoQubitReservoirParams q = p;
    q.m_or_r = phi;
    auto traj = integrate_trajectory(two_qubit_generator(q), bell_state(), times, tol);
    for (const auto& rho : traj.states) {
      if (forbidden_entry_magnitude(rho.matrix(), corner) > 1e-10) {
        throw std::runtime_error("reservoir2_model: evolved state left the expected sparsity pattern");
      }
    }
    return std::move(traj.states);
  };
  model.state = [traj = model.trajectory](double phi, double t) {
    const double times[] = {t};
    return std::move(traj(phi, times).front());
  };
  return model;
}

}  // namespace qprobe
