#include "qprobe/qfi_engine.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qprobe {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

void require_same_dim(const DensityMatrix& rho, const CMatrix& drho, const char* op) {
  if (drho.rows() != rho.dim() || drho.cols() != rho.dim()) {
    throw StateError(StateError::Kind::DimensionMismatch,
                     std::string(op) + ": derivative is " + std::to_string(drho.rows()) + "x" +
                         std::to_string(drho.cols()) + ", state is " + std::to_string(rho.dim()) + "-dimensional");
  }
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Stencil weights applied to samples at phi + offsets[k] * h.
struct Stencil {
  std::array<double, 3> offsets;
  std::array<double, 3> weights;  // already divided by 2
};

constexpr Stencil kCentral{{-1.0, 1.0, 0.0}, {-0.5, 0.5, 0.0}};
constexpr Stencil kForward{{0.0, 1.0, 2.0}, {-1.5, 2.0, -0.5}};

const Stencil& pick_stencil(const ChannelModel& model, double phi, double h) {
  return phi - h < model.phi_min ? kForward : kCentral;
}

}  // namespace

double derivative_step(double phi) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::abs(phi));
}

Derivative d_rho(const ChannelModel& model, double phi, double t) {
  const double times[] = {t};
  return std::move(d_rho_series(model, phi, times).front());
}

std::vector<Derivative> d_rho_series(const ChannelModel& model, double phi, std::span<const double> times) {
  const double h = derivative_step(phi);
  const Stencil& st = pick_stencil(model, phi, h);
  std::vector<Derivative> out(times.size());
  for (auto& d : out) d.step = h;
  for (int k = 0; k < 3; ++k) {
    if (st.weights[k] == 0.0) continue;
    const auto states = model.states(phi + st.offsets[k] * h, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (out[i].matrix.size() == 0) out[i].matrix = CMatrix::Zero(states[i].dim(), states[i].dim());
      out[i].matrix += (st.weights[k] / h) * states[i].matrix();
    }
  }
  for (auto& d : out) d.matrix = hermitian_part(d.matrix);
  return out;
}

Derivative d_rho_analytic(const ChannelModel& model, double phi, double t) {
  if (!model.derivative) throw std::logic_error("d_rho_analytic: model '" + model.id + "' has no closed-form derivative");
  return {model.derivative(phi, t), 0.0};
}

QfiResult qfi_spectral(const DensityMatrix& rho, const CMatrix& drho) {
  require_same_dim(rho, drho, "qfi_spectral");
  const EigenSystem es = eig_hermitian(rho);
  const RVector p = es.values.cwiseMax(0.0);
  const CMatrix d = es.vectors.adjoint() * drho * es.vectors;
  QfiResult out;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const double denom = p[i] + p[j];
      if (denom <= kQfiDiscardThreshold) {
        ++out.discarded_pairs;
        continue;
      }
      sum += 2.0 * std::norm(d(i, j)) / denom;
    }
  }
  out.value = sum;
  return out;
}

double qfi_sld_oracle(const DensityMatrix& rho, const CMatrix& drho) {
  require_same_dim(rho, drho, "qfi_sld_oracle");
  const EigenSystem es = eig_hermitian(rho);
  const RVector p = es.values.cwiseMax(0.0);
  const CMatrix& V = es.vectors;
  CMatrix L = V.adjoint() * drho * V;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const double denom = p[i] + p[j];
      L(i, j) = denom > kQfiDiscardThreshold ? 2.0 * L(i, j) / denom : Complex(0.0);
    }
  }
  L = V * L * V.adjoint();
  return (rho.matrix() * L * L).trace().real();
}

double qfi_pure_oracle(const CVector& psi, const CVector& dpsi) {
  if (psi.size() != dpsi.size()) {
    throw StateError(StateError::Kind::DimensionMismatch, "qfi_pure_oracle: vector sizes differ");
  }
  const double norm = psi.squaredNorm();
  require(std::abs(norm - 1.0) <= 1e-10, "qfi_pure_oracle: psi must be normalized");
  const Complex overlap = psi.dot(dpsi);  // <psi|dpsi>
  return 4.0 * (dpsi.squaredNorm() - std::norm(overlap));
}

double temperature_from_mean_number(double m, double freq_scale) {
  require(m > 0.0 && std::isfinite(m), "temperature_from_mean_number: m must be > 0 (T <= 0 otherwise)");
  require(freq_scale > 0.0, "temperature_from_mean_number: freq_scale must be > 0");
  return freq_scale / std::log1p(1.0 / m);
}

double mean_number_from_temperature(double T, double freq_scale) {
  require(T > 0.0 && std::isfinite(T), "mean_number_from_temperature: T must be > 0");
  require(freq_scale > 0.0, "mean_number_from_temperature: freq_scale must be > 0");
  return 1.0 / std::expm1(freq_scale / T);
}

double dm_dT(double T, double freq_scale) {
  require(T > 0.0 && std::isfinite(T), "dm_dT: T must be > 0");
  require(freq_scale > 0.0, "dm_dT: freq_scale must be > 0");
  // e^x / (e^x - 1)^2 = 1 / (4 sinh^2(x/2))
  const double x = freq_scale / T;
  const double sh = std::sinh(0.5 * x);
  return (freq_scale / (T * T)) / (4.0 * sh * sh);
}

double qfi_temperature(double fq_m, double m, double freq_scale) {
  const double T = temperature_from_mean_number(m, freq_scale);
  const double slope = dm_dT(T, freq_scale);
  return fq_m * slope * slope;
}

double cramer_rao(const CramerRaoInput& c) {
  require(c.qfi > 0.0 && std::isfinite(c.qfi), "cramer_rao: qfi must be > 0");
  require(c.nu >= 1, "cramer_rao: nu must be a positive integer");
  return 1.0 / std::sqrt(c.nu * c.qfi);
}

}  // namespace qprobe
