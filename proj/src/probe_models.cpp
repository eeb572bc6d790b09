#include "qprobe/probe_models.hpp"

#include <cmath>

namespace qprobe {

namespace {

constexpr double kAngleSlack = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

void require_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha >= -kAngleSlack && alpha <= std::numbers::pi / 2 + kAngleSlack,
          "alpha must lie in [0, pi/2], got " + std::to_string(alpha));
}

void require_time(double t) {
  require(std::isfinite(t) && t >= 0.0, "time must be >= 0, got " + std::to_string(t));
}

// Shared structure of the thermal and squeezed solutions: populations relax
// to occupation / (2 occupation + 1) at rate gamma (2 occupation + 1), the
// real coherence decays at coherence_rate.
CMatrix relaxing_qubit(double occupation, double gamma, double coherence_rate, double alpha, double t) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double q = occupation / (2.0 * occupation + 1.0);
  const double relax = std::exp(-gamma * (2.0 * occupation + 1.0) * t);
  const double excited = q + (c * c - q) * relax;
  const double coherence = c * s * std::exp(-coherence_rate * t);
  CMatrix rho(2, 2);
  rho << excited, coherence, coherence, 1.0 - excited;
  return rho;
}

// Derivative of relaxing_qubit with respect to a parameter on which the
// occupation and coherence rate depend with slopes d_occupation and
// d_coherence_rate.
CMatrix relaxing_qubit_derivative(double occupation, double d_occupation, double gamma, double coherence_rate,
                                  double d_coherence_rate, double alpha, double t) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const double width = 2.0 * occupation + 1.0;
  const double q = occupation / width;
  const double dq = d_occupation / (width * width);
  const double relax = std::exp(-gamma * width * t);
  const double d_relax = -2.0 * gamma * t * d_occupation * relax;
  const double d_excited = dq * (1.0 - relax) + (c * c - q) * d_relax;
  const double d_coherence = -t * d_coherence_rate * c * s * std::exp(-coherence_rate * t);
  CMatrix d(2, 2);
  d << d_excited, d_coherence, d_coherence, -d_excited;
  return d;
}

}  // namespace

void FockParams::validate() const {
  require(std::isfinite(delta), "delta must be finite");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be > 0");
  require(n >= 0, "photon number n must be >= 0");
  require_alpha(alpha);
}

double FockParams::rabi() const { return 2.0 * lambda * std::sqrt(n + 1.0); }

double FockParams::detuned_rabi() const { return std::hypot(rabi(), delta); }

void ThermalParams::validate() const {
  require(m >= 0.0 && std::isfinite(m), "mean boson number m must be >= 0");
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
  require(freq_scale > 0.0 && std::isfinite(freq_scale), "freq_scale must be > 0");
  require_alpha(alpha);
}

void SqueezedParams::validate() const {
  require(r >= 0.0 && std::isfinite(r), "squeezing strength r must be >= 0");
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
  require(theta == 0.0, "only squeezing phase theta = 0 is supported");
  require_alpha(alpha);
}

double SqueezedParams::M() const {
  const double sh = std::sinh(r);
  return sh * sh;
}

double SqueezedParams::N() const { return std::cosh(r) * std::sinh(r); }

void TwoQubitFockParams::validate() const {
  require(std::isfinite(delta), "delta must be finite");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be > 0");
  require(n == 0, "two-qubit Fock model is closed-form only for n = 0");
  require(std::abs(alpha - std::numbers::pi / 4) <= kAngleSlack, "two-qubit Fock model requires alpha = pi/4");
}

double TwoQubitFockParams::rabi() const { return std::sqrt(8.0 * lambda * lambda + delta * delta); }

FockAmplitudes fock1_amplitudes(const FockParams& p, double t) {
  p.validate();
  require_time(t);
  const Complex I(0.0, 1.0);
  const double om = p.rabi();
  const double omt = p.detuned_rabi();
  const double c = std::cos(0.5 * omt * t);
  const double s = std::sin(0.5 * omt * t);
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const Complex phase = std::exp(I * (0.5 * p.delta * t));
  const Complex b1 = phase * (ca * (c - I * (p.delta / omt) * s) - I * sa * (om / omt) * s);
  const Complex b2 = std::conj(phase) * (sa * (c + I * (p.delta / omt) * s) - I * ca * (om / omt) * s);
  return {b1, b2};
}

DensityMatrix fock1_state(const FockParams& p, double t) {
  const auto [b1, b2] = fock1_amplitudes(p, t);
  CMatrix rho = CMatrix::Zero(2, 2);
  rho(0, 0) = std::norm(b1);
  rho(1, 1) = std::norm(b2);
  return validate_density(rho);
}

DensityMatrix thermal1_state(const ThermalParams& p, double t) {
  p.validate();
  require_time(t);
  return validate_density(relaxing_qubit(p.m, p.gamma, p.gamma * (p.m + 0.5), p.alpha, t));
}

CMatrix thermal1_dm(const ThermalParams& p, double t) {
  p.validate();
  require_time(t);
  return relaxing_qubit_derivative(p.m, 1.0, p.gamma, p.gamma * (p.m + 0.5), p.gamma, p.alpha, t);
}

DensityMatrix squeezed1_state(const SqueezedParams& p, double t) {
  p.validate();
  require_time(t);
  const double M = p.M();
  const double N = p.N();
  return validate_density(relaxing_qubit(M, p.gamma, p.gamma * (M + N + 0.5), p.alpha, t));
}

CMatrix squeezed1_dr(const SqueezedParams& p, double t) {
  p.validate();
  require_time(t);
  const double M = p.M();
  const double N = p.N();
  const double dM = std::sinh(2.0 * p.r);
  const double dN = std::cosh(2.0 * p.r);
  return relaxing_qubit_derivative(M, dM, p.gamma, p.gamma * (M + N + 0.5), p.gamma * (dM + dN), p.alpha, t);
}

TwoQubitAmplitudes fock2_amplitudes(const TwoQubitFockParams& p, double t) {
  p.validate();
  require_time(t);
  const Complex I(0.0, 1.0);
  const double om = p.rabi();
  const double ca = std::cos(p.alpha);
  const double sa = std::sin(p.alpha);
  const double c = std::cos(0.5 * om * t);
  const double s = std::sin(0.5 * om * t);
  const Complex phase = std::exp(I * (0.5 * p.delta * t));
  const Complex symmetric = 0.5 * (ca + sa) * (c - I * (p.delta / om) * s) * phase;
  const Complex eg = symmetric + 0.5 * (ca - sa);
  const Complex ge = symmetric + 0.5 * (sa - ca);
  const Complex gg = -(ca + sa) * (2.0 * I * p.lambda / om) * s * std::conj(phase);
  return {eg, ge, gg};
}

DensityMatrix fock2_state(const TwoQubitFockParams& p, double t) {
  const auto [eg, ge, gg] = fock2_amplitudes(p, t);
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(1, 1) = std::norm(eg);
  rho(1, 2) = eg * std::conj(ge);
  rho(2, 1) = ge * std::conj(eg);
  rho(2, 2) = std::norm(ge);
  rho(3, 3) = std::norm(gg);
  return validate_density(rho);
}

DensityMatrix reduce_A(const DensityMatrix& rho4) {
  return partial_trace_B(rho4);
}

DensityMatrix superposition_state(double alpha) {
  CVector psi(2);
  psi << std::cos(alpha), std::sin(alpha);
  return validate_density(pure_state(psi));
}

DensityMatrix bell_state() {
  CVector psi = CVector::Zero(4);
  psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
  return validate_density(pure_state(psi));
}

std::vector<DensityMatrix> ChannelModel::states(double phi, std::span<const double> times) const {
  if (trajectory) return trajectory(phi, times);
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(state(phi, t));
  return out;
}

ChannelModel fock1_detuning_model(FockParams p) {
  p.validate();
  ChannelModel model;
  model.id = "fock1";
  model.state = [p](double delta, double t) {
    FockParams q = p;
    q.delta = delta;
    return fock1_state(q, t);
  };
  return model;
}

ChannelModel thermal1_mean_number_model(ThermalParams p) {
  p.validate();
  ChannelModel model;
  model.id = "thermal1";
  model.phi_min = 0.0;
  model.state = [p](double m, double t) {
    ThermalParams q = p;
    q.m = m;
    return thermal1_state(q, t);
  };
  model.derivative = [p](double m, double t) {
    ThermalParams q = p;
    q.m = m;
    return thermal1_dm(q, t);
  };
  return model;
}

ChannelModel squeezed1_strength_model(SqueezedParams p) {
  p.validate();
  ChannelModel model;
  model.id = "squeezed1";
  model.phi_min = 0.0;
  model.state = [p](double r, double t) {
    SqueezedParams q = p;
    q.r = r;
    return squeezed1_state(q, t);
  };
  model.derivative = [p](double r, double t) {
    SqueezedParams q = p;
    q.r = r;
    return squeezed1_dr(q, t);
  };
  return model;
}

ChannelModel fock2_detuning_model(TwoQubitFockParams p) {
  p.validate();
  ChannelModel model;
  model.id = "fock2";
  model.state = [p](double delta, double t) {
    TwoQubitFockParams q = p;
    q.delta = delta;
    return fock2_state(q, t);
  };
  return model;
}

}  // namespace qprobe
