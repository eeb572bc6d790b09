// Closed-form evolved states for the one- and two-qubit probes.

#pragma once

#include "qprobe/errors.hpp"
#include "qprobe/qstate.hpp"

#include <array>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace qprobe {

/// One qubit coupled to a single-mode cavity holding n photons.
struct FockParams {
  double delta = 5.0;   // detuning, omega_0 - omega
  double lambda = 1.0;  // atom-field coupling
  int n = 0;
  double alpha = std::numbers::pi / 4;

  void validate() const;
  double rabi() const;          // 2 lambda sqrt(n + 1)
  double detuned_rabi() const;  // sqrt(rabi^2 + delta^2)
};

/// One qubit in a thermal reservoir with mean boson number m.
struct ThermalParams {
  double m = 0.1;
  double gamma = 1.0;
  double alpha = std::numbers::pi / 4;
  double freq_scale = 1.0;  // hbar omega_0 / k_B

  void validate() const;
};

/// One qubit in a squeezed vacuum reservoir. Only theta = 0 is supported.
struct SqueezedParams {
  double r = 0.1;
  double gamma = 1.0;
  double alpha = std::numbers::pi / 4;
  double theta = 0.0;

  void validate() const;
  double M() const;  // sinh^2 r
  double N() const;  // cosh r sinh r
};

/// Two qubits sharing one cavity mode, vacuum field, Bell initial state.
struct TwoQubitFockParams {
  double delta = 5.0;
  double lambda = 1.0;
  double alpha = std::numbers::pi / 4;
  int n = 0;

  void validate() const;
  double rabi() const;  // sqrt(8 lambda^2 + delta^2)
};

struct FockAmplitudes {
  Complex excited;  // on |e, n>
  Complex ground;   // on |g, n+1>
};

struct TwoQubitAmplitudes {
  Complex eg;  // |e_A g_B, 0>
  Complex ge;  // |g_A e_B, 0>
  Complex gg;  // |g_A g_B, 1>
};

FockAmplitudes fock1_amplitudes(const FockParams& p, double t);
DensityMatrix fock1_state(const FockParams& p, double t);

DensityMatrix thermal1_state(const ThermalParams& p, double t);
/// d rho / d m of the thermal solution.
CMatrix thermal1_dm(const ThermalParams& p, double t);

DensityMatrix squeezed1_state(const SqueezedParams& p, double t);
/// d rho / d r of the squeezed solution, chained through M(r) and N(r).
CMatrix squeezed1_dr(const SqueezedParams& p, double t);

TwoQubitAmplitudes fock2_amplitudes(const TwoQubitFockParams& p, double t);
DensityMatrix fock2_state(const TwoQubitFockParams& p, double t);

/// Reduced state of qubit A. Throws StateError(DimensionMismatch) for a
/// one-qubit input.
DensityMatrix reduce_A(const DensityMatrix& rho4);

/// cos(alpha)|e> + sin(alpha)|g>.
DensityMatrix superposition_state(double alpha);
/// (|e_A g_B> + |g_A e_B>) / sqrt(2).
DensityMatrix bell_state();

/// A one-parameter family rho(phi; t). phi is the estimand the family is
/// differentiated against.
struct ChannelModel {
  using StateFn = std::function<DensityMatrix(double phi, double t)>;
  using DerivativeFn = std::function<CMatrix(double phi, double t)>;
  using TrajectoryFn = std::function<std::vector<DensityMatrix>(double phi, std::span<const double> times)>;

  std::string id;
  StateFn state;
  /// Empty when no closed-form derivative exists.
  DerivativeFn derivative;
  /// Optional batch evaluator over increasing times; defaults to repeated state().
  TrajectoryFn trajectory;
  /// Lower edge of the admissible phi domain.
  double phi_min = -std::numeric_limits<double>::infinity();

  std::vector<DensityMatrix> states(double phi, std::span<const double> times) const;
};

/// phi = delta.
ChannelModel fock1_detuning_model(FockParams p);
/// phi = m.
ChannelModel thermal1_mean_number_model(ThermalParams p);
/// phi = r.
ChannelModel squeezed1_strength_model(SqueezedParams p);
/// phi = delta.
ChannelModel fock2_detuning_model(TwoQubitFockParams p);

}  // namespace qprobe
