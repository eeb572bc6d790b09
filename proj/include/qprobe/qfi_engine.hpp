// Quantum Fisher information of one-parameter state families.

#pragma once

#include "qprobe/errors.hpp"
#include "qprobe/probe_models.hpp"
#include "qprobe/qstate.hpp"

#include <span>
#include <vector>

namespace qprobe {

/// p_i + p_j at or below this value drops the (i, j) term.
constexpr double kQfiDiscardThreshold = 1e-12;

struct QfiResult {
  double value = 0.0;
  int discarded_pairs = 0;
  double derivative_step = 0.0;  // 0 when the derivative was analytic
};

struct Derivative {
  CMatrix matrix;
  double step = 0.0;  // finite-difference step, 0 for the analytic path
};

/// Finite-difference step cbrt(eps) * max(1, |phi|).
double derivative_step(double phi);

/// Central difference (rho(phi+h) - rho(phi-h)) / 2h, Hermitian-symmetrized.
/// Falls back to the one-sided second-order stencil when phi - h leaves the
/// model's domain.
Derivative d_rho(const ChannelModel& model, double phi, double t);

/// Closed-form derivative. Throws std::logic_error if the model has none.
Derivative d_rho_analytic(const ChannelModel& model, double phi, double t);

/// d_rho at every time in a non-decreasing grid, using at most three
/// trajectory evaluations of the model.
std::vector<Derivative> d_rho_series(const ChannelModel& model, double phi, std::span<const double> times);

/// F = sum_{i,j : p_i + p_j > eps} 2 |<psi_i| d rho |psi_j>|^2 / (p_i + p_j)
/// over the eigenpairs of rho. Algebraically the same as the split
/// population/coherence form, without differentiating eigenvectors.
QfiResult qfi_spectral(const DensityMatrix& rho, const CMatrix& drho);

/// tr(rho L^2) with L the symmetric logarithmic derivative solved in the
/// eigenbasis of rho on its supported subspace.
double qfi_sld_oracle(const DensityMatrix& rho, const CMatrix& drho);

/// 4 (<dpsi|dpsi> - |<psi|dpsi>|^2) for a normalized pure state.
double qfi_pure_oracle(const CVector& psi, const CVector& dpsi);

/// T(m) = s / ln(1 + 1/m) for mean boson number m and scale s = hbar w / k_B.
double temperature_from_mean_number(double m, double freq_scale);
double mean_number_from_temperature(double T, double freq_scale);
/// dm/dT = (s / T^2) e^{s/T} / (e^{s/T} - 1)^2. Throws ParameterError for T <= 0.
double dm_dT(double T, double freq_scale);

/// F_Q(T) = F_Q(m) (dm/dT)^2 evaluated at T(m).
double qfi_temperature(double fq_m, double m, double freq_scale);

struct CramerRaoInput {
  double qfi = 0.0;
  int nu = 1;  // number of repetitions
};

/// 1 / sqrt(nu F_Q).
double cramer_rao(const CramerRaoInput& c);

}  // namespace qprobe
