// Master-equation generators and an adaptive fourth-order integrator.

#pragma once

#include "qprobe/errors.hpp"
#include "qprobe/probe_models.hpp"
#include "qprobe/qstate.hpp"

#include <span>
#include <vector>

namespace qprobe {

/// rate * (L rho L^dag - {L^dag L, rho} / 2)
struct JumpTerm {
  CMatrix op;
  double rate = 0.0;
};

/// rate * left rho right. Used for the two-photon terms of a squeezed bath;
/// rate may carry either sign.
struct CrossTerm {
  CMatrix left;
  CMatrix right;
  double rate = 0.0;
};

/// d rho / dt = -i [H, rho] + sum_k jump_k + sum_k cross_k. Immutable once built;
/// the column-stacked superoperator is assembled at construction.
class LindbladGenerator {
public:
  LindbladGenerator(int dim, std::vector<JumpTerm> jumps, std::vector<CrossTerm> cross = {},
                    CMatrix hamiltonian = {});

  int dim() const noexcept { return dim_; }
  const std::vector<JumpTerm>& jumps() const noexcept { return jumps_; }
  const std::vector<CrossTerm>& cross_terms() const noexcept { return cross_; }
  const CMatrix& hamiltonian() const noexcept { return hamiltonian_; }

  /// L[rho] evaluated term by term in matrix form.
  CMatrix apply(const CMatrix& rho) const;

  /// Matrix acting on vec(rho) (column stacking), dim^2 x dim^2.
  const CMatrix& superoperator() const noexcept { return super_; }

private:
  int dim_;
  std::vector<JumpTerm> jumps_;
  std::vector<CrossTerm> cross_;
  CMatrix hamiltonian_;
  CMatrix super_;
};

/// sigma_- = |g><e| and sigma_+ = |e><g| in the (|e>, |g>) basis.
CMatrix sigma_minus();
CMatrix sigma_plus();

/// Tensor lifts of a single-qubit operator onto qubit A or B of a pair.
CMatrix on_qubit_A(const CMatrix& op);
CMatrix on_qubit_B(const CMatrix& op);

LindbladGenerator thermal_generator(double m, double gamma);
/// Squeezed vacuum with phase theta = 0.
LindbladGenerator squeezed_generator(double r, double gamma);

enum class ReservoirKind { Thermal, Squeezed };

/// Identical independent baths on both qubits: a = 0, gamma_1 = gamma_2,
/// m_1 = m_2 (or r_1 = r_2), theta = 0.
struct TwoQubitReservoirParams {
  ReservoirKind kind = ReservoirKind::Thermal;
  double m_or_r = 0.1;
  double gamma = 1.0;
  double a = 0.0;      // dipole-dipole coupling; only 0 is supported
  double theta = 0.0;  // squeezing phase; only 0 is supported

  void validate() const;
};

LindbladGenerator two_qubit_generator(const TwoQubitReservoirParams& p);

struct IntegrationStats {
  long accepted_steps = 0;
  long rejected_steps = 0;
  double smallest_step = 0.0;
  double max_trace_error = 0.0;        // over every accepted step
  double max_hermiticity_error = 0.0;  // over every accepted step
  double min_eigenvalue = 0.0;         // over the returned states, before clamping
};

struct Trajectory {
  std::vector<DensityMatrix> states;  // one per requested time
  IntegrationStats stats;
};

constexpr double kDefaultIntegrationTol = 1e-10;

/// Classical RK4 with step-doubling control: every step is compared against
/// two half steps and halved until the discrepancy is <= tol; the accepted
/// value is the Richardson-corrected half-step result. Times must be
/// non-decreasing and >= 0. Throws ParameterError for tol outside
/// [1e-12, 1e-6] and StepUnderflow if the step drops below 1e-12 * t_end.
Trajectory integrate_trajectory(const LindbladGenerator& g, const DensityMatrix& rho0,
                                std::span<const double> times, double tol = kDefaultIntegrationTol);

DensityMatrix integrate(const LindbladGenerator& g, const DensityMatrix& rho0, double t_end,
                        double tol = kDefaultIntegrationTol);

/// Largest |entry| outside the sparsity pattern a two-qubit state evolved
/// from the Bell state must keep: the {11, 22, 23, 32, 33, 44} block, plus
/// the 14/41 corner when allow_corner is set (squeezed bath).
double forbidden_entry_magnitude(const CMatrix& rho4, bool allow_corner);

/// Bell-state probe in two identical baths; phi is m (thermal) or r (squeezed).
ChannelModel reservoir2_model(TwoQubitReservoirParams p, double tol = kDefaultIntegrationTol);

}  // namespace qprobe
