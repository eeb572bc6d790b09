// Time sweeps of QFI and fidelity, maxima, information-backflow detection
// and the figure presets.

#pragma once

#include "qprobe/lindblad.hpp"
#include "qprobe/probe_models.hpp"
#include "qprobe/qfi_engine.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qprobe {

enum class ModelKind { Fock1, Thermal1, Squeezed1, Fock2, Thermal2, Squeezed2 };
enum class Estimand { Detuning, Temperature, Squeezing };

std::string to_string(ModelKind m);
std::string to_string(Estimand e);
std::optional<ModelKind> parse_model(const std::string& s);
std::optional<Estimand> parse_estimand(const std::string& s);

/// The only estimand each model family is parameterized by.
Estimand natural_estimand(ModelKind m);
bool is_two_qubit(ModelKind m);

struct TimeGrid {
  double t_min = 0.01;
  double t_max = 100.0;
  int count = 2000;

  void validate() const;
  std::vector<double> points() const;

  bool operator==(const TimeGrid&) const = default;
};

/// Flat parameter set; each model reads the fields it needs.
struct ScanConfig {
  ModelKind model = ModelKind::Fock1;
  Estimand estimand = Estimand::Detuning;
  TimeGrid grid;
  double alpha = std::numbers::pi / 4;  // radians
  double delta = 5.0;
  double lambda = 1.0;
  int n = 0;
  double m = 0.1;
  double r = 0.1;
  double gamma = 1.0;
  double freq_scale = 1.0;
  double integration_tol = kDefaultIntegrationTol;

  void validate() const;

  bool operator==(const ScanConfig&) const = default;
};

/// Value of the estimand-side parameter phi the model is differentiated in:
/// delta, m (temperature goes through the chain rule) or r.
double estimand_parameter(const ScanConfig& c);
ChannelModel make_model(const ScanConfig& c);

struct ScanRow {
  double t = 0.0;
  double qfi = 0.0;
  double fidelity = 0.0;

  bool operator==(const ScanRow&) const = default;
};

struct ScanDataset {
  ScanConfig config;
  std::string figure_tag;  // empty for ad-hoc scans
  std::string series;      // e.g. "alpha0", "two_qubit"
  std::vector<ScanRow> rows;
  std::size_t max_row = 0;

  bool operator==(const ScanDataset&) const = default;
};

/// Pointwise evaluation of one configuration, shared by scan() and the
/// maximum refinement.
class ScanEvaluator {
public:
  explicit ScanEvaluator(ScanConfig c);

  const ScanConfig& config() const noexcept { return config_; }

  /// QFI of the configured estimand at each time (time list non-decreasing).
  std::vector<double> qfi(std::span<const double> times) const;
  double qfi(double t) const;

  /// Fidelity between the initial and evolved state of the (first) atom.
  std::vector<double> fidelity(std::span<const double> times) const;

  /// Full QFI result with diagnostics, one time point.
  QfiResult qfi_detail(double t) const;

private:
  double to_estimand(double fq_phi) const;

  ScanConfig config_;
  ChannelModel model_;
  double phi_;
  DensityMatrix reference_;
};

ScanDataset scan(const ScanConfig& c);

struct MaxResult {
  double t = 0.0;
  double qfi = 0.0;
  std::size_t grid_index = 0;
};

/// Grid argmax, then golden-section refinement on the bracketing interval
/// using qfi_at; the result is never below the grid maximum. Throws
/// std::invalid_argument on an empty dataset.
MaxResult find_max(const ScanDataset& d, const std::function<double(double)>& qfi_at);
/// Same, refining with the dataset's own configuration.
MaxResult find_max(const ScanDataset& d);

constexpr double kGoldenTolerance = 1e-6;

struct Interval {
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Maximal runs where QFI strictly increases right after a stretch where it
/// strictly decreased. Differences within 1e-9 of the largest |QFI| are
/// treated as flat.
std::vector<Interval> backflow_intervals(const ScanDataset& d);

/// Figure tags: 1a 1b 2a 2b 3a 3b 4a 4b 4c 5a 5b 5c.
const std::vector<std::string>& figure_tags();
/// (series name, config) pairs for one figure. Throws std::invalid_argument on
/// an unknown tag.
std::vector<std::pair<std::string, ScanConfig>> figure_configs(const std::string& tag);
std::vector<ScanDataset> reproduce_figure(const std::string& tag);

/// Values quoted for the figures next to what this code computes.
struct DiscrepancyRow {
  std::string label;
  std::string figure;
  double target = 0.0;
  double computed = 0.0;
  double t_at_max = 0.0;

  double relative_difference() const { return (computed - target) / target; }
};

std::vector<DiscrepancyRow> discrepancy_report();

}  // namespace qprobe
