#include "qprobe/scan_repro.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qprobe {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct ModelName {
  ModelKind kind;
  const char* name;
};

constexpr ModelName kModelNames[] = {
    {ModelKind::Fock1, "fock1"},       {ModelKind::Thermal1, "thermal1"}, {ModelKind::Squeezed1, "squeezed1"},
    {ModelKind::Fock2, "fock2"},       {ModelKind::Thermal2, "thermal2"}, {ModelKind::Squeezed2, "squeezed2"},
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

DensityMatrix atomic_state(const DensityMatrix& rho) {
  return rho.dim() == 4 ? reduce_A(rho) : rho;
}

}  // namespace

std::string to_string(ModelKind m) {
  for (const auto& e : kModelNames) {
    if (e.kind == m) return e.name;
  }
  return "unknown";
}

std::string to_string(Estimand e) {
  switch (e) {
    case Estimand::Detuning: return "detuning";
    case Estimand::Temperature: return "temperature";
    case Estimand::Squeezing: return "squeezing";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model(const std::string& s) {
  for (const auto& e : kModelNames) {
    if (s == e.name) return e.kind;
  }
  return std::nullopt;
}

std::optional<Estimand> parse_estimand(const std::string& s) {
  for (Estimand e : {Estimand::Detuning, Estimand::Temperature, Estimand::Squeezing}) {
    if (s == to_string(e)) return e;
  }
  return std::nullopt;
}

Estimand natural_estimand(ModelKind m) {
  switch (m) {
    case ModelKind::Fock1:
    case ModelKind::Fock2: return Estimand::Detuning;
    case ModelKind::Thermal1:
    case ModelKind::Thermal2: return Estimand::Temperature;
    case ModelKind::Squeezed1:
    case ModelKind::Squeezed2: return Estimand::Squeezing;
  }
  return Estimand::Detuning;
}

bool is_two_qubit(ModelKind m) {
  return m == ModelKind::Fock2 || m == ModelKind::Thermal2 || m == ModelKind::Squeezed2;
}

void TimeGrid::validate() const {
  require(std::isfinite(t_min) && t_min > 0.0, "time grid: t_min must be > 0");
  require(std::isfinite(t_max) && t_max > t_min, "time grid: t_max must exceed t_min");
  require(count >= 2, "time grid: count must be >= 2");
}

std::vector<double> TimeGrid::points() const {
  validate();
  std::vector<double> t(count);
  const double span = t_max - t_min;
  for (int k = 0; k < count; ++k) t[k] = t_min + span * (static_cast<double>(k) / (count - 1));
  t.back() = t_max;
  return t;
}

void ScanConfig::validate() const {
  grid.validate();
  require(estimand == natural_estimand(model),
          "estimand '" + to_string(estimand) + "' is not available for model '" + to_string(model) + "'");
  if (is_two_qubit(model)) {
    require(std::abs(alpha - std::numbers::pi / 4) <= 1e-12, "two-qubit probes start in the Bell state (alpha = 45)");
  }
  require(integration_tol >= 1e-12 && integration_tol <= 1e-6, "integration tolerance must lie in [1e-12, 1e-6]");
  make_model(*this);  // parameter ranges are enforced by the typed params
  if (estimand == Estimand::Temperature) temperature_from_mean_number(m, freq_scale);
}

double estimand_parameter(const ScanConfig& c) {
  switch (c.model) {
    case ModelKind::Fock1:
    case ModelKind::Fock2: return c.delta;
    case ModelKind::Thermal1:
    case ModelKind::Thermal2: return c.m;
    case ModelKind::Squeezed1:
    case ModelKind::Squeezed2: return c.r;
  }
  return 0.0;
}

ChannelModel make_model(const ScanConfig& c) {
  switch (c.model) {
    case ModelKind::Fock1: return fock1_detuning_model({c.delta, c.lambda, c.n, c.alpha});
    case ModelKind::Thermal1: return thermal1_mean_number_model({c.m, c.gamma, c.alpha, c.freq_scale});
    case ModelKind::Squeezed1: return squeezed1_strength_model({c.r, c.gamma, c.alpha, 0.0});
    case ModelKind::Fock2: return fock2_detuning_model({c.delta, c.lambda, c.alpha, c.n});
    case ModelKind::Thermal2:
      return reservoir2_model({ReservoirKind::Thermal, c.m, c.gamma, 0.0, 0.0}, c.integration_tol);
    case ModelKind::Squeezed2:
      return reservoir2_model({ReservoirKind::Squeezed, c.r, c.gamma, 0.0, 0.0}, c.integration_tol);
  }
  throw ParameterError("unsupported model");
}

ScanEvaluator::ScanEvaluator(ScanConfig c)
    : config_((c.validate(), std::move(c))),
      model_(make_model(config_)),
      phi_(estimand_parameter(config_)),
      reference_(atomic_state(model_.state(phi_, 0.0))) {}

double ScanEvaluator::to_estimand(double fq_phi) const {
  if (config_.estimand == Estimand::Temperature) return qfi_temperature(fq_phi, config_.m, config_.freq_scale);
  return fq_phi;
}

std::vector<double> ScanEvaluator::qfi(std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  if (model_.derivative) {
    for (double t : times) {
      out.push_back(to_estimand(qfi_spectral(model_.state(phi_, t), model_.derivative(phi_, t)).value));
    }
    return out;
  }
  const auto states = model_.states(phi_, times);
  const auto derivs = d_rho_series(model_, phi_, times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.push_back(to_estimand(qfi_spectral(states[i], derivs[i].matrix).value));
  }
  return out;
}

double ScanEvaluator::qfi(double t) const {
  const double times[] = {t};
  return qfi(times).front();
}

QfiResult ScanEvaluator::qfi_detail(double t) const {
  const DensityMatrix rho = model_.state(phi_, t);
  const Derivative d = model_.derivative ? d_rho_analytic(model_, phi_, t) : d_rho(model_, phi_, t);
  QfiResult r = qfi_spectral(rho, d.matrix);
  r.value = to_estimand(r.value);
  r.derivative_step = d.step;
  return r;
}

std::vector<double> ScanEvaluator::fidelity(std::span<const double> times) const {
  std::vector<double> out;
  out.reserve(times.size());
  for (const auto& rho : model_.states(phi_, times)) out.push_back(fidelity_bloch(reference_, atomic_state(rho)));
  return out;
}

ScanDataset scan(const ScanConfig& c) {
  const ScanEvaluator eval(c);
  const std::vector<double> t = c.grid.points();
  const std::vector<double> q = eval.qfi(t);
  const std::vector<double> f = eval.fidelity(t);
  ScanDataset d;
  d.config = c;
  d.rows.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(q[i] >= 0.0) || !std::isfinite(q[i])) {
      throw std::runtime_error("scan: non-finite or negative QFI at t = " + std::to_string(t[i]));
    }
    d.rows[i] = {t[i], q[i], f[i]};
  }
  d.max_row = static_cast<std::size_t>(
      std::max_element(d.rows.begin(), d.rows.end(), [](const auto& a, const auto& b) { return a.qfi < b.qfi; }) -
      d.rows.begin());
  return d;
}

MaxResult find_max(const ScanDataset& d, const std::function<double(double)>& qfi_at) {
  if (d.rows.empty()) throw std::invalid_argument("find_max: empty dataset");
  std::size_t best = 0;
  for (std::size_t i = 1; i < d.rows.size(); ++i) {
    if (d.rows[i].qfi > d.rows[best].qfi) best = i;
  }
  MaxResult out{d.rows[best].t, d.rows[best].qfi, best};
  if (d.rows.size() < 2 || !qfi_at) return out;

  double lo = d.rows[best == 0 ? 0 : best - 1].t;
  double hi = d.rows[std::min(best + 1, d.rows.size() - 1)].t;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = qfi_at(x1);
  double f2 = qfi_at(x2);
  while (hi - lo > kGoldenTolerance) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = qfi_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = qfi_at(x1);
    }
  }
  const double t_star = f1 >= f2 ? x1 : x2;
  const double q_star = std::max(f1, f2);
  if (q_star > out.qfi) {
    out.t = t_star;
    out.qfi = q_star;
  }
  return out;
}

MaxResult find_max(const ScanDataset& d) {
  if (d.rows.empty()) throw std::invalid_argument("find_max: empty dataset");
  const ScanEvaluator eval(d.config);
  return find_max(d, [&eval](double t) { return eval.qfi(t); });
}

std::vector<Interval> backflow_intervals(const ScanDataset& d) {
  std::vector<Interval> out;
  if (d.rows.size() < 3) return out;
  double scale = 0.0;
  for (const auto& r : d.rows) scale = std::max(scale, std::abs(r.qfi));
  const double flat = 1e-9 * scale;

  int last_nonzero = 0;
  std::optional<std::size_t> run_start;
  for (std::size_t i = 0; i + 1 < d.rows.size(); ++i) {
    const double diff = d.rows[i + 1].qfi - d.rows[i].qfi;
    const int sign = diff > flat ? 1 : (diff < -flat ? -1 : 0);
    if (sign == 1) {
      if (!run_start && last_nonzero == -1) run_start = i;
    } else if (run_start) {
      out.push_back({d.rows[*run_start].t, d.rows[i].t});
      run_start.reset();
    }
    if (sign != 0) last_nonzero = sign;
  }
  if (run_start) out.push_back({d.rows[*run_start].t, d.rows.back().t});
  return out;
}

const std::vector<std::string>& figure_tags() {
  static const std::vector<std::string> tags{"1a", "1b", "2a", "2b", "3a", "3b", "4a", "4b", "4c", "5a", "5b", "5c"};
  return tags;
}

std::vector<std::pair<std::string, ScanConfig>> figure_configs(const std::string& tag) {
  const auto& tags = figure_tags();
  if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
    throw std::invalid_argument("unknown figure tag '" + tag + "'");
  }
  const char family = tag[0];
  const char panel = tag[1];

  auto base = [](ModelKind model) {
    ScanConfig c;
    c.model = model;
    c.estimand = natural_estimand(model);
    const bool fock = model == ModelKind::Fock1 || model == ModelKind::Fock2;
    c.grid = TimeGrid{0.01, fock ? 100.0 : 50.0, 2000};
    c.delta = 5.0;
    c.lambda = 1.0;
    c.n = 0;
    c.m = 0.1;
    c.r = 0.1;
    c.gamma = 1.0;
    c.freq_scale = 1.0;
    return c;
  };

  std::vector<std::pair<std::string, ScanConfig>> out;
  if (family == '1' || family == '2' || family == '3') {
    const ModelKind model = family == '1' ? ModelKind::Fock1 : family == '2' ? ModelKind::Thermal1 : ModelKind::Squeezed1;
    for (int deg : {0, 45}) {
      ScanConfig c = base(model);
      c.alpha = deg * kDeg;
      out.emplace_back("alpha" + std::to_string(deg), c);
    }
    return out;
  }
  const ModelKind one = panel == 'a' ? ModelKind::Fock1 : panel == 'b' ? ModelKind::Thermal1 : ModelKind::Squeezed1;
  const ModelKind two = panel == 'a' ? ModelKind::Fock2 : panel == 'b' ? ModelKind::Thermal2 : ModelKind::Squeezed2;
  ScanConfig c1 = base(one);
  c1.alpha = 45 * kDeg;
  ScanConfig c2 = base(two);
  c2.alpha = 45 * kDeg;
  out.emplace_back("one_qubit", c1);
  out.emplace_back("two_qubit", c2);
  return out;
}

std::vector<ScanDataset> reproduce_figure(const std::string& tag) {
  std::vector<ScanDataset> out;
  for (auto& [series, config] : figure_configs(tag)) {
    ScanDataset d = scan(config);
    d.figure_tag = tag;
    d.series = series;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<DiscrepancyRow> discrepancy_report() {
  struct Target {
    const char* label;
    const char* figure;
    std::size_t series;
    double value;
  };
  const Target targets[] = {
      {"one-qubit detuning, alpha=0", "1a", 0, 1.14e3},
      {"one-qubit detuning, alpha=45", "1a", 1, 1.18e3},
      {"one-qubit temperature, alpha=45", "2a", 1, 80.0},
      {"one-qubit squeezing, alpha=45 (value quoted with the one-qubit discussion)", "3a", 1, 5.41e2},
      {"two-qubit detuning", "4a", 1, 1.58e3},
      {"two-qubit temperature", "4b", 1, 5.0},
      {"two-qubit squeezing", "4c", 1, 1.21e3},
  };
  std::vector<DiscrepancyRow> out;
  for (const auto& target : targets) {
    auto configs = figure_configs(target.figure);
    ScanDataset d = scan(configs.at(target.series).second);
    const MaxResult mx = find_max(d);
    out.push_back({target.label, target.figure, target.value, mx.qfi, mx.t});
  }
  return out;
}

}  // namespace qprobe
