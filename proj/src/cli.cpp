#include "qprobe/cli.hpp"

#include "qprobe/csv_io.hpp"
#include "qprobe/scan_repro.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace qprobe::cli {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// I/O failures map to exit 1; everything else raised while running is a
// parameter problem (exit 2).
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  std::string model = "fock1";
  std::string estimand;
  double alpha_deg = 45.0;
  double delta = 5.0;
  double lambda = 1.0;
  int n = 0;
  double m = 0.1;
  double r = 0.1;
  double gamma = 1.0;
  double freq_scale = 1.0;
  double tol = kDefaultIntegrationTol;

  void attach(CLI::App* sub) {
    std::vector<std::string> names;
    for (auto k : {ModelKind::Fock1, ModelKind::Thermal1, ModelKind::Squeezed1, ModelKind::Fock2, ModelKind::Thermal2,
                   ModelKind::Squeezed2}) {
      names.push_back(to_string(k));
    }
    sub->add_option("--model", model, "Probe model")->check(CLI::IsMember(names));
    sub->add_option("--estimand", estimand, "detuning | temperature | squeezing (defaults to the model's)")
        ->check(CLI::IsMember({"detuning", "temperature", "squeezing"}));
    sub->add_option("--alpha", alpha_deg, "Initial-state angle in degrees");
    sub->add_option("--delta", delta, "Detuning");
    sub->add_option("--lambda", lambda, "Atom-field coupling");
    sub->add_option("--n", n, "Cavity photon number");
    sub->add_option("--m", m, "Thermal mean boson number");
    sub->add_option("--r", r, "Squeezing strength");
    sub->add_option("--gamma", gamma, "Decay rate");
    sub->add_option("--freq-scale", freq_scale, "hbar*omega0/k_B");
    sub->add_option("--tol", tol, "Integrator tolerance for two-qubit reservoir models");
  }

  ScanConfig config() const {
    ScanConfig c;
    c.model = *parse_model(model);
    c.estimand = estimand.empty() ? natural_estimand(c.model) : *parse_estimand(estimand);
    c.alpha = alpha_deg * kDeg;
    c.delta = delta;
    c.lambda = lambda;
    c.n = n;
    c.m = m;
    c.r = r;
    c.gamma = gamma;
    c.freq_scale = freq_scale;
    c.integration_tol = tol;
    return c;
  }
};

void write_dataset(const ScanDataset& d, const std::optional<std::filesystem::path>& path, std::ostream& out) {
  if (!path) {
    write_csv(d, out);
    return;
  }
  try {
    emit_csv(d, *path);
  } catch (const CsvError& e) {
    throw IoFailure(e.what());
  }
}

std::filesystem::path series_path(const std::filesystem::path& base, const std::string& series) {
  std::filesystem::path p = base;
  p.replace_filename(base.stem().string() + "_" + series + base.extension().string());
  return p;
}

int execute(CLI::App& app, const std::vector<std::string>& args, std::ostream& out) {
  app.require_subcommand(1);

  ModelFlags scan_flags;
  double tmin = 0.01;
  double tmax = 100.0;
  int points = 2000;
  std::optional<std::string> scan_out;
  auto* scan_cmd = app.add_subcommand("scan", "Sweep QFI and fidelity over a time grid, write CSV");
  scan_flags.attach(scan_cmd);
  scan_cmd->add_option("--tmin", tmin, "First grid time (> 0)");
  scan_cmd->add_option("--tmax", tmax, "Last grid time");
  scan_cmd->add_option("--points", points, "Number of grid points (>= 2)");
  scan_cmd->add_option("--out", scan_out, "Output CSV path (stdout if omitted)");

  std::string tag;
  std::optional<std::string> figure_out;
  auto* figure_cmd = app.add_subcommand("figure", "Regenerate the datasets behind one figure panel");
  figure_cmd->add_option("--tag", tag, "Figure tag")->required()->check(CLI::IsMember(figure_tags()));
  figure_cmd->add_option("--out", figure_out, "Base CSV path; one file per series (<stem>_<series>.csv)");

  ModelFlags point_flags;
  double t = 1.0;
  int nu = 1;
  auto* qfi_cmd = app.add_subcommand("qfi", "QFI and Cramer-Rao bound at a single time");
  point_flags.attach(qfi_cmd);
  qfi_cmd->add_option("--t", t, "Evolution time");
  qfi_cmd->add_option("--nu", nu, "Number of repetitions for the Cramer-Rao bound");

  auto* fid_cmd = app.add_subcommand("fidelity", "Initial-vs-evolved atomic fidelity at a single time");
  point_flags.attach(fid_cmd);
  fid_cmd->add_option("--t", t, "Evolution time");

  std::optional<std::string> report_out;
  auto* report_cmd = app.add_subcommand("report", "Compare computed maxima with the quoted figure values");
  report_cmd->add_option("--out", report_out, "Output CSV path (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);

  if (scan_cmd->parsed()) {
    ScanConfig c = scan_flags.config();
    c.grid = TimeGrid{tmin, tmax, points};
    const ScanDataset d = scan(c);
    write_dataset(d, scan_out ? std::optional<std::filesystem::path>(*scan_out) : std::nullopt, out);
  } else if (figure_cmd->parsed()) {
    const std::filesystem::path base = figure_out.value_or("fig" + tag + ".csv");
    for (const auto& d : reproduce_figure(tag)) {
      const auto path = series_path(base, d.series);
      write_dataset(d, path, out);
      out << path.string() << '\n';
    }
  } else if (qfi_cmd->parsed()) {
    ScanConfig c = point_flags.config();
    const ScanEvaluator eval(c);
    const QfiResult r = eval.qfi_detail(t);
    out << "qfi=" << format_double(r.value) << " discarded_pairs=" << r.discarded_pairs
        << " derivative_step=" << format_double(r.derivative_step);
    if (r.value > 0.0) out << " cramer_rao=" << format_double(cramer_rao({r.value, nu}));
    out << '\n';
  } else if (fid_cmd->parsed()) {
    ScanConfig c = point_flags.config();
    const ScanEvaluator eval(c);
    const double times[] = {t};
    out << "fidelity=" << format_double(eval.fidelity(times).front()) << '\n';
  } else if (report_cmd->parsed()) {
    std::ofstream file;
    std::ostream* os = &out;
    if (report_out) {
      file.open(*report_out, std::ios::binary | std::ios::trunc);
      if (!file) throw IoFailure("cannot open '" + *report_out + "' for writing");
      os = &file;
    }
    *os << "figure,label,target,computed,relative_difference,t_at_max\n";
    for (const auto& row : discrepancy_report()) {
      *os << row.figure << ",\"" << row.label << "\"," << format_double(row.target) << ','
          << format_double(row.computed) << ',' << format_double(row.relative_difference()) << ','
          << format_double(row.t_at_max) << '\n';
    }
    if (!*os) throw IoFailure("failed writing report");
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"QFI and fidelity of qubit probes in cavity and reservoir models", "qfi-probe"};
  try {
    return execute(app, args, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "qfi-probe: " << e.what() << '\n';
    return 2;
  } catch (const IoFailure& e) {
    err << "qfi-probe: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "qfi-probe: " << e.what() << '\n';
    return 2;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qprobe::cli
