#include "qprobe/cli.hpp"
#include "qprobe/csv_io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qprobe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qfi_probe_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("figure 2a writes one file per series") {
  const fs::path base = scratch("fig2a.csv");
  const Outcome o = invoke({"figure", "--tag", "2a", "--out", base.string()});
  REQUIRE(o.code == 0);
  CHECK(o.err.empty());
  const auto printed = lines(o.out);
  REQUIRE(printed.size() == 2);
  for (const std::string series : {"alpha0", "alpha45"}) {
    const fs::path p = scratch("fig2a_" + series + ".csv");
    CHECK(std::find(printed.begin(), printed.end(), p.string()) != printed.end());
    const auto content = lines(slurp(p));
    const auto header = std::find(content.begin(), content.end(), "t,qfi,fidelity");
    REQUIRE(header != content.end());
    CHECK(std::all_of(content.begin(), header, [](const std::string& l) { return l.starts_with("#"); }));
    CHECK(content.end() - header - 1 == 2000);
    CHECK(slurp(p).find('\r') == std::string::npos);
  }
}

TEST_CASE("executable runs the thermal temperature scan") {
  const fs::path out = scratch("thermal_T.csv");
  const std::string cmd = std::string(QFI_PROBE_EXE) +
                          " scan --model thermal1 --estimand temperature --m 0.1 --gamma 1 --alpha 45"
                          " --tmin 0.01 --tmax 50 --points 2000 --out " +
                          out.string();
  REQUIRE(shell(cmd) == 0);
  const ScanDataset d = read_csv(out);
  CHECK(d.rows.size() == 2000);
  CHECK(d.config.model == ModelKind::Thermal1);
  CHECK(d.config.estimand == Estimand::Temperature);
  CHECK(std::abs(d.rows.back().qfi - 2.5256) <= 1e-3);
}

TEST_CASE("usage errors exit 2 with a one-line diagnostic") {
  const Outcome bad_model = invoke({"scan", "--model", "nosuch"});
  CHECK(bad_model.code == 2);
  CHECK(bad_model.err.find("--model") != std::string::npos);
  CHECK(bad_model.err.starts_with("qfi-probe: "));
  CHECK(lines(bad_model.err).size() == 1);
  CHECK(bad_model.out.empty());

  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"scan", "--no-such-flag", "1"}).code == 2);
  CHECK(invoke({"figure", "--tag", "7q"}).code == 2);
  CHECK(invoke({"figure"}).code == 2);

  const Outcome bad_param = invoke({"scan", "--model", "thermal1", "--gamma", "-1"});
  CHECK(bad_param.code == 2);
  CHECK(lines(bad_param.err).size() == 1);
  CHECK(invoke({"scan", "--model", "fock2", "--alpha", "30"}).code == 2);
  CHECK(invoke({"scan", "--model", "fock1", "--tmin", "0"}).code == 2);
  CHECK(invoke({"scan", "--model", "fock1", "--estimand", "temperature"}).code == 2);

  CHECK(shell(std::string(QFI_PROBE_EXE) + " scan --model nosuch 2>/dev/null") == 2);
}

TEST_CASE("unwritable output exits 1") {
  const Outcome o = invoke({"scan", "--model", "fock1", "--points", "5", "--out", "/nonexistent-dir/x/out.csv"});
  CHECK(o.code == 1);
  CHECK(lines(o.err).size() == 1);
  CHECK(invoke({"report", "--out", "/nonexistent-dir/x/report.csv"}).code == 1);
}

TEST_CASE("help exits 0") {
  const Outcome o = invoke({"--help"});
  CHECK(o.code == 0);
  CHECK(o.out.find("scan") != std::string::npos);
  CHECK(invoke({"scan", "--help"}).code == 0);
}

TEST_CASE("single-point subcommands") {
  const Outcome q = invoke({"qfi", "--model", "thermal1", "--estimand", "temperature", "--t", "60"});
  REQUIRE(q.code == 0);
  CHECK(q.out.starts_with("qfi="));
  CHECK(std::abs(std::stod(q.out.substr(4)) - 2.5256) <= 1e-3);
  CHECK(q.out.find("cramer_rao=") != std::string::npos);
  CHECK(q.out.find("discarded_pairs=0") != std::string::npos);

  const Outcome fd = invoke({"qfi", "--model", "fock1", "--t", "1"});
  REQUIRE(fd.code == 0);
  CHECK(fd.out.find("derivative_step=" + format_double(derivative_step(5.0))) != std::string::npos);

  const Outcome f = invoke({"fidelity", "--model", "fock2", "--t", "0"});
  REQUIRE(f.code == 0);
  CHECK(f.out == "fidelity=1\n");
}

TEST_CASE("CSV layout of a two-row dataset") {
  ScanConfig c;
  c.model = ModelKind::Squeezed1;
  c.estimand = Estimand::Squeezing;
  c.grid = {1.0, 2.0, 2};
  const ScanDataset d = scan(c);
  std::ostringstream os;
  write_csv(d, os);
  const auto l = lines(os.str());
  const auto header = std::find(l.begin(), l.end(), "t,qfi,fidelity");
  REQUIRE(header != l.end());
  CHECK(l.end() - header - 1 == 2);
  CHECK(header - l.begin() >= 2);
  CHECK(os.str().back() == '\n');
}

TEST_CASE("CSV round-trip is bit-exact") {
  for (const auto& tag : {"1a", "4c"}) {
    for (const auto& d : reproduce_figure(tag)) {
      std::stringstream ss;
      write_csv(d, ss);
      const ScanDataset back = parse_csv(ss);
      CHECK(back == d);
      for (std::size_t k = 0; k < d.rows.size(); ++k) {
        REQUIRE(std::bit_cast<std::uint64_t>(back.rows[k].qfi) == std::bit_cast<std::uint64_t>(d.rows[k].qfi));
      }
    }
  }
  std::istringstream crlf("# figure=\r\nt,qfi,fidelity\r\n");
  CHECK_THROWS_AS(parse_csv(crlf), CsvError);
  std::istringstream junk("t,qfi,fidelity\n1,2\n");
  CHECK_THROWS_AS(parse_csv(junk), CsvError);
  CHECK_THROWS_AS(read_csv(scratch("does_not_exist.csv")), CsvError);
}

TEST_CASE("max comment matches the rows") {
  const fs::path out = scratch("fock1.csv");
  REQUIRE(invoke({"scan", "--model", "fock1", "--alpha", "0", "--out", out.string()}).code == 0);
  const std::string text = slurp(out);
  const ScanDataset d = read_csv(out);
  const auto best = std::max_element(d.rows.begin(), d.rows.end(),
                                     [](const ScanRow& a, const ScanRow& b) { return a.qfi < b.qfi; });
  CHECK(std::size_t(best - d.rows.begin()) == d.max_row);
  const std::string expect = "# max_t=" + format_double(best->t) + " max_qfi=" + format_double(best->qfi) + "\n";
  CHECK(text.find(expect) != std::string::npos);
}

TEST_CASE("identical arguments give byte-identical output") {
  const fs::path a = scratch("det_a.csv");
  const fs::path b = scratch("det_b.csv");
  const std::string args = " scan --model squeezed2 --points 300 --tmax 20 --out ";
  REQUIRE(shell(std::string(QFI_PROBE_EXE) + args + a.string()) == 0);
  REQUIRE(shell(std::string(QFI_PROBE_EXE) + args + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());

  const Outcome s1 = invoke({"scan", "--model", "fock2", "--points", "50"});
  const Outcome s2 = invoke({"scan", "--model", "fock2", "--points", "50"});
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
}

TEST_CASE("every figure tag yields files with the configured row count") {
  for (const auto& tag : figure_tags()) {
    CAPTURE(tag);
    const fs::path base = scratch("all_" + tag + ".csv");
    const Outcome o = invoke({"figure", "--tag", tag, "--out", base.string()});
    REQUIRE(o.code == 0);
    for (const auto& path : lines(o.out)) {
      const ScanDataset d = read_csv(path);
      CHECK(d.rows.size() == std::size_t(d.config.grid.count));
      CHECK(d.figure_tag == tag);
    }
  }
}

TEST_CASE("report lists every comparison target") {
  const Outcome o = invoke({"report"});
  REQUIRE(o.code == 0);
  const auto l = lines(o.out);
  REQUIRE(l.size() == 8);
  CHECK(l[0] == "figure,label,target,computed,relative_difference,t_at_max");
}
