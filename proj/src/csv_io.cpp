#include "qprobe/csv_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace qprobe {

namespace {

double parse_double(const std::string& s, const char* what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw CsvError(std::string("csv: bad ") + what + " value '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw CsvError(std::string("csv: bad ") + what + " value '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const ScanDataset& d, std::ostream& os) {
  const ScanConfig& c = d.config;
  auto kv = [&os](const char* key, const std::string& value) { os << "# " << key << '=' << value << '\n'; };
  kv("figure", d.figure_tag);
  kv("series", d.series);
  kv("model", to_string(c.model));
  kv("estimand", to_string(c.estimand));
  kv("t_min", format_double(c.grid.t_min));
  kv("t_max", format_double(c.grid.t_max));
  kv("count", std::to_string(c.grid.count));
  kv("alpha", format_double(c.alpha));
  kv("delta", format_double(c.delta));
  kv("lambda", format_double(c.lambda));
  kv("n", std::to_string(c.n));
  kv("m", format_double(c.m));
  kv("r", format_double(c.r));
  kv("gamma", format_double(c.gamma));
  kv("freq_scale", format_double(c.freq_scale));
  kv("integration_tol", format_double(c.integration_tol));
  kv("max_row", std::to_string(d.max_row));
  if (!d.rows.empty()) {
    const ScanRow& mx = d.rows.at(d.max_row);
    os << "# max_t=" << format_double(mx.t) << " max_qfi=" << format_double(mx.qfi) << '\n';
  }
  os << "t,qfi,fidelity\n";
  for (const auto& r : d.rows) {
    os << format_double(r.t) << ',' << format_double(r.qfi) << ',' << format_double(r.fidelity) << '\n';
  }
}

void emit_csv(const ScanDataset& d, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw CsvError("cannot open '" + path.string() + "' for writing");
  write_csv(d, os);
  os.flush();
  if (!os) throw CsvError("failed writing '" + path.string() + "'");
}

ScanDataset parse_csv(std::istream& is) {
  std::map<std::string, std::string> meta;
  ScanDataset d;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') throw CsvError("csv: CRLF line endings are not accepted");
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (header_seen) throw CsvError("csv: comment after header");
      std::istringstream tokens(line.substr(1));
      std::string token;
      while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) throw CsvError("csv: malformed metadata token '" + token + "'");
        meta[token.substr(0, eq)] = token.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "t,qfi,fidelity") throw CsvError("csv: expected header 't,qfi,fidelity', got '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != 3) throw CsvError("csv: expected 3 columns in '" + line + "'");
    d.rows.push_back({parse_double(cells[0], "t"), parse_double(cells[1], "qfi"), parse_double(cells[2], "fidelity")});
  }
  if (!header_seen) throw CsvError("csv: missing header");

  auto get = [&meta](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw CsvError(std::string("csv: missing metadata '") + key + "'");
    return it->second;
  };
  d.figure_tag = get("figure");
  d.series = get("series");
  ScanConfig& c = d.config;
  const auto model = parse_model(get("model"));
  const auto estimand = parse_estimand(get("estimand"));
  if (!model || !estimand) throw CsvError("csv: unknown model or estimand");
  c.model = *model;
  c.estimand = *estimand;
  c.grid.t_min = parse_double(get("t_min"), "t_min");
  c.grid.t_max = parse_double(get("t_max"), "t_max");
  c.grid.count = static_cast<int>(parse_int(get("count"), "count"));
  c.alpha = parse_double(get("alpha"), "alpha");
  c.delta = parse_double(get("delta"), "delta");
  c.lambda = parse_double(get("lambda"), "lambda");
  c.n = static_cast<int>(parse_int(get("n"), "n"));
  c.m = parse_double(get("m"), "m");
  c.r = parse_double(get("r"), "r");
  c.gamma = parse_double(get("gamma"), "gamma");
  c.freq_scale = parse_double(get("freq_scale"), "freq_scale");
  c.integration_tol = parse_double(get("integration_tol"), "integration_tol");
  d.max_row = static_cast<std::size_t>(parse_int(get("max_row"), "max_row"));
  if (!d.rows.empty() && d.max_row >= d.rows.size()) throw CsvError("csv: max_row out of range");
  return d;
}

ScanDataset read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw CsvError("cannot open '" + path.string() + "'");
  return parse_csv(is);
}

}  // namespace qprobe
