// CSV serialization of scan datasets.
//
// Layout: '#'-prefixed "key=value" metadata lines, the header t,qfi,fidelity,
// then one row per grid point. Doubles use 17 significant digits so a file
// parses back to the identical dataset. LF line endings.

#pragma once

#include "qprobe/scan_repro.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace qprobe {

class CsvError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v);

void write_csv(const ScanDataset& d, std::ostream& os);
/// Throws CsvError if the file cannot be written.
void emit_csv(const ScanDataset& d, const std::filesystem::path& path);

ScanDataset parse_csv(std::istream& is);
ScanDataset read_csv(const std::filesystem::path& path);

}  // namespace qprobe
