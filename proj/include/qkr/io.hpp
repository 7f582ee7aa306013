#ifndef QKR_IO_HPP
#define QKR_IO_HPP

#include <string>
#include <vector>

#include "qkr/scenarios.hpp"

namespace qkr {

/// Writes energy traces, populations, and scan tables as CSV plus a JSON
/// manifest (config echo, constants, version, seed, per-file checksums).
/// Files are written to temporaries and renamed on success; on failure no
/// partial outputs remain. Returns the file names written, manifest last.
std::vector<std::string> write_results(const ExperimentResult& result,
                                       const ExperimentConfig& config,
                                       const std::string& out_dir,
                                       double wall_seconds = 0.0);

/// CSV cell formatting used by all writers: 12 significant digits.
std::string format_csv_number(double value);

/// FNV-1a 64-bit, hex; recorded in manifests and used for golden files.
std::string fnv1a_hex(const std::string& bytes);

} // namespace qkr

#endif
