#include "qkr/io.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qkr/config.hpp"
#include "qkr/errors.hpp"

namespace fs = std::filesystem;

namespace qkr {

std::string format_csv_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::string trace_csv(const EnergyTrace& trace) {
    std::string out = "pulse_index,t_over_trev,energy_B,absorbed_B\n";
    for (const auto& p : trace.points) {
        out += std::to_string(p.pulse_index) + "," + format_csv_number(p.time) + "," +
               format_csv_number(p.energy) + "," + format_csv_number(p.absorbed) + "\n";
    }
    return out;
}

std::string populations_csv(const LabeledPopulations& lp) {
    std::string out = "J,P_J,I_J_normalized\n";
    for (const auto& [j, p] : lp.pop.entries) {
        const auto it = lp.spectrum.intensities.find(j);
        const double intensity = (it != lp.spectrum.intensities.end()) ? it->second : 0.0;
        out += std::to_string(j) + "," + format_csv_number(p) + "," +
               format_csv_number(intensity) + "\n";
    }
    return out;
}

std::string scan_csv(const ScanTable& table) {
    std::string out;
    for (size_t i = 0; i < table.columns.size(); ++i)
        out += (i ? "," : "") + table.columns[i];
    out += "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : std::string()) + format_csv_number(row[i]);
        out += "\n";
    }
    return out;
}

} // namespace

std::vector<std::string> write_results(const ExperimentResult& result,
                                       const ExperimentConfig& config,
                                       const std::string& out_dir,
                                       double wall_seconds) {
    fs::create_directories(out_dir);
    std::vector<std::pair<std::string, std::string>> files; // name -> contents

    for (const auto& [label, trace] : result.traces)
        files.emplace_back("trace_" + label + ".csv", trace_csv(trace));
    for (const auto& lp : result.populations)
        files.emplace_back("populations_" + lp.label + ".csv", populations_csv(lp));
    if (!result.scan.columns.empty())
        files.emplace_back("scan.csv", scan_csv(result.scan));

    nlohmann::json manifest;
    manifest["tool"] = "qkr";
    manifest["version"] = QKR_VERSION;
    manifest["scenario"] = result.scenario;
    manifest["seed"] = config.seed;
    manifest["wall_seconds"] = wall_seconds;
    manifest["config"] = nlohmann::json::parse(config_to_json(config));
    manifest["revival_period_s"] = config.molecule.revival_period_s();
    for (const auto& [key, value] : result.metrics) manifest["metrics"][key] = value;
    for (const auto& [name, contents] : files)
        manifest["checksums"][name] = fnv1a_hex(contents);
    files.emplace_back("manifest.json", manifest.dump(2) + "\n");

    // Stage everything, then rename; remove temporaries if anything fails.
    std::vector<fs::path> staged;
    try {
        for (const auto& [name, contents] : files) {
            const fs::path tmp = fs::path(out_dir) / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw NumericalError("cannot open '" + tmp.string() + "' for writing");
            out << contents;
            out.flush();
            if (!out) throw NumericalError("write failed for '" + tmp.string() + "'");
            staged.push_back(tmp);
        }
        std::vector<std::string> written;
        for (size_t i = 0; i < files.size(); ++i) {
            const fs::path final_path = fs::path(out_dir) / files[i].first;
            fs::rename(staged[i], final_path);
            written.push_back(files[i].first);
        }
        return written;
    } catch (...) {
        for (const auto& tmp : staged) {
            std::error_code ec;
            fs::remove(tmp, ec);
        }
        throw;
    }
}

} // namespace qkr
