#pragma once
// Named experiments over the library: configuration-driven execution,
// structured records (JSON metadata + CSV tables), and plot-data projection.
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "bsglab/config.hpp"
#include "bsglab/table.hpp"

namespace bsg {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20260815ull;

struct ExperimentRecord {
    std::string experiment;     // one of the run() kinds
    std::string experiment_id;  // "<experiment>-s<seed>", deterministic
    std::map<std::string, std::string> config;  // resolved parameter snapshot
    Table table;
    std::map<std::string, Table> aux;  // secondary tables (e.g. energy curves)
    bool pass = true;
    std::string summary;
    double wall_seconds = 0.0;  // informational; excluded from determinism
};

// Kinds: pressure | lemma | theorem1 | theorem2 | hopfield-linf |
// hopfield-compare | mc-validate | scaling. Unknown kinds, bad distribution
// specs, and cap violations raise std::invalid_argument naming the culprit.
ExperimentRecord run_experiment(const Config& cfg);

// Writes <id>.record.json, <id>.csv, and <id>.<aux>.csv into out_dir;
// returns the record JSON path.
std::filesystem::path write_record(const ExperimentRecord& record,
                                   const std::filesystem::path& out_dir);

ExperimentRecord read_record(const std::filesystem::path& record_json);

// kind: gap_vs_size | moment_vs_size | pnorm_vs_p | energy_vs_beta.
// Writes <id>.<kind>.csv and returns its path. Mismatched kinds raise
// std::invalid_argument listing the kinds the record supports.
std::filesystem::path emit_plotdata(const ExperimentRecord& record, const std::string& kind,
                                    const std::filesystem::path& out_dir);

}  // namespace bsg
