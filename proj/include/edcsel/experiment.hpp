#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "edcsel/estimator.hpp"
#include "edcsel/selection.hpp"

namespace edcsel {

// Monte Carlo experiment over a (penalty, n) grid: `replications`
// independent samples per n, order selection under every penalty rule,
// selection-frequency tables and per-replication reports out.
struct ExperimentConfig {
    std::string family;           // "markov" | "bekk"
    nlohmann::json family_params; // generating parameters (family-specific schema)
    std::vector<int> K;           // search bound
    std::vector<std::string> penalties;
    std::vector<long> n_grid;
    long replications = 0;
    std::uint64_t master_seed = 0;
    std::string out_dir;
    bool acknowledge_b5 = false; // required for the bekk family
    int workers = 1;             // 1 = serial reference path; 0 = all available
    long burn_in = 500;          // bekk simulation burn-in
    FitOptions fit;              // bekk optimizer options

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    // Throws std::invalid_argument listing every offending field.
    void validate() const;
};

struct ReplicationRecord {
    long replication = 0;
    std::string penalty;
    long n = 0;
    bool selection_ok = false;
    SelectionReport report; // valid when selection_ok
    std::string error;      // set when selection_ok is false
};

struct FrequencyRow {
    std::string penalty;
    long n = 0;
    std::string order; // "(k1,k2)" or "fail"
    double frequency = 0.0;
};

struct ExperimentResults {
    std::vector<FrequencyRow> table;
    std::vector<ReplicationRecord> records;
};

// Deterministic given the config: replication work units draw their
// seeds from (master_seed, replication, n) counters, so the outputs do
// not depend on the worker count.
ExperimentResults run_experiment(const ExperimentConfig& config);

// Writes frequency-table CSV, per-replication JSON lines, and the run
// manifest (config echo + library version + master seed) into out_dir.
void emit_report(const ExperimentResults& results, const ExperimentConfig& config);

// Creates the directory if needed and verifies it is writable; throws
// before any computation otherwise.
void ensure_writable_dir(const std::string& dir);

} // namespace edcsel
