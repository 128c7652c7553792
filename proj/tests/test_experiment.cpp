#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "edcsel/experiment.hpp"
#include "edcsel/io.hpp"

using namespace edcsel;
using nlohmann::json;

namespace {

ExperimentConfig markov_config() {
    ExperimentConfig cfg;
    cfg.family = "markov";
    json params;
    params["alphabet"] = 2;
    params["order"] = 1;
    params["rows"] = std::vector<double>{0.85, 0.15, 0.25, 0.75};
    cfg.family_params = params;
    cfg.K = {3};
    cfg.penalties = {"bic"};
    cfg.n_grid = {500, 2000};
    cfg.replications = 50;
    cfg.master_seed = 314;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

double frequency_of(const ExperimentResults& r, const std::string& penalty, long n, const std::string& order) {
    for (const auto& row : r.table)
        if (row.penalty == penalty && row.n == n && row.order == order) return row.frequency;
    return 0.0;
}

} // namespace

TEST_CASE("config validation lists offending fields") {
    ExperimentConfig cfg = markov_config();
    cfg.replications = 0;
    cfg.penalties = {"bogus"};
    cfg.K = {3, 3};
    try {
        cfg.validate();
        FAIL("expected validation error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("replications") != std::string::npos);
        CHECK(msg.find("penalties") != std::string::npos);
        CHECK(msg.find("K (markov") != std::string::npos);
    }
}

TEST_CASE("bekk experiments require the moment acknowledgment flag") {
    ExperimentConfig cfg;
    cfg.family = "bekk";
    json params;
    params["m"] = 1;
    params["k1"] = 0;
    params["k2"] = 0;
    params["theta"] = std::vector<double>{1.0};
    cfg.family_params = params;
    cfg.K = {1, 1};
    cfg.penalties = {"bic"};
    cfg.n_grid = {200};
    cfg.replications = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.acknowledge_b5 = true;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("markov experiment: frequency table sums to one and favors the truth") {
    const auto cfg = markov_config();
    const auto results = run_experiment(cfg);
    for (long n : cfg.n_grid) {
        double sum = 0.0;
        for (const auto& row : results.table)
            if (row.penalty == "bic" && row.n == n) sum += row.frequency;
        CHECK(sum == doctest::Approx(1.0));
    }
    CHECK(frequency_of(results, "bic", 2000, "(1)") >= 0.9);
    CHECK(results.records.size() == static_cast<std::size_t>(cfg.replications * 2));
}

TEST_CASE("experiment outputs are identical across worker counts") {
    ExperimentConfig cfg = markov_config();
    cfg.replications = 20;
    cfg.workers = 1;
    const auto serial = run_experiment(cfg);
    cfg.workers = 0;
    const auto parallel = run_experiment(cfg);
    REQUIRE(serial.table.size() == parallel.table.size());
    for (std::size_t i = 0; i < serial.table.size(); ++i) {
        CHECK(serial.table[i].order == parallel.table[i].order);
        CHECK(serial.table[i].frequency == parallel.table[i].frequency);
    }
    REQUIRE(serial.records.size() == parallel.records.size());
    for (std::size_t i = 0; i < serial.records.size(); ++i) {
        CHECK(serial.records[i].replication == parallel.records[i].replication);
        if (serial.records[i].selection_ok)
            CHECK(serial.records[i].report.chosen == parallel.records[i].report.chosen);
    }
}

TEST_CASE("emit_report writes byte-identical outputs on rerun from the manifest") {
    namespace fs = std::filesystem;
    ExperimentConfig cfg = markov_config();
    cfg.replications = 10;
    const auto dir1 = fs::temp_directory_path() / "edcsel_exp_a";
    const auto dir2 = fs::temp_directory_path() / "edcsel_exp_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    cfg.out_dir = dir1.string();
    emit_report(run_experiment(cfg), cfg);

    // rerun from the manifest, redirected to a second directory
    auto manifest = load_json_file((dir1 / "manifest.json").string());
    auto cfg2 = ExperimentConfig::from_json(manifest);
    cfg2.out_dir = dir2.string();
    emit_report(run_experiment(cfg2), cfg2);

    CHECK(slurp(dir1 / "frequencies.csv") == slurp(dir2 / "frequencies.csv"));
    CHECK(slurp(dir1 / "reports.jsonl") == slurp(dir2 / "reports.jsonl"));
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("constant penalty overfits more than BIC on iid data") {
    ExperimentConfig cfg;
    cfg.family = "markov";
    json params;
    params["alphabet"] = 2;
    params["order"] = 0;
    params["rows"] = std::vector<double>{0.5, 0.5};
    cfg.family_params = params;
    cfg.K = {2};
    cfg.penalties = {"const:1", "bic"};
    cfg.n_grid = {4000};
    cfg.replications = 150;
    cfg.master_seed = 2718;
    const auto results = run_experiment(cfg);
    const double overfit_const = 1.0 - frequency_of(results, "const:1", 4000, "(0)");
    const double overfit_bic = 1.0 - frequency_of(results, "bic", 4000, "(0)");
    CHECK(overfit_const > overfit_bic);
}
