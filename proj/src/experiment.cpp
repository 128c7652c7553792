#include "edcsel/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "edcsel/bekk_family.hpp"
#include "edcsel/io.hpp"
#include "edcsel/markov.hpp"
#include "edcsel/rng.hpp"
#include "edcsel/version.hpp"

namespace edcsel {

using nlohmann::json;

namespace {

// seed-derivation tags so data and fit streams never collide
constexpr std::uint64_t kDataTag = 0xD5;
constexpr std::uint64_t kFitTag = 0xF1;

FitOptions fit_options_from_json(const json& j) {
    FitOptions o;
    if (j.contains("max_iterations")) o.max_iterations = j.at("max_iterations").get<long>();
    if (j.contains("grad_tol")) o.grad_tol = j.at("grad_tol").get<double>();
    if (j.contains("starts")) o.starts = j.at("starts").get<int>();
    if (j.contains("start_scale")) o.start_scale = j.at("start_scale").get<double>();
    if (j.contains("rho_max")) o.rho_max = j.at("rho_max").get<double>();
    if (j.contains("c_det_floor")) o.c_det_floor = j.at("c_det_floor").get<double>();
    if (j.contains("theta_box")) o.theta_box = j.at("theta_box").get<double>();
    if (j.contains("presample_init"))
        o.presample_init = j.at("presample_init").get<std::string>() == "sample_cov" ? PresampleInit::sample_cov : PresampleInit::c_matrix;
    return o;
}

json fit_options_to_json(const FitOptions& o) {
    json j;
    j["max_iterations"] = o.max_iterations;
    j["grad_tol"] = o.grad_tol;
    j["starts"] = o.starts;
    j["start_scale"] = o.start_scale;
    j["rho_max"] = o.rho_max;
    j["c_det_floor"] = o.c_det_floor;
    j["theta_box"] = o.theta_box;
    j["presample_init"] = o.presample_init == PresampleInit::sample_cov ? "sample_cov" : "c_matrix";
    return j;
}

std::string order_label(const OrderIndex& k) { return k.str(); }

// One replication cell: simulate, fit all candidates once, score under
// every penalty.
template <ModelFamily F>
void run_cell(const F& base_family, const ExperimentConfig& cfg, const std::vector<PenaltyRule>& rules, long n, long rep,
              std::vector<ReplicationRecord>& sink) {
    const std::uint64_t data_seed = derive_seed(cfg.master_seed, {kDataTag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)});
    // fit randomness keyed by (master seed, n, replication); candidate
    // indices are mixed in downstream by the fitting machinery
    const F family = [&] {
        if constexpr (SeedableFits<F>) {
            return base_family.reseeded(derive_seed(cfg.master_seed, {kFitTag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)}));
        } else {
            return base_family;
        }
    }();
    const auto data = family.simulate(n, data_seed);
    const OrderIndex K(cfg.K);
    const auto ks = candidates_up_to(K);
    std::vector<FamilyFit> fits;
    std::string fit_error;
    try {
        if constexpr (BatchFitting<F>) {
            fits = family.fit_candidates(data, ks);
        } else {
            for (const auto& k : ks) fits.push_back(family.fit(data, k));
        }
    } catch (const std::exception& e) {
        fit_error = e.what();
    }
    for (const auto& rule : rules) {
        ReplicationRecord rec;
        rec.replication = rep;
        rec.penalty = rule.id();
        rec.n = n;
        if (!fit_error.empty()) {
            rec.selection_ok = false;
            rec.error = fit_error;
        } else {
            try {
                rec.report = score_and_select(family, ks, fits, n, rule, data_seed);
                rec.selection_ok = true;
            } catch (const std::exception& e) {
                rec.selection_ok = false;
                rec.error = e.what();
            }
        }
        sink.push_back(std::move(rec));
    }
}

template <ModelFamily F>
ExperimentResults run_with_family(const F& family, const ExperimentConfig& cfg) {
    std::vector<PenaltyRule> rules;
    for (const auto& p : cfg.penalties) rules.push_back(PenaltyRule::parse(p));

    // work units indexed by (n, replication); outputs land in
    // replication-indexed slots so scheduling cannot reorder them
    struct Cell {
        long n;
        long rep;
    };
    std::vector<Cell> cells;
    for (long n : cfg.n_grid)
        for (long rep = 0; rep < cfg.replications; ++rep) cells.push_back({n, rep});
    std::vector<std::vector<ReplicationRecord>> sinks(cells.size());

    const bool serial = cfg.workers == 1;
    if (serial) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(family, cfg, rules, cells[i].n, cells[i].rep, sinks[i]);
    } else {
#ifdef _OPENMP
        if (cfg.workers > 1) omp_set_num_threads(cfg.workers);
#pragma omp parallel for schedule(dynamic)
#endif
        for (long i = 0; i < static_cast<long>(cells.size()); ++i)
            run_cell(family, cfg, rules, cells[static_cast<std::size_t>(i)].n, cells[static_cast<std::size_t>(i)].rep,
                     sinks[static_cast<std::size_t>(i)]);
    }

    ExperimentResults results;
    for (auto& s : sinks)
        for (auto& rec : s) results.records.push_back(std::move(rec));

    // frequency table: per (penalty, n), rows over orders in lexicographic
    // order plus a fail bucket when present; frequencies sum to 1
    const auto ks = candidates_up_to(OrderIndex(cfg.K));
    for (const auto& rule : rules) {
        for (long n : cfg.n_grid) {
            std::map<std::string, long> counts;
            long fails = 0;
            for (const auto& rec : results.records) {
                if (rec.penalty != rule.id() || rec.n != n) continue;
                if (rec.selection_ok)
                    ++counts[order_label(rec.report.chosen)];
                else
                    ++fails;
            }
            const double denom = static_cast<double>(cfg.replications);
            for (const auto& k : ks) {
                const auto it = counts.find(order_label(k));
                const long c = (it == counts.end()) ? 0 : it->second;
                results.table.push_back({rule.id(), n, order_label(k), static_cast<double>(c) / denom});
            }
            if (fails > 0) results.table.push_back({rule.id(), n, "fail", static_cast<double>(fails) / denom});
        }
    }
    return results;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    // a manifest wraps the config under "config"; accept both shapes
    const json& src = j.contains("config") ? j.at("config") : j;
    ExperimentConfig cfg;
    cfg.family = src.value("family", "");
    if (src.contains("family_params")) cfg.family_params = src.at("family_params");
    if (src.contains("K")) cfg.K = src.at("K").get<std::vector<int>>();
    if (src.contains("penalties")) cfg.penalties = src.at("penalties").get<std::vector<std::string>>();
    if (src.contains("n_grid")) cfg.n_grid = src.at("n_grid").get<std::vector<long>>();
    cfg.replications = src.value("replications", 0L);
    cfg.master_seed = src.value("master_seed", 0ULL);
    cfg.out_dir = src.value("out_dir", "");
    cfg.acknowledge_b5 = src.value("acknowledge_b5", false);
    cfg.workers = src.value("workers", 1);
    cfg.burn_in = src.value("burn_in", 500L);
    if (src.contains("fit")) cfg.fit = fit_options_from_json(src.at("fit"));
    return cfg;
}

json ExperimentConfig::to_json() const {
    json j;
    j["family"] = family;
    j["family_params"] = family_params;
    j["K"] = K;
    j["penalties"] = penalties;
    j["n_grid"] = n_grid;
    j["replications"] = replications;
    j["master_seed"] = master_seed;
    j["out_dir"] = out_dir;
    j["acknowledge_b5"] = acknowledge_b5;
    j["workers"] = workers;
    j["burn_in"] = burn_in;
    j["fit"] = fit_options_to_json(fit);
    return j;
}

void ExperimentConfig::validate() const {
    std::vector<std::string> bad;
    if (family != "markov" && family != "bekk") bad.push_back("family (must be 'markov' or 'bekk')");
    if (replications < 1) bad.push_back("replications (must be >= 1)");
    if (n_grid.empty()) bad.push_back("n_grid (must be non-empty)");
    for (long n : n_grid)
        if (n < 3) bad.push_back("n_grid (entries must be >= 3)");
    if (K.empty()) bad.push_back("K (must be non-empty)");
    for (int k : K)
        if (k < 0) bad.push_back("K (coordinates must be >= 0)");
    if (family == "markov" && K.size() != 1) bad.push_back("K (markov lattice is 1-dimensional)");
    if (family == "bekk" && K.size() != 2) bad.push_back("K (bekk lattice is 2-dimensional)");
    if (penalties.empty()) bad.push_back("penalties (must be non-empty)");
    for (const auto& p : penalties) {
        try {
            PenaltyRule::parse(p);
        } catch (const std::exception&) {
            bad.push_back("penalties ('" + p + "' does not parse)");
        }
    }
    if (family == "bekk" && !acknowledge_b5)
        bad.push_back("acknowledge_b5 (bekk experiments assume bounded 16th moments of the process; set the flag to acknowledge)");
    if (workers < 0) bad.push_back("workers (must be >= 0)");
    if (family_params.is_null()) bad.push_back("family_params (missing)");
    if (!bad.empty()) {
        std::ostringstream os;
        os << "invalid experiment config:";
        for (const auto& b : bad) os << "\n  - " << b;
        throw std::invalid_argument(os.str());
    }
}

ExperimentResults run_experiment(const ExperimentConfig& config) {
    config.validate();
    if (config.family == "markov") {
        const MarkovFamily family(markov_spec_from_json(config.family_params));
        return run_with_family(family, config);
    }
    auto params = bekk_params_from_json(config.family_params);
    FitOptions opts = config.fit;
    opts.seed = derive_seed(config.master_seed, {kFitTag});
    const BekkFamily family(std::move(params), opts, config.burn_in);
    return run_with_family(family, config);
}

void ensure_writable_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (dir.empty()) throw std::invalid_argument("output directory not set");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
    const auto probe = fs::path(dir) / ".write_probe";
    std::ofstream os(probe);
    if (!os) throw std::runtime_error("output directory " + dir + " is not writable");
    os.close();
    fs::remove(probe, ec);
}

void emit_report(const ExperimentResults& results, const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    ensure_writable_dir(config.out_dir);
    const fs::path dir(config.out_dir);

    {
        std::ofstream os(dir / "frequencies.csv");
        if (!os) throw std::runtime_error("cannot write frequencies.csv");
        os << "penalty,n,order,frequency\n";
        for (const auto& row : results.table)
            os << row.penalty << "," << row.n << "," << row.order << "," << fmt_double(row.frequency) << "\n";
    }
    {
        std::ofstream os(dir / "reports.jsonl");
        if (!os) throw std::runtime_error("cannot write reports.jsonl");
        for (const auto& rec : results.records) {
            json j;
            j["replication"] = rec.replication;
            j["penalty"] = rec.penalty;
            j["n"] = rec.n;
            j["selection_ok"] = rec.selection_ok;
            if (rec.selection_ok)
                j["report"] = selection_report_to_json(rec.report);
            else
                j["error"] = rec.error;
            os << j.dump() << "\n";
        }
    }
    {
        json manifest;
        manifest["config"] = config.to_json();
        manifest["library_version"] = kVersion;
        manifest["master_seed"] = config.master_seed;
        write_json_file(manifest, (dir / "manifest.json").string());
    }
}

} // namespace edcsel
