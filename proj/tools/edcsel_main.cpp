// Order-selection harness: simulation, fitting, EDC selection, Monte
// Carlo experiments and assumption diagnostics for the BEKK and Markov
// model families.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "edcsel/bekk_family.hpp"
#include "edcsel/diagnostics.hpp"
#include "edcsel/experiment.hpp"
#include "edcsel/io.hpp"
#include "edcsel/markov.hpp"
#include "edcsel/rng.hpp"
#include "edcsel/version.hpp"

using namespace edcsel;
using nlohmann::json;

namespace {

OrderIndex parse_order(const std::vector<int>& coords) { return OrderIndex(coords); }

int cmd_simulate(const std::string& family, const std::string& params_file, long n, std::uint64_t seed, long burn_in,
                 const std::string& out) {
    if (family == "bekk") {
        const auto params = bekk_params_from_json(load_json_file(params_file));
        const auto path = simulate(params, n, seed, burn_in);
        write_path_csv(path, out);
    } else if (family == "markov") {
        const auto spec = markov_spec_from_json(load_json_file(params_file));
        const auto seq = markov_simulate(spec, n, seed);
        write_sequence_csv(seq, out);
    } else {
        throw std::invalid_argument("simulate: unknown family '" + family + "'");
    }
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_fit(const std::string& family, const std::string& data_file, const std::vector<int>& order_coords,
            const FitOptions& opts, const std::string& out) {
    if (family == "bekk") {
        if (order_coords.size() != 2) throw std::invalid_argument("fit: bekk order needs --order k1,k2");
        auto path = read_path_csv(data_file);
        BekkOrder order;
        order.m = path.m;
        order.k1 = order_coords[0];
        order.k2 = order_coords[1];
        const auto result = fit(path, order, opts);
        json j = fit_result_to_json(result);
        j["m"] = order.m;
        j["k1"] = order.k1;
        j["k2"] = order.k2;
        write_json_file(j, out);
        std::cout << "log_lik " << result.log_lik << " status " << result.status << "\n";
        return result.converged ? 0 : 3;
    }
    if (family == "markov") {
        if (order_coords.size() != 1) throw std::invalid_argument("fit: markov order needs --order k");
        const auto seq = read_sequence_csv(data_file);
        int alphabet = 0;
        for (int v : seq) alphabet = std::max(alphabet, v + 1);
        alphabet = std::max(alphabet, 2);
        const auto f = markov_fit(seq, alphabet, order_coords[0]);
        json j;
        j["alphabet"] = alphabet;
        j["order"] = order_coords[0];
        j["rows"] = f.rows;
        j["log_lik"] = f.log_lik;
        write_json_file(j, out);
        std::cout << "log_lik " << f.log_lik << "\n";
        return 0;
    }
    throw std::invalid_argument("fit: unknown family '" + family + "'");
}

int cmd_select(const std::string& family, const std::string& data_file, const std::vector<int>& K,
               const std::string& penalty, const FitOptions& opts, std::uint64_t seed, const std::string& out) {
    const auto rule = PenaltyRule::parse(penalty);
    SelectionReport report;
    if (family == "bekk") {
        auto path = read_path_csv(data_file);
        FitOptions o = opts;
        o.seed = seed;
        const BekkFamily fam(path.m, o);
        report = select_order(fam, path, parse_order(K), rule, seed);
    } else if (family == "markov") {
        const auto seq = read_sequence_csv(data_file);
        int alphabet = 0;
        for (int v : seq) alphabet = std::max(alphabet, v + 1);
        alphabet = std::max(alphabet, 2);
        const MarkovFamily fam(alphabet);
        report = select_order(fam, seq, parse_order(K), rule, seed);
    } else {
        throw std::invalid_argument("select: unknown family '" + family + "'");
    }
    write_json_file(selection_report_to_json(report), out);
    std::cout << "chosen " << report.chosen.str() << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_file, const std::string& out_dir_override, long reps_override,
                   long seed_override, int workers_override) {
    auto cfg = ExperimentConfig::from_json(load_json_file(config_file));
    if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
    if (reps_override > 0) cfg.replications = reps_override;
    if (seed_override >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed_override);
    if (workers_override >= 0) cfg.workers = workers_override;
    cfg.validate();
    ensure_writable_dir(cfg.out_dir);
    const auto results = run_experiment(cfg);
    emit_report(results, cfg);
    std::cout << "wrote " << cfg.out_dir << "/frequencies.csv, reports.jsonl, manifest.json\n";
    return 0;
}

int cmd_diagnose(const std::string& config_file, const std::string& out_override) {
    const auto j = load_json_file(config_file);
    const std::string trace_kind = j.at("trace").get<std::string>();
    const auto k = OrderIndex(j.at("k").get<std::vector<int>>());
    const std::vector<long> grid =
        j.contains("n_grid") ? j.at("n_grid").get<std::vector<long>>() : std::vector<long>{500, 1000, 2000, 4000, 8000};
    const long seed_count = j.value("seed_count", 16L);
    const std::uint64_t master = j.value("master_seed", 0ULL);
    std::string out = j.value("out", "trace.csv");
    if (!out_override.empty()) out = out_override;

    std::vector<std::uint64_t> seeds;
    for (long i = 0; i < seed_count; ++i) seeds.push_back(derive_seed(master, {static_cast<std::uint64_t>(i)}));

    DiagnosticTrace trace;
    const std::string family = j.at("family").get<std::string>();
    if (family == "bekk") {
        auto params = bekk_params_from_json(j.at("family_params"));
        FitOptions opts = j.contains("fit") ? [&] {
            ExperimentConfig tmp;
            json cfgj;
            cfgj["fit"] = j.at("fit");
            return ExperimentConfig::from_json(cfgj).fit;
        }()
                                            : FitOptions{};
        opts.seed = derive_seed(master, {0xF17});
        const BekkFamily fam(std::move(params), opts, j.value("burn_in", 500L));
        if (trace_kind == "hessian")
            trace = hessian_trace(fam, k, grid, seeds);
        else if (trace_kind == "lil")
            trace = score_lil_trace(fam, k, grid, seeds);
        else if (trace_kind == "underfit")
            trace = underfit_gap_trace(fam, k, grid, seeds);
        else if (trace_kind == "overfit")
            trace = overfit_gap_trace(fam, k, grid, seeds);
        else
            throw std::invalid_argument("diagnose: unknown trace '" + trace_kind + "'");
    } else if (family == "markov") {
        const MarkovFamily fam(markov_spec_from_json(j.at("family_params")));
        if (trace_kind == "hessian")
            trace = hessian_trace(fam, k, grid, seeds);
        else if (trace_kind == "underfit")
            trace = underfit_gap_trace(fam, k, grid, seeds);
        else if (trace_kind == "overfit")
            trace = overfit_gap_trace(fam, k, grid, seeds);
        else
            throw std::invalid_argument("diagnose: trace '" + trace_kind + "' is not available for the markov family");
    } else {
        throw std::invalid_argument("diagnose: unknown family '" + family + "'");
    }
    write_trace_csv(trace, out);
    std::cout << "wrote " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EDC order selection for partially nested model families"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate a path from generating parameters");
    std::string sim_family, sim_params, sim_out = "path.csv";
    long sim_n = 1000, sim_burn = 500;
    std::uint64_t sim_seed = 0;
    sim->add_option("--family", sim_family, "bekk | markov")->required();
    sim->add_option("--params", sim_params, "JSON file with generating parameters")->required();
    sim->add_option("--n", sim_n, "sample length")->required();
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--burn-in", sim_burn, "burn-in length (bekk)");
    sim->add_option("--out", sim_out, "output CSV");

    // fit
    auto* fitc = app.add_subcommand("fit", "Maximum-likelihood fit at a fixed order");
    std::string fit_family = "bekk", fit_data, fit_out = "fit.json";
    std::vector<int> fit_order;
    FitOptions fit_opts;
    fitc->add_option("--family", fit_family, "bekk | markov");
    fitc->add_option("--data", fit_data, "input CSV")->required();
    fitc->add_option("--order", fit_order, "order (k1,k2 for bekk; k for markov)")->required()->delimiter(',');
    fitc->add_option("--starts", fit_opts.starts, "random starts");
    fitc->add_option("--grad-tol", fit_opts.grad_tol, "gradient tolerance (mean scale)");
    fitc->add_option("--max-iter", fit_opts.max_iterations, "max iterations per barrier stage");
    fitc->add_option("--rho-max", fit_opts.rho_max, "stationarity margin");
    fitc->add_option("--seed", fit_opts.seed, "optimizer seed");
    fitc->add_option("--out", fit_out, "output JSON");

    // select
    auto* sel = app.add_subcommand("select", "EDC order selection up to a bound");
    std::string sel_family, sel_data, sel_penalty = "bic", sel_out = "report.json";
    std::vector<int> sel_K;
    std::uint64_t sel_seed = 0;
    FitOptions sel_opts;
    sel->add_option("--family", sel_family, "bekk | markov")->required();
    sel->add_option("--data", sel_data, "input CSV")->required();
    sel->add_option("--K", sel_K, "search bound (k1,k2 for bekk; k for markov)")->required()->delimiter(',');
    sel->add_option("--penalty", sel_penalty, "bic | aic | const:<a> | powerlog:<a>:<b>:<d>:<e>");
    sel->add_option("--seed", sel_seed, "seed for candidate fits");
    sel->add_option("--starts", sel_opts.starts, "random starts per candidate (bekk)");
    sel->add_option("--out", sel_out, "output JSON");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Seeded Monte Carlo selection experiment");
    std::string exp_config, exp_out;
    long exp_reps = 0, exp_seed = -1;
    int exp_workers = -1;
    exp->add_option("--config", exp_config, "experiment config JSON (or a run manifest)")->required();
    exp->add_option("--out-dir", exp_out, "override output directory");
    exp->add_option("--replications", exp_reps, "override replication count");
    exp->add_option("--master-seed", exp_seed, "override master seed");
    exp->add_option("--workers", exp_workers, "override worker count (1 = serial)");

    // diagnose
    auto* diag = app.add_subcommand("diagnose", "Assumption probes over a growing-n grid");
    std::string diag_config, diag_out;
    diag->add_option("--config", diag_config, "diagnostic config JSON")->required();
    diag->add_option("--out", diag_out, "override output CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_family, sim_params, sim_n, sim_seed, sim_burn, sim_out);
        if (fitc->parsed()) return cmd_fit(fit_family, fit_data, fit_order, fit_opts, fit_out);
        if (sel->parsed()) return cmd_select(sel_family, sel_data, sel_K, sel_penalty, sel_opts, sel_seed, sel_out);
        if (exp->parsed()) return cmd_experiment(exp_config, exp_out, exp_reps, exp_seed, exp_workers);
        if (diag->parsed()) return cmd_diagnose(diag_config, diag_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
