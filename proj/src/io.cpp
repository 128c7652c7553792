#include "edcsel/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edcsel {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_path_csv(const PathSample& path, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("write_path_csv: cannot open " + file);
    for (int i = 0; i < path.m; ++i) os << "x" << (i + 1) << (i + 1 < path.m ? "," : "\n");
    for (long t = 0; t < path.n; ++t) {
        const double* row = path.row(t);
        for (int i = 0; i < path.m; ++i) os << fmt_double(row[i]) << (i + 1 < path.m ? "," : "\n");
    }
}

PathSample read_path_csv(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("read_path_csv: cannot open " + file);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_path_csv: empty file " + file);
    int m = 1;
    for (char c : line)
        if (c == ',') ++m;
    PathSample path;
    path.m = m;
    std::vector<double> vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        int got = 0;
        while (std::getline(ls, tok, ',')) {
            vals.push_back(std::stod(tok));
            ++got;
        }
        if (got != m) throw std::runtime_error("read_path_csv: ragged row in " + file);
    }
    path.n = static_cast<long>(vals.size()) / m;
    path.x = std::move(vals);
    return path;
}

void write_sequence_csv(const std::vector<int>& seq, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("write_sequence_csv: cannot open " + file);
    os << "symbol\n";
    for (int v : seq) os << v << "\n";
}

std::vector<int> read_sequence_csv(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("read_sequence_csv: cannot open " + file);
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_sequence_csv: empty file " + file);
    std::vector<int> seq;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        seq.push_back(std::stoi(line));
    }
    return seq;
}

json bekk_params_to_json(const BekkParams& params) {
    json j;
    j["m"] = params.order.m;
    j["k1"] = params.order.k1;
    j["k2"] = params.order.k2;
    j["theta"] = params.pack();
    return j;
}

BekkParams bekk_params_from_json(const json& j) {
    BekkOrder order;
    order.m = j.at("m").get<int>();
    order.k1 = j.at("k1").get<int>();
    order.k2 = j.at("k2").get<int>();
    const auto theta = j.at("theta").get<std::vector<double>>();
    return BekkParams::from_theta(order, theta);
}

json markov_spec_to_json(const MarkovSpec& spec) {
    json j;
    j["alphabet"] = spec.alphabet;
    j["order"] = spec.order;
    j["rows"] = spec.rows;
    return j;
}

MarkovSpec markov_spec_from_json(const json& j) {
    MarkovSpec spec;
    spec.alphabet = j.at("alphabet").get<int>();
    spec.order = j.at("order").get<int>();
    spec.rows = j.at("rows").get<std::vector<double>>();
    spec.validate();
    return spec;
}

json fit_result_to_json(const FitResult& r) {
    json j;
    j["theta"] = r.theta;
    j["log_lik"] = r.log_lik;
    j["converged"] = r.converged;
    j["status"] = r.status;
    j["grad_norm"] = r.grad_norm;
    j["start_index"] = r.start_index;
    j["iterations"] = r.iterations;
    j["rho"] = r.rho;
    return j;
}

json selection_report_to_json(const SelectionReport& r) {
    json j;
    json cands = json::array();
    for (const auto& c : r.candidates) {
        json jc;
        jc["k"] = c.k.coords;
        jc["log_lik"] = c.log_lik;
        jc["gamma"] = c.gamma;
        jc["c_n"] = c.c_n;
        jc["score"] = c.score;
        jc["fit_ok"] = c.fit_ok;
        jc["status"] = c.status;
        cands.push_back(std::move(jc));
    }
    j["candidates"] = std::move(cands);
    j["chosen"] = r.chosen.coords;
    j["n"] = r.n;
    j["penalty"] = r.penalty_id;
    j["seed"] = r.seed;
    return j;
}

void write_trace_csv(const DiagnosticTrace& trace, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("write_trace_csv: cannot open " + file);
    os << "statistic,n,seed,value,status\n";
    for (const auto& row : trace.rows)
        os << row.statistic << "," << row.n << "," << row.seed << "," << fmt_double(row.value) << "," << row.status << "\n";
}

json load_json_file(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot open " + file);
    json j;
    is >> j;
    return j;
}

void write_json_file(const json& j, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file + " for writing");
    os << j.dump(2) << "\n";
}

} // namespace edcsel
