#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "edcsel/markov.hpp"
#include "edcsel/rng.hpp"
#include "edcsel/selection.hpp"
#include "oracles.hpp"

using namespace edcsel;

namespace {

MarkovSpec fair_coin() {
    MarkovSpec s;
    s.alphabet = 2;
    s.order = 0;
    s.rows = {0.5, 0.5};
    return s;
}

MarkovSpec order1_chain(double p_stay0 = 0.8, double p_stay1 = 0.7) {
    MarkovSpec s;
    s.alphabet = 2;
    s.order = 1;
    s.rows = {p_stay0, 1.0 - p_stay0, 1.0 - p_stay1, p_stay1};
    return s;
}

} // namespace

TEST_CASE("simulation: frequencies, determinism, one-hot chains") {
    const auto coin = markov_simulate(fair_coin(), 50000, 42);
    long ones = 0;
    for (int v : coin) ones += v;
    CHECK(std::fabs(static_cast<double>(ones) / 50000.0 - 0.5) < 0.02);

    CHECK(markov_simulate(fair_coin(), 1000, 7) == markov_simulate(fair_coin(), 1000, 7));

    MarkovSpec det;
    det.alphabet = 2;
    det.order = 1;
    det.rows = {0.0, 1.0, 1.0, 0.0}; // always alternate
    const auto seq = markov_simulate(det, 100, 3);
    for (std::size_t t = 1; t < seq.size(); ++t) CHECK(seq[t] == 1 - seq[t - 1]);
}

TEST_CASE("closed-form fit on deterministic alternation") {
    std::vector<int> alt;
    for (int t = 0; t < 100; ++t) alt.push_back(t % 2);
    const auto f = markov_fit(alt, 2, 1);
    CHECK(f.rows[0 * 2 + 1] == 1.0); // p(1|0)
    CHECK(f.rows[1 * 2 + 0] == 1.0); // p(0|1)
    CHECK(f.log_lik == 0.0);
}

TEST_CASE("order-0 fit matches the count formula") {
    const auto seq = markov_simulate(fair_coin(), 5000, 11);
    long ones = 0;
    for (int v : seq) ones += v;
    const double f1 = static_cast<double>(ones) / 5000.0;
    const double want = 5000.0 * (f1 * std::log(f1) + (1.0 - f1) * std::log(1.0 - f1));
    const auto fit = markov_fit(seq, 2, 0);
    CHECK(fit.log_lik == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("log-likelihood is non-decreasing in the order") {
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const auto seq = markov_simulate(order1_chain(), 400, rng.next_u64());
        double prev = -1e300;
        for (int k = 0; k <= 4; ++k) {
            const auto f = markov_fit(seq, 2, k);
            CHECK(f.log_lik >= prev - 1e-12);
            prev = f.log_lik;
        }
    }
}

TEST_CASE("fitted rows are a local maximum of the conditional likelihood") {
    const auto seq = markov_simulate(order1_chain(), 2000, 23);
    const auto f = markov_fit(seq, 2, 1);
    const double base = markov_log_lik_at(seq, 2, 1, markov_pack_rows(f.rows, 2));
    CHECK(base == doctest::Approx(f.log_lik).epsilon(1e-12));
    for (int ctx = 0; ctx < 2; ++ctx) {
        for (double d : {1e-3, -1e-3}) {
            auto rows = f.rows;
            double p = rows[static_cast<std::size_t>(ctx * 2)] + d;
            p = std::min(1.0 - 1e-9, std::max(1e-9, p));
            rows[static_cast<std::size_t>(ctx * 2)] = p;
            rows[static_cast<std::size_t>(ctx * 2 + 1)] = 1.0 - p;
            const double perturbed = markov_log_lik_at(seq, 2, 1, markov_pack_rows(rows, 2));
            CHECK(perturbed <= f.log_lik + 1e-12);
        }
    }
}

TEST_CASE("select_order equals brute-force enumeration bit for bit") {
    Rng rng(1234);
    const MarkovFamily fam(order1_chain(0.9, 0.6));
    for (int rep = 0; rep < 25; ++rep) {
        const long n = 200 + static_cast<long>(rng.uniform_int(2000));
        const auto seq = fam.simulate(n, rng.next_u64());
        const int K = 1 + static_cast<int>(rng.uniform_int(4));
        const auto rule = (rep % 3 == 0) ? PenaltyRule::bic() : (rep % 3 == 1) ? PenaltyRule::aic() : PenaltyRule::power_log(1.0, 0.25, 0.0, 0.0);
        const auto report = select_order(fam, seq, OrderIndex{K}, rule);
        const auto brute = oracles::markov_brute_force(seq, 2, K, rule);
        CHECK(report.chosen[0] == brute.order);
        for (int k = 0; k <= K; ++k) {
            CHECK(report.candidates[static_cast<std::size_t>(k)].log_lik == brute.log_liks[static_cast<std::size_t>(k)]);
            CHECK(report.candidates[static_cast<std::size_t>(k)].score == brute.scores[static_cast<std::size_t>(k)]);
        }
    }
}

TEST_CASE("order-1 truth is selected at n=5000 for most seeds") {
    const MarkovFamily fam(order1_chain(0.8, 0.3)); // well-separated rows
    int correct = 0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
        const auto seq = fam.simulate(5000, derive_seed(777, {static_cast<std::uint64_t>(rep)}));
        const auto report = select_order(fam, seq, OrderIndex{3}, PenaltyRule::bic());
        if (report.chosen == OrderIndex{1}) ++correct;
    }
    CHECK(correct >= reps * 9 / 10);
}

TEST_CASE("true-order frequency under BIC is non-decreasing in n (order-2 chain)") {
    MarkovSpec spec;
    spec.alphabet = 2;
    spec.order = 2;
    spec.rows = {
        0.05, 0.95, // ctx 00
        0.35, 0.65, // ctx 01
        0.65, 0.35, // ctx 10
        0.95, 0.05, // ctx 11
    };
    const MarkovFamily fam(spec);
    const int reps = 200;
    std::vector<long> grid = {500, 2000, 8000};
    std::vector<int> hits;
    for (long n : grid) {
        int h = 0;
        for (int rep = 0; rep < reps; ++rep) {
            const auto seq = fam.simulate(n, derive_seed(2024, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rep)}));
            const auto report = select_order(fam, seq, OrderIndex{4}, PenaltyRule::bic());
            if (report.chosen == OrderIndex{2}) ++h;
        }
        hits.push_back(h);
    }
    CHECK(hits[1] >= hits[0]);
    CHECK(hits[2] >= hits[1]);
    CHECK(hits[2] >= static_cast<int>(reps * 0.9));
}

TEST_CASE("true theta expansion reproduces the chain at higher context length") {
    const MarkovFamily fam(order1_chain(0.8, 0.7));
    const auto seq = fam.simulate(3000, 9);
    const auto theta1 = fam.true_theta_for(OrderIndex{1});
    const auto theta2 = fam.true_theta_for(OrderIndex{2});
    const double l1 = fam.log_lik_at(seq, OrderIndex{1}, theta1);
    const double l2 = fam.log_lik_at(seq, OrderIndex{2}, theta2);
    // same conditional law, one extra conditioned symbol at the front
    CHECK(std::fabs(l1 - l2) < 5.0);
}
