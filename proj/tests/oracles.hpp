#pragma once

// Test-side reference implementations, kept independent of the library
// code paths they check.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "edcsel/mat.hpp"
#include "edcsel/order.hpp"
#include "edcsel/penalty.hpp"

namespace oracles {

// --- Markov: count-based conditional log-likelihood and brute-force
// penalized enumeration --------------------------------------------------

inline long opow(long b, int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline double markov_loglik_counts(const std::vector<int>& data, int s, int k) {
    const long nc = opow(s, k);
    std::vector<long> counts(static_cast<std::size_t>(nc * s), 0);
    const long n = static_cast<long>(data.size());
    long ctx = 0;
    const long mod = opow(s, std::max(k - 1, 0));
    for (long t = 0; t < k; ++t) ctx = ctx * s + data[static_cast<std::size_t>(t)];
    for (long t = k; t < n; ++t) {
        ++counts[static_cast<std::size_t>(ctx * s + data[static_cast<std::size_t>(t)])];
        if (k > 0) ctx = (ctx % mod) * s + data[static_cast<std::size_t>(t)];
    }
    double ll = 0.0;
    for (long c = 0; c < nc; ++c) {
        long tot = 0;
        for (int a = 0; a < s; ++a) tot += counts[static_cast<std::size_t>(c * s + a)];
        if (tot == 0) continue;
        for (int a = 0; a < s; ++a) {
            const long v = counts[static_cast<std::size_t>(c * s + a)];
            if (v > 0) ll += static_cast<double>(v) * std::log(static_cast<double>(v) / static_cast<double>(tot));
        }
    }
    return ll;
}

struct BruteForcePick {
    int order = -1;
    std::vector<double> log_liks;
    std::vector<double> scores;
};

// Enumerates k = 0..K, scores -logL + c_n * s^k (s-1), picks the argmin
// with ties broken toward the smaller parameter count then smaller k.
inline BruteForcePick markov_brute_force(const std::vector<int>& data, int s, int K, const edcsel::PenaltyRule& rule) {
    BruteForcePick pick;
    const long n = static_cast<long>(data.size());
    const double cn = rule(n);
    double best_score = 0.0;
    long best_gamma = 0;
    for (int k = 0; k <= K; ++k) {
        const double ll = markov_loglik_counts(data, s, k);
        const long gamma = opow(s, k) * (s - 1);
        const double score = -ll + cn * static_cast<double>(gamma);
        pick.log_liks.push_back(ll);
        pick.scores.push_back(score);
        if (pick.order < 0 || score < best_score || (score == best_score && gamma < best_gamma)) {
            pick.order = k;
            best_score = score;
            best_gamma = gamma;
        }
    }
    return pick;
}

// Exact stationary distribution of an order-1 chain by power iteration
// on the transition matrix (small alphabets).
inline std::vector<double> stationary_distribution(const std::vector<double>& rows, int s) {
    std::vector<double> pi(static_cast<std::size_t>(s), 1.0 / s), next(static_cast<std::size_t>(s), 0.0);
    for (int it = 0; it < 20000; ++it) {
        for (int j = 0; j < s; ++j) {
            double acc = 0.0;
            for (int i = 0; i < s; ++i) acc += pi[static_cast<std::size_t>(i)] * rows[static_cast<std::size_t>(i * s + j)];
            next[static_cast<std::size_t>(j)] = acc;
        }
        double diff = 0.0;
        for (int j = 0; j < s; ++j) {
            diff += std::fabs(next[static_cast<std::size_t>(j)] - pi[static_cast<std::size_t>(j)]);
            pi[static_cast<std::size_t>(j)] = next[static_cast<std::size_t>(j)];
        }
        if (diff < 1e-15) break;
    }
    return pi;
}

// Expected per-symbol log-likelihood gap between the true order-1 chain
// and the best i.i.d. approximation: sum_i pi_i sum_a P(a|i) log P(a|i)
// minus sum_a q_a log q_a with q the stationary marginal.
inline double order1_vs_iid_gap(const std::vector<double>& rows, int s) {
    const auto pi = stationary_distribution(rows, s);
    double cond_ent = 0.0;
    std::vector<double> q(static_cast<std::size_t>(s), 0.0);
    for (int i = 0; i < s; ++i)
        for (int a = 0; a < s; ++a) {
            const double p = rows[static_cast<std::size_t>(i * s + a)];
            if (p > 0.0) cond_ent += pi[static_cast<std::size_t>(i)] * p * std::log(p);
            q[static_cast<std::size_t>(a)] += pi[static_cast<std::size_t>(i)] * p;
        }
    double marg_ent = 0.0;
    for (int a = 0; a < s; ++a)
        if (q[static_cast<std::size_t>(a)] > 0.0) marg_ent += q[static_cast<std::size_t>(a)] * std::log(q[static_cast<std::size_t>(a)]);
    return cond_ent - marg_ent;
}

// --- Scalar GARCH(1,1) reference likelihood ------------------------------
// h_t = c + a2 x_{t-1}^2 + b2 h_{t-1}, h_1 = c, summing from t = 2;
// matches the m=1, k=(1,1) model with coefficients (c, a^2, b^2).

inline double scalar_garch11_loglik(const std::vector<double>& x, double c, double a2, double b2) {
    const long n = static_cast<long>(x.size());
    std::vector<double> hs(static_cast<std::size_t>(n), 0.0);
    hs[0] = c; // conditioned value for t = 1
    for (long t = 1; t < n; ++t)
        hs[static_cast<std::size_t>(t)] =
            c + a2 * x[static_cast<std::size_t>(t - 1)] * x[static_cast<std::size_t>(t - 1)] + b2 * hs[static_cast<std::size_t>(t - 1)];
    double ll = 0.0;
    for (long t = 1; t < n; ++t) {
        const double ht = hs[static_cast<std::size_t>(t)];
        ll += -0.5 * x[static_cast<std::size_t>(t)] * x[static_cast<std::size_t>(t)] / ht - 0.5 * std::log(ht);
    }
    return ll;
}

} // namespace oracles
