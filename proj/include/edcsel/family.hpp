#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

#include "edcsel/order.hpp"

namespace edcsel {

// Outcome of one candidate-order fit, model family agnostic. A fit may
// fail to meet the optimizer tolerance yet still carry a usable
// likelihood value; only fits without a value drop out of selection.
struct FamilyFit {
    std::vector<double> theta;
    double log_lik = 0.0;
    bool has_value = false;
    bool converged = false;
    std::string status;
    long iterations = 0;
    double grad_norm = 0.0;
    int start_index = -1;
};

// A partially nested model family: an order lattice of dimension q, a
// parameter-count map gamma, a fitting routine maximizing the model's
// log-likelihood at each candidate order, and a seeded simulator for the
// family's generating parameters.
template <class F>
concept ModelFamily = requires(const F& fam, const typename F::Data& data, const OrderIndex& k, long n, std::uint64_t seed) {
    typename F::Data;
    { fam.lattice_dim() } -> std::convertible_to<int>;
    { fam.param_count(k) } -> std::convertible_to<long>;
    { fam.min_sample(k) } -> std::convertible_to<long>;
    { fam.sample_size(data) } -> std::convertible_to<long>;
    { fam.fit(data, k) } -> std::same_as<FamilyFit>;
    { fam.simulate(n, seed) } -> std::same_as<typename F::Data>;
};

// Families that can evaluate the log-likelihood at an arbitrary packed
// parameter vector (finite-difference Hessian probes).
template <class F>
concept EvaluatesAtPoint = ModelFamily<F> && requires(const F& fam, const typename F::Data& data, const OrderIndex& k, const std::vector<double>& theta) {
    { fam.log_lik_at(data, k, theta) } -> std::convertible_to<double>;
};

// Families with an analytic score (gradient of the log-likelihood).
template <class F>
concept HasAnalyticScore = ModelFamily<F> && requires(const F& fam, const typename F::Data& data, const OrderIndex& k, const std::vector<double>& theta) {
    { fam.score_at(data, k, theta) } -> std::same_as<std::vector<double>>;
};

// Families with a batched fit over a candidate set (shared conditioning,
// warm starts); the selection machinery uses it when present.
template <class F>
concept BatchFitting = ModelFamily<F> && requires(const F& fam, const typename F::Data& data, const std::vector<OrderIndex>& ks) {
    { fam.fit_candidates(data, ks) } -> std::same_as<std::vector<FamilyFit>>;
};

// Families whose fits draw randomness (multi-start optimizers) expose a
// copy with a replaced seed so harnesses can key fits by replication.
template <class F>
concept SeedableFits = ModelFamily<F> && requires(const F& fam, std::uint64_t seed) {
    { fam.reseeded(seed) } -> std::same_as<F>;
};

} // namespace edcsel
