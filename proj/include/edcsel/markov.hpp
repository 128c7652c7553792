#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edcsel/family.hpp"
#include "edcsel/order.hpp"

namespace edcsel {

// Multiple Markov chain of order k on the alphabet {0, ..., s-1}.
// Transition rows are indexed by the base-s context code of the last k
// symbols, oldest symbol most significant. Dense tables; desk scale
// (s <= 8).
struct MarkovSpec {
    int alphabet = 2;
    int order = 0;
    std::vector<double> rows; // s^k rows of length s, row-major

    long context_count() const;
    void validate() const; // rows sum to 1, probabilities >= 0
};

// gamma(k) = s^k (s - 1): free parameters of the transition table.
long markov_param_count(int alphabet, int order);

std::vector<int> markov_simulate(const MarkovSpec& spec, long n, std::uint64_t seed);

struct MarkovFit {
    std::vector<double> rows; // fitted transition rows, s^k x s
    double log_lik = 0.0;     // conditional on the first k symbols
};

// Closed-form conditional MLE from transition counts over positions
// k+1..n; empty contexts contribute zero (0 log 0 := 0).
MarkovFit markov_fit(const std::vector<int>& data, int alphabet, int order);

// Log-likelihood at an arbitrary free-parameter vector: per context the
// first s-1 probabilities, last one implied.
double markov_log_lik_at(const std::vector<int>& data, int alphabet, int order, const std::vector<double>& theta);

std::vector<double> markov_pack_rows(const std::vector<double>& rows, int alphabet);

// NestedModelFamily adapter over a 1-dimensional order lattice.
class MarkovFamily {
  public:
    using Data = std::vector<int>;

    explicit MarkovFamily(int alphabet) : alphabet_(alphabet) {}
    MarkovFamily(MarkovSpec generating) : alphabet_(generating.alphabet), spec_(std::move(generating)) {
        spec_->validate();
    }

    int lattice_dim() const { return 1; }
    long param_count(const OrderIndex& k) const { return markov_param_count(alphabet_, k[0]); }
    long min_sample(const OrderIndex& k) const { return k[0] + 2; }
    long sample_size(const Data& d) const { return static_cast<long>(d.size()); }
    int alphabet() const { return alphabet_; }

    FamilyFit fit(const Data& data, const OrderIndex& k) const;
    Data simulate(long n, std::uint64_t seed) const;
    double log_lik_at(const Data& data, const OrderIndex& k, const std::vector<double>& theta) const {
        return markov_log_lik_at(data, alphabet_, k[0], theta);
    }

    OrderIndex true_order() const;
    // True transition table re-expressed at context length k >= order
    // (rows replicated over the extra context symbols), packed as free
    // parameters.
    std::vector<double> true_theta_for(const OrderIndex& k) const;

    const std::optional<MarkovSpec>& generating() const { return spec_; }

  private:
    int alphabet_;
    std::optional<MarkovSpec> spec_;
};

static_assert(ModelFamily<MarkovFamily>);
static_assert(EvaluatesAtPoint<MarkovFamily>);

} // namespace edcsel
