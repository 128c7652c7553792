#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "edcsel/bekk.hpp"
#include "edcsel/estimator.hpp"
#include "edcsel/family.hpp"

namespace edcsel {

// NestedModelFamily adapter for BEKK-GARCH over the (k1, k2) lattice.
// Candidate batches share a conditioning window of max(kbar) over the
// batch so likelihoods are exactly comparable and nesting is exact.
class BekkFamily {
  public:
    using Data = PathSample;

    BekkFamily(int m, FitOptions options) : m_(m), options_(options) {}
    BekkFamily(BekkParams generating, FitOptions options, long burn_in = 500)
        : m_(generating.order.m), options_(options), generating_(std::move(generating)), burn_in_(burn_in) {
        generating_->validate();
    }

    int lattice_dim() const { return 2; }

    BekkOrder to_order(const OrderIndex& k) const {
        if (k.dim() != 2) throw std::invalid_argument("BekkFamily: order index must be 2-dimensional");
        BekkOrder o;
        o.m = m_;
        o.k1 = k[0];
        o.k2 = k[1];
        return o;
    }

    long param_count(const OrderIndex& k) const { return to_order(k).gamma(); }
    long min_sample(const OrderIndex& k) const {
        const auto o = to_order(k);
        return o.kbar() + o.gamma() + 1;
    }
    long sample_size(const Data& d) const { return d.n; }

    FamilyFit fit(const Data& data, const OrderIndex& k) const { return wrap(edcsel::fit(data, to_order(k), options_)); }

    std::vector<FamilyFit> fit_candidates(const Data& data, const std::vector<OrderIndex>& ks) const {
        std::vector<BekkOrder> orders;
        orders.reserve(ks.size());
        for (const auto& k : ks) orders.push_back(to_order(k));
        auto fits = profile_fit_sequence(data, orders, options_);
        std::vector<FamilyFit> out;
        out.reserve(fits.size());
        for (auto& f : fits) out.push_back(wrap(std::move(f)));
        return out;
    }

    Data simulate(long n, std::uint64_t seed) const {
        if (!generating_) throw std::logic_error("BekkFamily: no generating parameters configured");
        return edcsel::simulate(*generating_, n, seed, burn_in_);
    }

    double log_lik_at(const Data& data, const OrderIndex& k, const std::vector<double>& theta) const {
        BekkEvaluator ev(to_order(k), data, -1, options_.presample_init);
        double ll = 0.0;
        if (!ev.log_lik(theta.data(), &ll)) throw std::runtime_error("BekkFamily::log_lik_at: " + ev.fail_reason());
        return ll;
    }

    std::vector<double> score_at(const Data& data, const OrderIndex& k, const std::vector<double>& theta) const {
        BekkEvaluator ev(to_order(k), data, -1, options_.presample_init);
        std::vector<double> grad(static_cast<std::size_t>(to_order(k).gamma()), 0.0);
        double ll = 0.0;
        if (!ev.log_lik_score(theta.data(), &ll, grad.data())) throw std::runtime_error("BekkFamily::score_at: " + ev.fail_reason());
        return grad;
    }

    BekkFamily reseeded(std::uint64_t seed) const {
        BekkFamily f = *this;
        f.options_.seed = seed;
        return f;
    }

    OrderIndex true_order() const {
        if (!generating_) throw std::logic_error("BekkFamily: no generating parameters configured");
        return OrderIndex{generating_->order.k1, generating_->order.k2};
    }

    std::vector<double> true_theta_for(const OrderIndex& k) const {
        if (!generating_) throw std::logic_error("BekkFamily: no generating parameters configured");
        return embed_theta(generating_->order, generating_->pack(), to_order(k));
    }

    const FitOptions& options() const { return options_; }
    FitOptions& options() { return options_; }
    const std::optional<BekkParams>& generating() const { return generating_; }

  private:
    static FamilyFit wrap(FitResult r) {
        FamilyFit f;
        f.theta = std::move(r.theta);
        f.log_lik = r.log_lik;
        f.has_value = !f.theta.empty();
        f.converged = r.converged;
        f.status = r.status;
        f.iterations = r.iterations;
        f.grad_norm = r.grad_norm;
        f.start_index = r.start_index;
        return f;
    }

    int m_;
    FitOptions options_;
    std::optional<BekkParams> generating_;
    long burn_in_ = 500;
};

static_assert(ModelFamily<BekkFamily>);
static_assert(EvaluatesAtPoint<BekkFamily>);
static_assert(HasAnalyticScore<BekkFamily>);
static_assert(BatchFitting<BekkFamily>);

} // namespace edcsel
