#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "edcsel/family.hpp"
#include "edcsel/order.hpp"
#include "edcsel/penalty.hpp"

namespace edcsel {

// EDC(k) = -log L + c_n * gamma(k).
inline double edc_score(double log_lik, long n, long gamma_k, const PenaltyRule& rule) {
    if (n < 2) throw std::invalid_argument("edc_score: n must be >= 2");
    return -log_lik + rule(n) * static_cast<double>(gamma_k);
}

struct CandidateRecord {
    OrderIndex k;
    double log_lik = std::numeric_limits<double>::quiet_NaN();
    long gamma = 0;
    double c_n = 0.0;
    double score = std::numeric_limits<double>::quiet_NaN();
    bool fit_ok = false;
    std::string status;
};

struct SelectionReport {
    std::vector<CandidateRecord> candidates; // lexicographic order of k
    OrderIndex chosen;
    bool has_choice = false;
    long n = 0;
    std::string penalty_id;
    std::uint64_t seed = 0;
};

// Scores pre-computed fits and picks the argmin. Ties break toward the
// smallest gamma(k), then lexicographically smallest k. Candidates whose
// fit failed carry a status and are excluded from the argmin.
template <ModelFamily F>
SelectionReport score_and_select(const F& family, const std::vector<OrderIndex>& ks, const std::vector<FamilyFit>& fits,
                                 long n, const PenaltyRule& rule, std::uint64_t seed = 0) {
    if (ks.size() != fits.size()) throw std::invalid_argument("score_and_select: size mismatch");
    SelectionReport rep;
    rep.n = n;
    rep.penalty_id = rule.id();
    rep.seed = seed;
    const double c_n = rule(n);
    long best = -1;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CandidateRecord rec;
        rec.k = ks[i];
        rec.gamma = family.param_count(ks[i]);
        rec.c_n = c_n;
        rec.fit_ok = fits[i].has_value;
        rec.status = fits[i].status;
        if (fits[i].has_value) {
            rec.log_lik = fits[i].log_lik;
            rec.score = edc_score(rec.log_lik, n, rec.gamma, rule);
        }
        rep.candidates.push_back(std::move(rec));
        const auto& cur = rep.candidates.back();
        if (!cur.fit_ok) continue;
        if (best < 0) {
            best = static_cast<long>(i);
            continue;
        }
        const auto& b = rep.candidates[static_cast<std::size_t>(best)];
        if (cur.score < b.score ||
            (cur.score == b.score && (cur.gamma < b.gamma || (cur.gamma == b.gamma && lex_less(cur.k, b.k))))) {
            best = static_cast<long>(i);
        }
    }
    if (best < 0) throw std::runtime_error("select_order: every candidate fit failed");
    rep.chosen = ks[static_cast<std::size_t>(best)];
    rep.has_choice = true;
    return rep;
}

// Fits every candidate k <= K, scores each under the penalty rule, and
// returns the full report with the argmin.
template <ModelFamily F>
SelectionReport select_order(const F& family, const typename F::Data& data, const OrderIndex& K, const PenaltyRule& rule,
                             std::uint64_t seed = 0) {
    if (K.dim() != family.lattice_dim()) throw std::invalid_argument("select_order: bound has wrong lattice dimension");
    const long n = family.sample_size(data);
    if (n < family.min_sample(K)) throw std::invalid_argument("select_order: sample too short for search bound");
    const auto ks = candidates_up_to(K);
    std::vector<FamilyFit> fits;
    if constexpr (BatchFitting<F>) {
        fits = family.fit_candidates(data, ks);
    } else {
        fits.reserve(ks.size());
        for (const auto& k : ks) fits.push_back(family.fit(data, k));
    }
    return score_and_select(family, ks, fits, n, rule, seed);
}

} // namespace edcsel
