#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edcsel/bekk.hpp"
#include "edcsel/order.hpp"

namespace edcsel {

// Constrained maximum-likelihood options. The feasible region is the
// open set {rho(sum A~ + sum B~) < rho_max, det C > c_det_floor,
// |theta_i| <= theta_box}; it concretizes the compactness requirement on
// the parameter space.
struct FitOptions {
    long max_iterations = 200;    // per barrier stage
    double grad_tol = 1e-6;       // on the per-observation (mean) objective
    int starts = 5;               // random starts
    double start_scale = 1.0;     // dispersion multiplier for random starts
    double rho_max = 0.999;       // stationarity margin
    double c_det_floor = 1e-12;   // PD floor for C
    double theta_box = 1e3;       // hard bound on every coordinate
    std::uint64_t seed = 0;
    PresampleInit presample_init = PresampleInit::c_matrix;
};

struct FitResult {
    std::vector<double> theta;    // packed, sign-normalized
    double log_lik = 0.0;         // full-sum, barrier-free
    bool converged = false;
    std::string status;
    double grad_norm = 0.0;       // inf-norm of the mean-scale score at theta
    int start_index = -1;         // which start won
    long iterations = 0;          // total BFGS iterations of the winning start
    double rho = 0.0;             // stationarity radius at theta
};

// Multi-start quasi-Newton ascent on the BEKK quasi-log-likelihood with
// a logarithmic barrier on (rho_max - rho) and (det C - floor). The
// reported log-likelihood and gradient norm are barrier-free. Warm
// starts are tried alongside the random starts.
FitResult fit(const PathSample& data, const BekkOrder& order, const FitOptions& options, long presample = -1,
              const std::vector<std::vector<double>>& warm_starts = {});

// Fits a whole candidate list in parsimony-first order, warm-starting
// each candidate from the zero-padded embedding of the best completed
// smaller order. A common conditioning window (max kbar over the list)
// keeps the likelihoods exactly comparable across candidates.
std::vector<FitResult> profile_fit_sequence(const PathSample& data, const std::vector<BekkOrder>& orders,
                                            const FitOptions& options);

// Zero-padded embedding of a smaller-order parameter vector into a
// larger order's layout; the likelihood value is unchanged under a
// common conditioning window.
std::vector<double> embed_theta(const BekkOrder& from, const std::vector<double>& theta, const BekkOrder& to);

} // namespace edcsel
