#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edcsel/mat.hpp"

namespace edcsel {

// BEKK-GARCH(k1, k2) order: k1 lags on the conditional covariance, k2
// lags on the observation outer products, series dimension m. The inner
// summand count N is carried for forward compatibility; all fitting and
// evaluation paths require N = 1.
struct BekkOrder {
    int m = 1;
    int k1 = 0;
    int k2 = 0;
    int N = 1;

    int kbar() const { return k1 > k2 ? k1 : k2; }
    long gamma() const { return static_cast<long>(m) * m * (1 + k1 + k2); }
    void validate() const;
};

// Packed-parameter layout: theta = (vec C, vec A_1, vec B_1, ...,
// interleaved by lag, skipping lags past k2 resp. k1). All blocks are
// full m x m in column-major (vec) order; length gamma().
struct ThetaLayout {
    explicit ThetaLayout(const BekkOrder& order);

    long c_offset() const { return 0; }
    long a_offset(int lag) const; // 1-based
    long b_offset(int lag) const; // 1-based
    long size() const { return size_; }

  private:
    int m_, k1_, k2_;
    std::vector<long> a_off_, b_off_;
    long size_;
};

// Structured parameter set (C, {A_l}, {B_l}) with a bijective packing to
// the flat theta vector. C must be symmetric (1e-10 relative) and
// positive definite.
struct BekkParams {
    BekkOrder order;
    Mat C;
    std::vector<Mat> A; // k2 matrices
    std::vector<Mat> B; // k1 matrices

    static BekkParams from_theta(const BekkOrder& order, const std::vector<double>& theta);
    std::vector<double> pack() const;

    // Flips the signs of any A_l / B_l whose first diagonal entry is
    // negative; the likelihood is invariant under these flips.
    BekkParams normalized() const;

    void validate() const;
};

struct StationarityCheck {
    bool stationary = false;
    double rho = 0.0;
};

// Geometric-ergodicity condition: spectral radius of
// sum_l D+ (A_l (x) A_l) D  +  sum_l D+ (B_l (x) B_l) D below one.
StationarityCheck is_stationary(const BekkParams& params);

// One step of the covariance recursion,
//   H_t = C + sum_l A_l x_{t-l} x'_{t-l} A'_l + sum_l B_l H_{t-l} B'_l,
// with lag buffers ordered most recent first.
Mat h_next(const BekkParams& params, const std::vector<std::vector<double>>& lagged_x, const std::vector<Mat>& lagged_h);

struct PathSample {
    long n = 0;
    int m = 1;
    std::vector<double> x; // n x m, row-major
    std::uint64_t seed = 0;
    long burn_in = 0;

    const double* row(long t) const { return &x[static_cast<std::size_t>(t) * static_cast<std::size_t>(m)]; }
    double* row(long t) { return &x[static_cast<std::size_t>(t) * static_cast<std::size_t>(m)]; }
};

// Simulates a stationary BEKK path: x_t = pd_sqrt(H_t) eps_t with eps_t
// i.i.d. standard m-variate normal drawn from a seed-keyed stream; the
// first burn_in draws are discarded. Rejects non-stationary parameters.
PathSample simulate(const BekkParams& params, long n, std::uint64_t seed, long burn_in = 500);

enum class PresampleInit {
    c_matrix,   // H_t = C(theta) for conditioned t (parameter-continuous)
    sample_cov, // H_t = sample second-moment matrix of the path
};

struct LikResult {
    bool ok = false;
    double log_lik = 0.0;
    std::string reason;
};

struct ScoreResult {
    bool ok = false;
    double log_lik = 0.0;
    std::vector<double> grad;
    std::string reason;
};

// Gaussian quasi-log-likelihood sum_{t>p} -1/2 x' H^{-1} x - 1/2 log det H,
// conditioning on the first p observations (p defaults to kbar;
// selection across nested orders should pass a common p so likelihoods
// stay exactly comparable). The -(m/2) log 2pi constant is omitted.
// Numerically singular H becomes a fit-failure result, not a crash.
LikResult log_likelihood(const BekkParams& params, const PathSample& path, long presample = -1,
                         PresampleInit init = PresampleInit::c_matrix);

// Analytic score via the forward derivative recursion of H_t. Gradient
// has length gamma(), ordered per ThetaLayout.
ScoreResult score(const BekkParams& params, const PathSample& path, long presample = -1,
                  PresampleInit init = PresampleInit::c_matrix);

// Allocation-free evaluation core used by the optimizer: buffers are
// owned by the instance, so each concurrent caller needs its own copy.
class BekkEvaluator {
  public:
    BekkEvaluator(const BekkOrder& order, const PathSample& path, long presample = -1,
                  PresampleInit init = PresampleInit::c_matrix);

    // Likelihood of an arbitrary packed theta (no symmetry assumed).
    bool log_lik(const double* theta, double* out);
    // Likelihood and gradient together.
    bool log_lik_score(const double* theta, double* log_lik_out, double* grad_out);

    long n_eff() const { return n_ - presample_; }
    long gamma() const { return gamma_; }
    const std::string& fail_reason() const { return fail_reason_; }

  private:
    bool recurse(const double* theta, bool with_score, double* log_lik_out, double* grad_out);

    BekkOrder order_;
    ThetaLayout layout_;
    const PathSample* path_;
    long n_;
    long presample_;
    PresampleInit init_;
    int m_;
    long mm_, gamma_;
    std::vector<double> presample_h_; // used for sample_cov init

    // workspaces (sized once in the constructor)
    std::vector<double> crm_, arm_, brm_; // row-major copies of the blocks
    std::vector<double> hring_;           // k1 lagged H matrices + current
    std::vector<double> dhring_;          // gamma x k1 lagged dH + current
    std::vector<double> w_;               // k2 vectors A_l x_{t-l}
    std::vector<double> lu_, hinv_, y_, z_, tmpv_, tmpm_, tmpm2_;
    std::vector<int> piv_;
    std::vector<int> block_kind_, block_lag_;
    std::string fail_reason_;
};

} // namespace edcsel
