#include "edcsel/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "edcsel/rng.hpp"

namespace edcsel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_inf(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s = std::max(s, std::fabs(v));
    return s;
}

// Constraint geometry of one candidate order: stationarity radius and
// det C as functions of the raw packed vector (no symmetry assumed).
class ConstraintSet {
  public:
    ConstraintSet(const BekkOrder& order, const FitOptions& opts) : order_(order), layout_(order), opts_(opts), dup_(duplication_matrix(order.m)) {}

    double rho(const std::vector<double>& theta) const {
        const int m = order_.m;
        const long h = m * static_cast<long>(m + 1) / 2;
        Mat total(h, h);
        auto add_block = [&](long off) {
            Mat g(m, m);
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) g(i, j) = theta[static_cast<std::size_t>(off + j * m + i)];
            total += matmul(dup_.dplus, matmul(kronecker(g, g), dup_.d));
        };
        for (int l = 1; l <= order_.k2; ++l) add_block(layout_.a_offset(l));
        for (int l = 1; l <= order_.k1; ++l) add_block(layout_.b_offset(l));
        return spectral_radius(total);
    }

    double det_c(const std::vector<double>& theta) const {
        const int m = order_.m;
        Mat c(m, m);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) c(i, j) = theta[static_cast<std::size_t>(j * m + i)];
        return Lu(c).det();
    }

    bool in_box(const std::vector<double>& theta) const {
        for (double v : theta)
            if (!std::isfinite(v) || std::fabs(v) > opts_.theta_box) return false;
        return true;
    }

    // log-barrier value; -inf outside the open feasible set
    double barrier(const std::vector<double>& theta) const {
        if (!in_box(theta)) return -kInf;
        const double rm = opts_.rho_max - rho(theta);
        if (rm <= 0.0) return -kInf;
        const double dm = det_c(theta) - opts_.c_det_floor;
        if (dm <= 0.0) return -kInf;
        return std::log(rm) + std::log(dm);
    }

    bool feasible(const std::vector<double>& theta) const { return std::isfinite(barrier(theta)); }

  private:
    BekkOrder order_;
    ThetaLayout layout_;
    FitOptions opts_;
    DuplicationPair dup_;
};

// Barrier-augmented mean-objective: minimize
//   F(theta) = -logL/n_eff - mu * barrier(theta).
class BarrierProblem {
  public:
    BarrierProblem(const BekkOrder& order, const PathSample& path, const FitOptions& opts, long presample)
        : evaluator_(order, path, presample, opts.presample_init), constraints_(order, opts), gamma_(order.gamma()) {}

    void set_mu(double mu) { mu_ = mu; }
    long gamma() const { return gamma_; }
    long n_eff() const { return evaluator_.n_eff(); }

    double value(const std::vector<double>& theta) {
        const double bar = constraints_.barrier(theta);
        if (!std::isfinite(bar)) return kInf;
        double ll = 0.0;
        if (!evaluator_.log_lik(theta.data(), &ll)) return kInf;
        return -ll / static_cast<double>(n_eff()) - mu_ * bar;
    }

    // Value + gradient: analytic score for the likelihood part, central
    // finite differences for the (data-free, cheap) barrier part.
    double value_grad(const std::vector<double>& theta, std::vector<double>& grad) {
        const double bar = constraints_.barrier(theta);
        if (!std::isfinite(bar)) return kInf;
        double ll = 0.0;
        score_buf_.assign(static_cast<std::size_t>(gamma_), 0.0);
        if (!evaluator_.log_lik_score(theta.data(), &ll, score_buf_.data())) return kInf;
        const double ninv = 1.0 / static_cast<double>(n_eff());
        grad.assign(static_cast<std::size_t>(gamma_), 0.0);
        for (long i = 0; i < gamma_; ++i) grad[static_cast<std::size_t>(i)] = -score_buf_[static_cast<std::size_t>(i)] * ninv;
        if (mu_ > 0.0) {
            std::vector<double> probe = theta;
            for (long i = 0; i < gamma_; ++i) {
                const double xi = theta[static_cast<std::size_t>(i)];
                const double h = 1e-6 * std::max(1.0, std::fabs(xi));
                probe[static_cast<std::size_t>(i)] = xi + h;
                const double bp = constraints_.barrier(probe);
                probe[static_cast<std::size_t>(i)] = xi - h;
                const double bm = constraints_.barrier(probe);
                probe[static_cast<std::size_t>(i)] = xi;
                double db;
                if (std::isfinite(bp) && std::isfinite(bm)) {
                    db = (bp - bm) / (2.0 * h);
                } else if (std::isfinite(bp)) {
                    db = (bp - bar) / h;
                } else if (std::isfinite(bm)) {
                    db = (bar - bm) / h;
                } else {
                    db = 0.0;
                }
                grad[static_cast<std::size_t>(i)] -= mu_ * db;
            }
        }
        return -ll * ninv - mu_ * bar;
    }

    // Barrier-free readouts for reporting.
    bool raw_loglik(const std::vector<double>& theta, double& ll) { return evaluator_.log_lik(theta.data(), &ll); }
    bool raw_score_norm(const std::vector<double>& theta, double& ll, double& gnorm) {
        score_buf_.assign(static_cast<std::size_t>(gamma_), 0.0);
        if (!evaluator_.log_lik_score(theta.data(), &ll, score_buf_.data())) return false;
        double g = 0.0;
        for (double v : score_buf_) g = std::max(g, std::fabs(v));
        gnorm = g / static_cast<double>(n_eff());
        return true;
    }
    const ConstraintSet& constraints() const { return constraints_; }
    const std::string& fail_reason() const { return evaluator_.fail_reason(); }

  private:
    BekkEvaluator evaluator_;
    ConstraintSet constraints_;
    long gamma_;
    double mu_ = 0.0;
    std::vector<double> score_buf_;
};

// Symmetrize the C block in place; the feasible set has symmetric C and
// the projection removes floating-point drift along the redundant
// antisymmetric directions.
void project_c_block(std::vector<double>& theta, int m) {
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double v = 0.5 * (theta[static_cast<std::size_t>(j * m + i)] + theta[static_cast<std::size_t>(i * m + j)]);
            theta[static_cast<std::size_t>(j * m + i)] = v;
            theta[static_cast<std::size_t>(i * m + j)] = v;
        }
}

struct InnerResult {
    std::vector<double> x;
    double f = kInf;
    long iterations = 0;
    double grad_inf = kInf;
};

// BFGS minimization with Armijo backtracking. Iterates stay strictly
// feasible (infeasible trial points evaluate to +inf and are rejected by
// the line search).
InnerResult bfgs_minimize(BarrierProblem& prob, std::vector<double> x, int m, double tol, long max_iter) {
    const long n = prob.gamma();
    InnerResult out;
    std::vector<double> g, gnew, d, xnew, s, y, hy;
    double f = prob.value_grad(x, g);
    if (!std::isfinite(f)) {
        out.x = std::move(x);
        return out;
    }
    // dense inverse-Hessian approximation
    std::vector<double> hinv(static_cast<std::size_t>(n * n), 0.0);
    auto reset_h = [&]() {
        std::fill(hinv.begin(), hinv.end(), 0.0);
        for (long i = 0; i < n; ++i) hinv[static_cast<std::size_t>(i * n + i)] = 1.0;
    };
    reset_h();
    bool first_update = true;
    bool tried_reset = false;
    long iter = 0;
    for (; iter < max_iter; ++iter) {
        if (norm_inf(g) <= tol) break;
        d.assign(static_cast<std::size_t>(n), 0.0);
        for (long i = 0; i < n; ++i) {
            double acc = 0.0;
            for (long j = 0; j < n; ++j) acc -= hinv[static_cast<std::size_t>(i * n + j)] * g[static_cast<std::size_t>(j)];
            d[static_cast<std::size_t>(i)] = acc;
        }
        double gd = dot(g, d);
        if (!(gd < 0.0)) {
            reset_h();
            first_update = true;
            for (long i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = -g[static_cast<std::size_t>(i)];
            gd = dot(g, d);
            if (!(gd < 0.0)) break;
        }
        // Armijo backtracking
        double alpha = 1.0;
        double fnew = kInf;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            xnew = x;
            for (long i = 0; i < n; ++i) xnew[static_cast<std::size_t>(i)] += alpha * d[static_cast<std::size_t>(i)];
            project_c_block(xnew, m);
            fnew = prob.value(xnew);
            if (std::isfinite(fnew) && fnew <= f + 1e-4 * alpha * gd) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (!tried_reset) {
                tried_reset = true;
                reset_h();
                first_update = true;
                continue;
            }
            break;
        }
        tried_reset = false;
        const double fprev = f;
        f = prob.value_grad(xnew, gnew);
        if (!std::isfinite(f)) { // evaluation failed at accepted point (should not happen)
            f = fprev;
            break;
        }
        s.assign(static_cast<std::size_t>(n), 0.0);
        y.assign(static_cast<std::size_t>(n), 0.0);
        for (long i = 0; i < n; ++i) {
            s[static_cast<std::size_t>(i)] = xnew[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(i)] = gnew[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)];
        }
        x = xnew;
        g = gnew;
        const double sy = dot(s, y);
        const double snorm = std::sqrt(dot(s, s));
        const double ynorm = std::sqrt(dot(y, y));
        if (sy > 1e-12 * snorm * ynorm && sy > 0.0) {
            if (first_update) {
                const double scale = sy / dot(y, y);
                std::fill(hinv.begin(), hinv.end(), 0.0);
                for (long i = 0; i < n; ++i) hinv[static_cast<std::size_t>(i * n + i)] = scale;
                first_update = false;
            }
            hy.assign(static_cast<std::size_t>(n), 0.0);
            for (long i = 0; i < n; ++i) {
                double acc = 0.0;
                for (long j = 0; j < n; ++j) acc += hinv[static_cast<std::size_t>(i * n + j)] * y[static_cast<std::size_t>(j)];
                hy[static_cast<std::size_t>(i)] = acc;
            }
            const double rho = 1.0 / sy;
            const double yhy = dot(y, hy);
            const double coef = rho * rho * yhy + rho;
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j)
                    hinv[static_cast<std::size_t>(i * n + j)] +=
                        -rho * (s[static_cast<std::size_t>(i)] * hy[static_cast<std::size_t>(j)] + hy[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)]) +
                        coef * s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
        }
    }
    out.x = std::move(x);
    out.f = f;
    out.iterations = iter;
    out.grad_inf = norm_inf(g);
    return out;
}

// One complete barrier solve from a single start point.
struct StartOutcome {
    bool ok = false;
    std::vector<double> theta;
    double log_lik = -kInf;
    long iterations = 0;
    std::string status;
};

StartOutcome solve_from_start(const BekkOrder& order, const PathSample& path, const FitOptions& opts, long presample,
                              std::vector<double> x0) {
    StartOutcome out;
    BarrierProblem prob(order, path, opts, presample);
    project_c_block(x0, order.m);
    if (!prob.constraints().feasible(x0)) {
        out.status = "infeasible start";
        return out;
    }
    double probe_ll = 0.0;
    if (!prob.raw_loglik(x0, probe_ll)) {
        out.status = "likelihood failed at start: " + prob.fail_reason();
        return out;
    }
    // Final stage is barrier-free: the line search still rejects
    // infeasible points, so iterates stay strictly inside the feasible
    // set while the reported optimum carries no barrier bias.
    static constexpr double kMuStages[] = {1e-3, 1e-5, 0.0};
    std::vector<double> x = std::move(x0);
    long total_iters = 0;
    for (int stage = 0; stage < 3; ++stage) {
        prob.set_mu(kMuStages[stage]);
        const double stage_tol = (stage == 2) ? opts.grad_tol * 0.02 : opts.grad_tol * (stage == 0 ? 100.0 : 10.0);
        auto res = bfgs_minimize(prob, x, order.m, stage_tol, opts.max_iterations);
        if (!std::isfinite(res.f)) {
            out.status = "optimization failed: " + prob.fail_reason();
            return out;
        }
        x = std::move(res.x);
        total_iters += res.iterations;
    }
    double ll = 0.0;
    if (!prob.raw_loglik(x, ll)) {
        out.status = "likelihood failed at optimum: " + prob.fail_reason();
        return out;
    }
    out.ok = true;
    out.theta = std::move(x);
    out.log_lik = ll;
    out.iterations = total_iters;
    out.status = "ok";
    return out;
}

// Random start from a stationary template: C set to the (ridged) sample
// second-moment matrix, A/B diagonal with entries small enough that the
// stationarity radius stays below 1/4.
std::vector<double> random_start(const BekkOrder& order, const PathSample& path, const FitOptions& opts, Rng& rng) {
    const int m = order.m;
    const ThetaLayout layout(order);
    std::vector<double> theta(static_cast<std::size_t>(layout.size()), 0.0);
    // sample second-moment matrix with a small ridge
    Mat s(m, m);
    for (long t = 0; t < path.n; ++t) {
        const double* xt = path.row(t);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s(i, j) += xt[i] * xt[j];
    }
    s *= 1.0 / static_cast<double>(path.n);
    const double ridge = 1e-6 * std::max(s.trace() / m, 1e-8);
    for (int i = 0; i < m; ++i) s(i, i) += ridge;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) theta[static_cast<std::size_t>(j * m + i)] = s(i, j);
    const int lags = order.k1 + order.k2;
    if (lags > 0) {
        const double hi = std::min(0.5 / std::sqrt(static_cast<double>(lags)) * opts.start_scale, 0.9 / std::sqrt(static_cast<double>(lags)));
        auto fill_diag = [&](long off) {
            for (int i = 0; i < m; ++i) theta[static_cast<std::size_t>(off + i * m + i)] = rng.uniform(0.0, hi);
        };
        for (int l = 1; l <= order.k2; ++l) fill_diag(layout.a_offset(l));
        for (int l = 1; l <= order.k1; ++l) fill_diag(layout.b_offset(l));
    }
    return theta;
}

void normalize_signs(std::vector<double>& theta, const BekkOrder& order) {
    const ThetaLayout layout(order);
    const long mm = static_cast<long>(order.m) * order.m;
    auto flip_if_needed = [&](long off) {
        if (theta[static_cast<std::size_t>(off)] < 0.0)
            for (long i = 0; i < mm; ++i) theta[static_cast<std::size_t>(off + i)] = -theta[static_cast<std::size_t>(off + i)];
    };
    for (int l = 1; l <= order.k2; ++l) flip_if_needed(layout.a_offset(l));
    for (int l = 1; l <= order.k1; ++l) flip_if_needed(layout.b_offset(l));
}

} // namespace

std::vector<double> embed_theta(const BekkOrder& from, const std::vector<double>& theta, const BekkOrder& to) {
    if (from.m != to.m) throw std::invalid_argument("embed_theta: series dimensions differ");
    if (from.k1 > to.k1 || from.k2 > to.k2) throw std::invalid_argument("embed_theta: target order does not dominate");
    const ThetaLayout lf(from), lt(to);
    if (static_cast<long>(theta.size()) != lf.size()) throw std::invalid_argument("embed_theta: theta has wrong length");
    const long mm = static_cast<long>(from.m) * from.m;
    std::vector<double> out(static_cast<std::size_t>(lt.size()), 0.0);
    for (long i = 0; i < mm; ++i) out[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)];
    for (int l = 1; l <= from.k2; ++l)
        for (long i = 0; i < mm; ++i)
            out[static_cast<std::size_t>(lt.a_offset(l) + i)] = theta[static_cast<std::size_t>(lf.a_offset(l) + i)];
    for (int l = 1; l <= from.k1; ++l)
        for (long i = 0; i < mm; ++i)
            out[static_cast<std::size_t>(lt.b_offset(l) + i)] = theta[static_cast<std::size_t>(lf.b_offset(l) + i)];
    return out;
}

FitResult fit(const PathSample& data, const BekkOrder& order, const FitOptions& options, long presample,
              const std::vector<std::vector<double>>& warm_starts) {
    order.validate();
    if (options.starts < 1) throw std::invalid_argument("fit: need at least one start");
    if (options.rho_max >= 1.0 || options.rho_max <= 0.0) throw std::invalid_argument("fit: rho_max must be in (0,1)");
    const long p = (presample < 0 ? order.kbar() : presample);
    if (data.n - p <= order.gamma()) throw std::invalid_argument("fit: sample too short for this order");

    // assemble the start list: random starts first, then warm starts
    std::vector<std::vector<double>> starts;
    for (int i = 0; i < options.starts; ++i) {
        Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(i)}));
        starts.push_back(random_start(order, data, options, rng));
    }
    for (const auto& w : warm_starts) starts.push_back(w);

    std::vector<StartOutcome> outcomes(starts.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < static_cast<long>(starts.size()); ++i)
        outcomes[static_cast<std::size_t>(i)] = solve_from_start(order, data, options, p, starts[static_cast<std::size_t>(i)]);

    long best = -1;
    for (long i = 0; i < static_cast<long>(outcomes.size()); ++i) {
        if (!outcomes[static_cast<std::size_t>(i)].ok) continue;
        if (best < 0 || outcomes[static_cast<std::size_t>(i)].log_lik > outcomes[static_cast<std::size_t>(best)].log_lik) best = i;
    }

    FitResult result;
    if (best < 0) {
        result.converged = false;
        result.status = "all starts failed";
        for (const auto& o : outcomes)
            if (!o.status.empty()) {
                result.status += "; " + o.status;
                break;
            }
        return result;
    }
    auto& win = outcomes[static_cast<std::size_t>(best)];
    normalize_signs(win.theta, order);

    BarrierProblem reporter(order, data, options, p);
    double ll = 0.0, gnorm = 0.0;
    if (!reporter.raw_score_norm(win.theta, ll, gnorm)) {
        result.converged = false;
        result.status = "score failed at optimum: " + reporter.fail_reason();
        return result;
    }
    result.theta = std::move(win.theta);
    result.log_lik = ll;
    result.grad_norm = gnorm;
    result.converged = gnorm <= 10.0 * options.grad_tol;
    result.status = result.converged ? "converged" : "tolerance not met";
    result.start_index = static_cast<int>(best);
    result.iterations = win.iterations;
    result.rho = reporter.constraints().rho(result.theta);
    return result;
}

std::vector<FitResult> profile_fit_sequence(const PathSample& data, const std::vector<BekkOrder>& orders,
                                            const FitOptions& options) {
    if (orders.empty()) return {};
    long presample = 0;
    for (const auto& o : orders) {
        o.validate();
        if (o.m != orders.front().m) throw std::invalid_argument("profile_fit_sequence: mixed series dimensions");
        presample = std::max(presample, static_cast<long>(o.kbar()));
    }
    // parsimony-first processing order (gamma, then lexicographic k)
    std::vector<std::size_t> idx(orders.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& oa = orders[a];
        const auto& ob = orders[b];
        if (oa.gamma() != ob.gamma()) return oa.gamma() < ob.gamma();
        if (oa.k1 != ob.k1) return oa.k1 < ob.k1;
        return oa.k2 < ob.k2;
    });

    std::vector<FitResult> results(orders.size());
    std::vector<bool> done(orders.size(), false);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
        const std::size_t i = idx[pos];
        const auto& order = orders[i];
        // warm start: best completed fit of a dominated order, embedded
        std::vector<std::vector<double>> warm;
        long best_pred = -1;
        for (std::size_t j = 0; j < orders.size(); ++j) {
            if (!done[j] || !results[j].converged) continue;
            const auto& oj = orders[j];
            if (oj.k1 > order.k1 || oj.k2 > order.k2 || (oj.k1 == order.k1 && oj.k2 == order.k2)) continue;
            if (best_pred < 0 || results[j].log_lik > results[static_cast<std::size_t>(best_pred)].log_lik) best_pred = static_cast<long>(j);
        }
        if (best_pred >= 0)
            warm.push_back(embed_theta(orders[static_cast<std::size_t>(best_pred)], results[static_cast<std::size_t>(best_pred)].theta, order));
        FitOptions opts = options;
        opts.seed = derive_seed(options.seed, {static_cast<std::uint64_t>(order.k1), static_cast<std::uint64_t>(order.k2)});
        results[i] = fit(data, order, opts, presample, warm);
        done[i] = true;
    }
    return results;
}

} // namespace edcsel
