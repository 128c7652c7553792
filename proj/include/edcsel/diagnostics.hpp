#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "edcsel/family.hpp"
#include "edcsel/mat.hpp"
#include "edcsel/order.hpp"

namespace edcsel {

// Families that expose their generating order and the packed true
// parameter vector embedded at a probe order.
template <class F>
concept HasTrueParams = ModelFamily<F> && requires(const F& fam, const OrderIndex& k) {
    { fam.true_order() } -> std::same_as<OrderIndex>;
    { fam.true_theta_for(k) } -> std::same_as<std::vector<double>>;
};

struct TraceRow {
    std::string statistic;
    long n = 0;
    std::uint64_t seed = 0;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::string status = "ok";
};

struct DiagnosticTrace {
    std::string id;
    std::vector<long> grid;
    std::vector<TraceRow> rows;

    std::vector<double> values(const std::string& statistic, long n) const {
        std::vector<double> out;
        for (const auto& r : rows)
            if (r.statistic == statistic && r.n == n && r.status == "ok") out.push_back(r.value);
        return out;
    }

    struct Summary {
        double min = 0.0, median = 0.0, max = 0.0;
        long count = 0;
    };

    Summary summary(const std::string& statistic, long n) const {
        auto v = values(statistic, n);
        Summary s;
        s.count = static_cast<long>(v.size());
        if (v.empty()) return s;
        std::sort(v.begin(), v.end());
        s.min = v.front();
        s.max = v.back();
        const std::size_t h = v.size() / 2;
        s.median = (v.size() % 2 == 1) ? v[h] : 0.5 * (v[h - 1] + v[h]);
        return s;
    }
};

namespace detail {

inline void check_grid(const std::vector<long>& grid) {
    if (grid.empty()) throw std::invalid_argument("diagnostics: empty n grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1]) throw std::invalid_argument("diagnostics: n grid must be strictly increasing");
}

// Central finite-difference Hessian of the log-likelihood at theta,
// relative step 1e-4 (diagnostics-grade accuracy).
template <EvaluatesAtPoint F>
Mat fd_hessian(const F& fam, const typename F::Data& data, const OrderIndex& k, const std::vector<double>& theta) {
    const long d = static_cast<long>(theta.size());
    Mat h(d, d);
    std::vector<double> probe = theta;
    auto f_at = [&](long i, double di, long j, double dj) {
        probe[static_cast<std::size_t>(i)] += di;
        probe[static_cast<std::size_t>(j)] += dj;
        const double v = fam.log_lik_at(data, k, probe);
        probe[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)];
        probe[static_cast<std::size_t>(j)] = theta[static_cast<std::size_t>(j)];
        return v;
    };
    const double f0 = fam.log_lik_at(data, k, theta);
    std::vector<double> step(static_cast<std::size_t>(d));
    for (long i = 0; i < d; ++i) step[static_cast<std::size_t>(i)] = 1e-4 * std::max(1.0, std::fabs(theta[static_cast<std::size_t>(i)]));
    for (long i = 0; i < d; ++i) {
        const double hi = step[static_cast<std::size_t>(i)];
        h(i, i) = (f_at(i, hi, i, 0.0) - 2.0 * f0 + f_at(i, -hi, i, 0.0)) / (hi * hi);
        for (long j = i + 1; j < d; ++j) {
            const double hj = step[static_cast<std::size_t>(j)];
            const double v = (f_at(i, hi, j, hj) - f_at(i, hi, j, -hj) - f_at(i, -hi, j, hj) + f_at(i, -hi, j, -hj)) / (4.0 * hi * hj);
            h(i, j) = v;
            h(j, i) = v;
        }
    }
    return h;
}

template <ModelFamily F>
std::vector<FamilyFit> fit_pair(const F& fam, const typename F::Data& data, const OrderIndex& a, const OrderIndex& b) {
    std::vector<OrderIndex> ks = {a, b};
    if constexpr (BatchFitting<F>) {
        return fam.fit_candidates(data, ks);
    } else {
        return {fam.fit(data, a), fam.fit(data, b)};
    }
}

inline double loglog(long n) { return std::log(std::log(static_cast<double>(n))); }

} // namespace detail

// A3 probe: -(finite-difference Hessian of log L at the fitted
// parameters)/n per grid point. Emits the smallest eigenvalue
// ("a3_min_eig") per point and the Frobenius distance between
// consecutive grid points of the same seed ("a3_step_dist").
template <class F>
    requires EvaluatesAtPoint<F> && HasTrueParams<F>
DiagnosticTrace hessian_trace(const F& fam, const OrderIndex& k, const std::vector<long>& grid, const std::vector<std::uint64_t>& seeds) {
    detail::check_grid(grid);
    if (!lattice_le(fam.true_order(), k)) throw std::invalid_argument("hessian_trace: probe order must dominate the true order");
    DiagnosticTrace trace;
    trace.id = "a3_hessian";
    trace.grid = grid;
    std::vector<std::vector<TraceRow>> cells(seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long si = 0; si < static_cast<long>(seeds.size()); ++si) {
        const auto seed = seeds[static_cast<std::size_t>(si)];
        Mat prev;
        bool have_prev = false;
        for (long n : grid) {
            const auto data = fam.simulate(n, seed);
            const auto f = fam.fit(data, k);
            if (!f.has_value) {
                cells[static_cast<std::size_t>(si)].push_back({"a3_min_eig", n, seed, std::numeric_limits<double>::quiet_NaN(), "fit_failed"});
                have_prev = false;
                continue;
            }
            Mat h = detail::fd_hessian(fam, data, k, f.theta);
            h *= -1.0 / static_cast<double>(n);
            const auto ev = sym_eigenvalues(h);
            cells[static_cast<std::size_t>(si)].push_back({"a3_min_eig", n, seed, ev.front(), "ok"});
            if (have_prev) {
                const double dist = (h - prev).frobenius_norm();
                cells[static_cast<std::size_t>(si)].push_back({"a3_step_dist", n, seed, dist, "ok"});
            }
            prev = h;
            have_prev = true;
        }
    }
    for (const auto& c : cells) trace.rows.insert(trace.rows.end(), c.begin(), c.end());
    return trace;
}

// A4 probe: ||D1 log L(theta_true)|| / sqrt(2 n loglog n) via the
// analytic score, evaluated at the true parameters.
template <class F>
    requires HasAnalyticScore<F> && HasTrueParams<F>
DiagnosticTrace score_lil_trace(const F& fam, const OrderIndex& k, const std::vector<long>& grid, const std::vector<std::uint64_t>& seeds) {
    detail::check_grid(grid);
    if (!lattice_le(fam.true_order(), k)) throw std::invalid_argument("score_lil_trace: probe order must dominate the true order");
    if (grid.front() < 3) throw std::invalid_argument("score_lil_trace: n grid must start at 3 or above");
    DiagnosticTrace trace;
    trace.id = "a4_score_lil";
    trace.grid = grid;
    const auto theta = fam.true_theta_for(k);
    std::vector<std::vector<TraceRow>> cells(seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long si = 0; si < static_cast<long>(seeds.size()); ++si) {
        const auto seed = seeds[static_cast<std::size_t>(si)];
        for (long n : grid) {
            const auto data = fam.simulate(n, seed);
            TraceRow row{"a4_ratio", n, seed, std::numeric_limits<double>::quiet_NaN(), "ok"};
            try {
                const auto g = fam.score_at(data, k, theta);
                double norm2 = 0.0;
                for (double v : g) norm2 += v * v;
                row.value = std::sqrt(norm2) / std::sqrt(2.0 * static_cast<double>(n) * detail::loglog(n));
            } catch (const std::exception&) {
                row.status = "eval_failed";
            }
            cells[static_cast<std::size_t>(si)].push_back(row);
        }
    }
    for (const auto& c : cells) trace.rows.insert(trace.rows.end(), c.begin(), c.end());
    return trace;
}

// A5 probe: (log L_r(theta_hat_r) - log L_k(theta_hat_k)) / n for a
// probe order k that does not dominate the true order r; stabilizes at
// a positive constant when underfitting.
template <class F>
    requires HasTrueParams<F>
DiagnosticTrace underfit_gap_trace(const F& fam, const OrderIndex& k, const std::vector<long>& grid, const std::vector<std::uint64_t>& seeds) {
    detail::check_grid(grid);
    DiagnosticTrace trace;
    trace.id = "a5_underfit_gap";
    trace.grid = grid;
    const auto r = fam.true_order();
    std::vector<std::vector<TraceRow>> cells(seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long si = 0; si < static_cast<long>(seeds.size()); ++si) {
        const auto seed = seeds[static_cast<std::size_t>(si)];
        for (long n : grid) {
            const auto data = fam.simulate(n, seed);
            const auto fits = detail::fit_pair(fam, data, r, k);
            TraceRow row{"a5_gap_per_n", n, seed, std::numeric_limits<double>::quiet_NaN(), "ok"};
            if (fits[0].has_value && fits[1].has_value) {
                row.value = (fits[0].log_lik - fits[1].log_lik) / static_cast<double>(n);
            } else {
                row.status = "fit_failed";
            }
            cells[static_cast<std::size_t>(si)].push_back(row);
        }
    }
    for (const auto& c : cells) trace.rows.insert(trace.rows.end(), c.begin(), c.end());
    return trace;
}

// Overfit probe: (log L_k(theta_hat_k) - log L_r(theta_hat_r)) / loglog n
// for k strictly dominating r; bounded when the penalty floor mechanism
// is in force.
template <class F>
    requires HasTrueParams<F>
DiagnosticTrace overfit_gap_trace(const F& fam, const OrderIndex& k, const std::vector<long>& grid, const std::vector<std::uint64_t>& seeds) {
    detail::check_grid(grid);
    if (grid.front() < 3) throw std::invalid_argument("overfit_gap_trace: n grid must start at 3 or above");
    DiagnosticTrace trace;
    trace.id = "overfit_gap";
    trace.grid = grid;
    const auto r = fam.true_order();
    if (!lattice_lt(r, k)) throw std::invalid_argument("overfit_gap_trace: probe order must strictly dominate the true order");
    std::vector<std::vector<TraceRow>> cells(seeds.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long si = 0; si < static_cast<long>(seeds.size()); ++si) {
        const auto seed = seeds[static_cast<std::size_t>(si)];
        for (long n : grid) {
            const auto data = fam.simulate(n, seed);
            const auto fits = detail::fit_pair(fam, data, r, k);
            TraceRow row{"overfit_gap_per_loglog", n, seed, std::numeric_limits<double>::quiet_NaN(), "ok"};
            if (fits[0].has_value && fits[1].has_value) {
                row.value = (fits[1].log_lik - fits[0].log_lik) / detail::loglog(n);
            } else {
                row.status = "fit_failed";
            }
            cells[static_cast<std::size_t>(si)].push_back(row);
        }
    }
    for (const auto& c : cells) trace.rows.insert(trace.rows.end(), c.begin(), c.end());
    return trace;
}

} // namespace edcsel
