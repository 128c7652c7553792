#include "doctest.h"

#include <stdexcept>

#include <cmath>

#include "edcsel/bekk_family.hpp"
#include "edcsel/estimator.hpp"
#include "edcsel/rng.hpp"
#include "edcsel/selection.hpp"

using namespace edcsel;

namespace {

BekkParams scalar_params(double c, double a, double b) {
    BekkParams p;
    p.order = {1, 1, 1, 1};
    p.C = Mat{{c}};
    p.A = {Mat{{a}}};
    p.B = {Mat{{b}}};
    return p;
}

PathSample iid_path(long n, std::uint64_t seed, double var = 1.0) {
    BekkParams p;
    p.order = {1, 0, 0, 1};
    p.C = Mat{{var}};
    return simulate(p, n, seed, 50);
}

} // namespace

TEST_CASE("iid fit recovers the closed-form variance MLE") {
    const auto path = iid_path(2000, 17);
    double m2 = 0.0;
    for (long t = 0; t < path.n; ++t) m2 += path.row(t)[0] * path.row(t)[0];
    m2 /= static_cast<double>(path.n);

    FitOptions opts;
    opts.seed = 5;
    BekkOrder order{1, 0, 0, 1};
    const auto r = fit(path, order, opts);
    REQUIRE(r.converged);
    CHECK(std::fabs(r.theta[0] - m2) < 1e-8);
    CHECK(r.grad_norm < 10.0 * opts.grad_tol);
}

TEST_CASE("fit stays strictly inside the constraint set and is deterministic") {
    const auto truth = scalar_params(0.1, std::sqrt(0.15), std::sqrt(0.5));
    const auto path = simulate(truth, 1500, 23, 300);
    FitOptions opts;
    opts.seed = 9;
    BekkOrder order{1, 1, 1, 1};
    const auto r1 = fit(path, order, opts);
    const auto r2 = fit(path, order, opts);
    REQUIRE(r1.converged);
    CHECK(r1.theta == r2.theta); // bit-for-bit
    CHECK(r1.log_lik == r2.log_lik);
    CHECK(r1.rho < opts.rho_max);
    // sign normalization: first diagonal entries of A and B are >= 0
    const auto p = BekkParams::from_theta(order, r1.theta);
    CHECK(p.A[0](0, 0) >= 0.0);
    CHECK(p.B[0](0, 0) >= 0.0);
}

TEST_CASE("MLE dominates the true parameters on simulated data") {
    Rng rng(31);
    for (int rep = 0; rep < 5; ++rep) {
        const auto truth = scalar_params(0.1, std::sqrt(0.1), std::sqrt(0.45));
        const auto path = simulate(truth, 1200, rng.next_u64(), 200);
        FitOptions opts;
        opts.seed = rep;
        const auto r = fit(path, truth.order, opts);
        REQUIRE(r.converged);
        const auto at_truth = log_likelihood(truth, path);
        REQUIRE(at_truth.ok);
        CHECK(r.log_lik >= at_truth.log_lik - 1e-6);
    }
}

TEST_CASE("nesting: the larger order never fits worse") {
    const auto path = iid_path(1200, 41);
    FitOptions opts;
    opts.seed = 3;
    const auto seq = profile_fit_sequence(path, {BekkOrder{1, 0, 0, 1}, BekkOrder{1, 1, 1, 1}}, opts);
    REQUIRE(seq.size() == 2);
    REQUIRE(seq[0].converged);
    REQUIRE(seq[1].converged);
    CHECK(seq[1].log_lik >= seq[0].log_lik - 1e-9);
}

TEST_CASE("embedding pads with zero lag matrices") {
    const BekkOrder small{1, 0, 0, 1}, big{1, 1, 1, 1};
    const auto theta = embed_theta(small, {0.42}, big);
    CHECK(theta == std::vector<double>{0.42, 0.0, 0.0});
    CHECK_THROWS_AS(embed_theta(big, {1.0, 0.1, 0.2}, small), std::invalid_argument);
}

TEST_CASE("warm-started fit is at least as good as its warm-start point") {
    const auto truth = scalar_params(0.1, std::sqrt(0.09), std::sqrt(0.36));
    const auto path = simulate(truth, 2500, 77, 300);
    FitOptions opts;
    opts.seed = 11;
    const BekkOrder small{1, 0, 0, 1}, big{1, 1, 1, 1};
    const auto base = fit(path, small, opts, big.kbar());
    REQUIRE(base.converged);
    const auto warm_theta = embed_theta(small, base.theta, big);
    const auto warmed = fit(path, big, opts, big.kbar(), {warm_theta});
    REQUIRE(warmed.converged);
    // same conditioning window: the embedded point evaluates to exactly
    // the small-order likelihood, so ascent can only improve on it
    CHECK(warmed.log_lik >= base.log_lik - 1e-9);
}

TEST_CASE("parameter recovery on a scalar GARCH(1,1)") {
    // Per-coordinate closeness thresholds fixed by the seeded pilot in
    // docs/pilots.md: the b coordinate is weakly identified at this DGP
    // (a^2 = 0.09 gives near-Gaussian kurtosis), so its spread at
    // n=20000 is several times wider than c's and a's.
    const double c = 0.1, a = 0.3, b = 0.6;
    const auto truth = scalar_params(c, a, b);
    const int reps = 10;
    int close = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const auto path = simulate(truth, 20000, derive_seed(404, {static_cast<std::uint64_t>(rep)}), 500);
        FitOptions opts;
        opts.seed = derive_seed(405, {static_cast<std::uint64_t>(rep)});
        opts.starts = 2;
        const auto r = fit(path, truth.order, opts);
        if (!r.converged) continue;
        const bool ok = std::fabs(r.theta[0] - c) < 0.05 && std::fabs(r.theta[1] - a) < 0.05 && std::fabs(r.theta[2] - b) < 0.15;
        if (ok) ++close;
    }
    CHECK(close >= reps * 9 / 10);
}

TEST_CASE("profile sequence over a full grid converges everywhere (pilot contract)") {
    const auto truth = scalar_params(0.1, std::sqrt(0.09), std::sqrt(0.36));
    const auto path = simulate(truth, 1500, 99, 300);
    FitOptions opts;
    opts.seed = 2;
    opts.starts = 3;
    std::vector<BekkOrder> grid;
    for (int k1 = 0; k1 <= 2; ++k1)
        for (int k2 = 0; k2 <= 2; ++k2) grid.push_back(BekkOrder{1, k1, k2, 1});
    const auto seq = profile_fit_sequence(path, grid, opts);
    int converged = 0;
    for (const auto& r : seq)
        if (r.converged) ++converged;
    CHECK(converged >= 9); // all nine candidates on this fixture
}

TEST_CASE("select_order on the BEKK family picks the true order at moderate n") {
    const auto truth = scalar_params(0.15, std::sqrt(0.2), std::sqrt(0.5));
    FitOptions opts;
    opts.starts = 3;
    const BekkFamily fam(truth, opts);
    const auto data = fam.simulate(4000, 31);
    const auto report = select_order(fam.reseeded(7), data, OrderIndex{1, 1}, PenaltyRule::bic(), 31);
    CHECK(report.chosen == OrderIndex{1, 1});
}
