#include "doctest.h"

#include <stdexcept>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "edcsel/bekk.hpp"
#include "edcsel/io.hpp"
#include "edcsel/rng.hpp"
#include "oracles.hpp"

using namespace edcsel;

namespace {

Mat random_pd(Rng& rng, int m, double scale = 1.0) {
    Mat a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
    Mat h = matmul(a, a.transpose());
    for (int i = 0; i < m; ++i) h(i, i) += 0.3;
    h *= scale;
    return h;
}

// Random stationary parameter point: shrink the lag matrices until the
// stationarity radius is comfortably below one.
BekkParams random_stationary(Rng& rng, int m, int k1, int k2, double rho_target = 0.85) {
    BekkParams p;
    p.order.m = m;
    p.order.k1 = k1;
    p.order.k2 = k2;
    p.C = random_pd(rng, m, 0.2);
    const double s0 = 0.6 / std::sqrt(static_cast<double>(std::max(k1 + k2, 1)) * m);
    for (int l = 0; l < k2; ++l) {
        Mat a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a(i, j) = rng.uniform(-s0, s0);
        if (a(0, 0) < 0.0) a *= -1.0;
        p.A.push_back(a);
    }
    for (int l = 0; l < k1; ++l) {
        Mat b(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) b(i, j) = rng.uniform(-s0, s0);
        if (b(0, 0) < 0.0) b *= -1.0;
        p.B.push_back(b);
    }
    while (true) {
        const auto st = is_stationary(p);
        if (st.stationary && st.rho < rho_target) break;
        for (auto& a : p.A) a *= 0.8;
        for (auto& b : p.B) b *= 0.8;
    }
    return p;
}

BekkParams scalar_params(double c, double a, double b) {
    BekkParams p;
    p.order = {1, 1, 1, 1};
    p.C = Mat{{c}};
    p.A = {Mat{{a}}};
    p.B = {Mat{{b}}};
    return p;
}

} // namespace

TEST_CASE("parameter packing round-trips exactly") {
    Rng rng(31);
    for (int rep = 0; rep < 20; ++rep) {
        const int m = 1 + static_cast<int>(rng.uniform_int(3));
        const int k1 = static_cast<int>(rng.uniform_int(3));
        const int k2 = static_cast<int>(rng.uniform_int(3));
        const auto p = random_stationary(rng, m, k1, k2);
        const auto theta = p.pack();
        CHECK(static_cast<long>(theta.size()) == p.order.gamma());
        const auto q = BekkParams::from_theta(p.order, theta);
        CHECK(q.pack() == theta);
        CHECK(q.C == p.C);
    }
    // gamma(k) = m^2 (1 + k1 + k2)
    BekkOrder o{2, 1, 1, 1};
    CHECK(o.gamma() == 12);

    // asymmetric C is rejected
    BekkOrder o2{2, 0, 0, 1};
    CHECK_THROWS_AS(BekkParams::from_theta(o2, {1.0, 0.5, -0.5, 1.0}), std::invalid_argument);
    // non-PD C is rejected
    CHECK_THROWS_AS(BekkParams::from_theta(o2, {1.0, 2.0, 2.0, 1.0}), std::domain_error);
}

TEST_CASE("h_next: scalar arithmetic and degenerate cases") {
    const auto p = scalar_params(0.1, std::sqrt(0.2), std::sqrt(0.7));
    const Mat h = h_next(p, {{1.0}}, {Mat{{0.5}}});
    CHECK(h(0, 0) == doctest::Approx(0.65).epsilon(1e-14));

    BekkParams iid;
    iid.order = {2, 0, 0, 1};
    iid.C = Mat{{0.5, 0.1}, {0.1, 0.4}};
    const Mat h2 = h_next(iid, {}, {});
    CHECK((h2 - iid.C).max_abs() == 0.0);
}

TEST_CASE("h_next matches a straight-line re-evaluation over 3 steps (m=2)") {
    Rng rng(77);
    const auto p = random_stationary(rng, 2, 1, 1);
    std::vector<std::vector<double>> xs = {{0.3, -0.2}, {-0.5, 0.1}, {0.2, 0.4}};
    Mat h = p.C;
    std::vector<double> xprev = {0.1, -0.3};
    for (int step = 0; step < 3; ++step) {
        const Mat got = h_next(p, {xprev}, {h});
        // independent straight-line evaluation of C + A x x' A' + B H B'
        Mat want = p.C;
        const auto& a = p.A[0];
        const auto& b = p.B[0];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double axi = 0.0, axj = 0.0;
                for (int t = 0; t < 2; ++t) {
                    axi += a(i, t) * xprev[static_cast<std::size_t>(t)];
                    axj += a(j, t) * xprev[static_cast<std::size_t>(t)];
                }
                want(i, j) += axi * axj;
            }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                double acc = 0.0;
                for (int u = 0; u < 2; ++u)
                    for (int v = 0; v < 2; ++v) acc += b(i, u) * h(u, v) * b(j, v);
                want(i, j) += acc;
            }
        CHECK((got - want).max_abs() < 1e-13);
        h = got;
        xprev = xs[static_cast<std::size_t>(step)];
    }
}

TEST_CASE("stationarity radius") {
    CHECK(is_stationary(scalar_params(0.1, 0.4, 0.7)).rho == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(is_stationary(scalar_params(0.1, 0.4, 0.7)).stationary);

    BekkParams zero;
    zero.order = {2, 0, 0, 1};
    zero.C = Mat::identity(2);
    CHECK(is_stationary(zero).rho == doctest::Approx(0.0));

    BekkParams big;
    big.order = {2, 1, 1, 1};
    big.C = Mat::identity(2);
    big.A = {0.9 * Mat::identity(2)};
    big.B = {0.9 * Mat::identity(2)};
    const auto st = is_stationary(big);
    CHECK(st.rho == doctest::Approx(1.62).epsilon(1e-12));
    CHECK_FALSE(st.stationary);
}

TEST_CASE("simulation: iid covariance, determinism, scalar variance identity") {
    BekkParams iid;
    iid.order = {2, 0, 0, 1};
    iid.C = Mat::identity(2);
    const auto path = simulate(iid, 50000, 4, 100);
    Mat cov(2, 2);
    for (long t = 0; t < path.n; ++t) {
        const double* x = path.row(t);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) cov(i, j) += x[i] * x[j];
    }
    cov *= 1.0 / static_cast<double>(path.n);
    CHECK(std::fabs(cov(0, 0) - 1.0) < 0.03);
    CHECK(std::fabs(cov(1, 1) - 1.0) < 0.03);
    CHECK(std::fabs(cov(0, 1)) < 0.03);

    const auto p2 = simulate(iid, 1000, 99, 50);
    const auto p3 = simulate(iid, 1000, 99, 50);
    CHECK(p2.x == p3.x);

    const auto gp = scalar_params(0.1, std::sqrt(0.09), std::sqrt(0.36));
    const auto sp = simulate(gp, 100000, 8, 500);
    double m2 = 0.0;
    for (long t = 0; t < sp.n; ++t) m2 += sp.row(t)[0] * sp.row(t)[0];
    m2 /= static_cast<double>(sp.n);
    const double want = 0.1 / (1.0 - 0.09 - 0.36);
    CHECK(std::fabs(m2 - want) / want < 0.05);

    BekkParams unstable = scalar_params(0.1, 0.8, 0.8);
    CHECK_THROWS_AS(simulate(unstable, 100, 1, 10), std::domain_error);
}

TEST_CASE("log-likelihood: point values and the Gaussian oracle") {
    BekkParams unit = scalar_params(1.0, 0.0, 0.0);
    unit.order = {1, 0, 0, 1};
    unit.A.clear();
    unit.B.clear();

    PathSample zero;
    zero.n = 1;
    zero.m = 1;
    zero.x = {0.0};
    CHECK(log_likelihood(unit, zero, 0).log_lik == doctest::Approx(0.0));

    PathSample one;
    one.n = 1;
    one.m = 1;
    one.x = {1.0};
    CHECK(log_likelihood(unit, one, 0).log_lik == doctest::Approx(-0.5));

    // m=2 iid: matches the exact N(0, C) log-density sum up to the
    // omitted -(n m / 2) log 2pi constant
    Rng rng(13);
    BekkParams iid;
    iid.order = {2, 0, 0, 1};
    iid.C = random_pd(rng, 2, 0.7);
    const auto path = simulate(iid, 10, 21, 10);
    const auto got = log_likelihood(iid, path);
    REQUIRE(got.ok);
    Lu lu(iid.C);
    double want = 0.0;
    for (long t = 0; t < path.n; ++t) {
        const std::vector<double> x = {path.row(t)[0], path.row(t)[1]};
        const auto y = lu.solve(x);
        want += -0.5 * (x[0] * y[0] + x[1] * y[1]) - 0.5 * std::log(lu.det());
    }
    CHECK(got.log_lik == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("m=1 k=(1,1) reduces to scalar GARCH(1,1) exactly") {
    Rng rng(55);
    for (int rep = 0; rep < 20; ++rep) {
        const double c = rng.uniform(0.05, 0.5);
        const double a = std::sqrt(rng.uniform(0.01, 0.3));
        const double b = std::sqrt(rng.uniform(0.05, 0.5));
        const auto p = scalar_params(c, a, b);
        const auto path = simulate(p, 300, rng.next_u64(), 200);
        std::vector<double> x(path.x);
        const double want = oracles::scalar_garch11_loglik(x, c, a * a, b * b);
        const auto got = log_likelihood(p, path);
        REQUIRE(got.ok);
        CHECK(got.log_lik == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("H_t stays positive definite along simulated paths") {
    Rng rng(66);
    for (int rep = 0; rep < 5; ++rep) {
        const auto p = random_stationary(rng, 2, 1, 1);
        const auto path = simulate(p, 200, rng.next_u64(), 100);
        Mat h = p.C;
        std::vector<double> xprev = {0.0, 0.0};
        for (long t = 0; t < path.n; ++t) {
            h = h_next(p, {xprev}, {h});
            const auto ev = sym_eigenvalues(h);
            CHECK(ev.front() > 0.0);
            xprev = {path.row(t)[0], path.row(t)[1]};
        }
    }
}

TEST_CASE("zero-padded embedding leaves the likelihood identical under common conditioning") {
    Rng rng(88);
    const auto p = random_stationary(rng, 1, 1, 1);
    const auto path = simulate(p, 400, 5, 200);

    BekkParams padded;
    padded.order = {1, 2, 2, 1};
    padded.C = p.C;
    padded.A = {p.A[0], Mat{{0.0}}};
    padded.B = {p.B[0], Mat{{0.0}}};

    const long common = padded.order.kbar();
    const auto small = log_likelihood(p, path, common);
    const auto big = log_likelihood(padded, path, common);
    REQUIRE(small.ok);
    REQUIRE(big.ok);
    CHECK(big.log_lik == small.log_lik); // exact, not approximate
}

TEST_CASE("analytic score matches central finite differences") {
    Rng rng(101);
    for (int m : {1, 2}) {
        for (int rep = 0; rep < 6; ++rep) {
            const auto p = random_stationary(rng, m, 1, 1);
            const auto path = simulate(p, 300, rng.next_u64(), 150);
            const auto sc = score(p, path);
            REQUIRE(sc.ok);
            BekkEvaluator ev(p.order, path);
            auto theta = p.pack();
            double gnorm = 0.0;
            for (double v : sc.grad) gnorm = std::max(gnorm, std::fabs(v));
            for (std::size_t i = 0; i < theta.size(); ++i) {
                const double xi = theta[i];
                const double h = 1e-5 * std::max(1.0, std::fabs(xi));
                double fp = 0.0, fm = 0.0;
                theta[i] = xi + h;
                REQUIRE(ev.log_lik(theta.data(), &fp));
                theta[i] = xi - h;
                REQUIRE(ev.log_lik(theta.data(), &fm));
                theta[i] = xi;
                const double fd = (fp - fm) / (2.0 * h);
                const double rel = std::fabs(fd - sc.grad[i]) / std::max(1.0, std::fabs(sc.grad[i]));
                CHECK(rel < 1e-5);
            }
        }
    }
}

TEST_CASE("score sanity: iid gradient vanishes at the second moment") {
    BekkParams unit = scalar_params(1.0, 0.0, 0.0);
    unit.order = {1, 0, 0, 1};
    unit.A.clear();
    unit.B.clear();
    const auto path = simulate(unit, 5000, 3, 100);
    double m2 = 0.0;
    for (long t = 0; t < path.n; ++t) m2 += path.row(t)[0] * path.row(t)[0];
    m2 /= static_cast<double>(path.n);

    BekkParams at = unit;
    at.C = Mat{{m2}};
    const auto sc = score(at, path, 0);
    REQUIRE(sc.ok);
    CHECK(std::fabs(sc.grad[0]) < 1e-8 * static_cast<double>(path.n));

    // all-zero data: d logL / dc = -n/(2c) < 0
    PathSample zeros;
    zeros.n = 3;
    zeros.m = 1;
    zeros.x = {0.0, 0.0, 0.0};
    const auto sz = score(at, zeros, 0);
    REQUIRE(sz.ok);
    CHECK(sz.grad[0] == doctest::Approx(-3.0 / (2.0 * m2)).epsilon(1e-12));
}

TEST_CASE("numerically degenerate H signals fit failure instead of crashing") {
    // a raw theta with a near-singular C block (as an optimizer probe
    // would produce) trips the condition cap
    PathSample path;
    path.n = 4;
    path.m = 2;
    path.x = {0.1, 0.1, -0.1, 0.2, 0.0, 0.1, 0.05, -0.02};
    BekkOrder order{2, 0, 0, 1};
    BekkEvaluator ev(order, path, 0);
    const std::vector<double> theta = {1.0, 0.0, 0.0, 1e-14};
    double ll = 0.0;
    CHECK_FALSE(ev.log_lik(theta.data(), &ll));
    CHECK_FALSE(ev.fail_reason().empty());

    // the validated type rejects such a C outright
    CHECK_THROWS_AS(BekkParams::from_theta(order, theta), std::domain_error);
}

TEST_CASE("path CSV and params JSON round-trip") {
    Rng rng(202);
    const auto p = random_stationary(rng, 2, 1, 1);
    const auto path = simulate(p, 50, 12, 20);

    const auto dir = std::filesystem::temp_directory_path() / "edcsel_io_test";
    std::filesystem::create_directories(dir);
    const auto csv = (dir / "path.csv").string();
    write_path_csv(path, csv);
    const auto back = read_path_csv(csv);
    CHECK(back.n == path.n);
    CHECK(back.m == path.m);
    for (std::size_t i = 0; i < path.x.size(); ++i) CHECK(back.x[i] == path.x[i]);

    const auto j = bekk_params_to_json(p);
    const auto q = bekk_params_from_json(j);
    CHECK(q.pack() == p.pack());
    std::filesystem::remove_all(dir);
}
