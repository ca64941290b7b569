#include "doctest.h"

#include "cover/covering.hpp"
#include "cover/rng.hpp"

#include <algorithm>
#include <stdexcept>
#include <cmath>

using namespace cover;

TEST_CASE("ball_net lattices") {
    // 1-D, spacing 2 tau / sqrt(1) = 1, reach 1.5
    auto net = ball_net(std::vector<double>{0.0}, 1.0, 0.5);
    std::vector<double> xs;
    for (const auto& p : net) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    REQUIRE(xs.size() == 3);
    CHECK(xs[0] == -1.0);
    CHECK(xs[1] == 0.0);
    CHECK(xs[2] == 1.0);

    // cell wider than the ball collapses to the center
    auto single = ball_net(std::vector<double>{0.0}, 1.0, 2.0);
    REQUIRE(single.size() == 1);
    CHECK(single[0][0] == 0.0);

    CHECK_THROWS_AS(ball_net(std::vector<double>{0.0}, -1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(ball_net(std::vector<double>{0.0}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("ball_net covers the ball within tau (Monte Carlo)") {
    const std::vector<double> center{0.0, 0.0};
    const double radius = 1.0, tau = 0.5;
    const auto net = ball_net(center, radius, tau);
    CHECK(net.size() >= 9);
    auto rng = seeded_engine(5);
    double worst = 0.0;
    for (int t = 0; t < 100000; ++t) {
        // uniform in the disk
        const double a = 2.0 * std::numbers::pi * uniform01(rng);
        const double r = radius * std::sqrt(uniform01(rng));
        const std::vector<double> p{r * std::cos(a), r * std::sin(a)};
        double best = 1e300;
        for (const auto& q : net) best = std::min(best, squared_distance(p, q));
        worst = std::max(worst, best);
    }
    CHECK(std::sqrt(worst) <= tau + 1e-12);
}

TEST_CASE("far point construction") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X0 = PointSet::from_rows({{0.0}});
    const auto far = far_point(g, X0, 0.1);
    CHECK(far[0] == doctest::Approx(2.0 * std::sqrt(std::log(10.0))).epsilon(1e-15));
    CHECK(g.eval(far, X0[0]) < 0.1);

    KernelSpec t{KernelFamily::triangle, 1.0, 0.1};
    const PointSet X5 = PointSet::from_rows({{5.0, -3.0}, {1.0, 2.0}});
    const auto far5 = far_point(t, X5, 0.5);
    CHECK(far5[0] == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(far5[1] == 0.0);
    for (std::size_t i = 0; i < X5.size(); ++i) CHECK(t.eval(far5, X5[i]) < 0.5);
}

TEST_CASE("naive cover of a single triangle-kernel point") {
    KernelSpec t{KernelFamily::triangle, 1.0, 0.1};
    const PointSet X = PointSet::from_rows({{0.0}});
    const Cover c = naive_cover(t, X, 0.5);

    // r = 0.5, tau = 0.5, spacing 1: lattice {-1, 0, 1} plus the far point
    std::vector<double> xs;
    for (std::size_t i = 0; i < c.queries.size(); ++i) xs.push_back(c.queries[i][0]);
    std::sort(xs.begin(), xs.end());
    REQUIRE(xs.size() == 3);
    CHECK(xs[0] == -1.0);
    CHECK(xs[1] == 0.0);
    CHECK(xs[2] == 1.0);
    REQUIRE(c.far.has_value());

    // exhaustive 1-D certification at step 1e-3
    double worst = 0.0;
    const Signature far_sig = signature(t, X, *c.far);
    for (double q = -3.0; q <= 3.0; q += 1e-3) {
        const Signature sq = signature(t, X, std::vector<double>{q});
        double best = ddelta(sq, far_sig);
        for (std::size_t i = 0; i < c.queries.size(); ++i)
            best = std::min(best, ddelta(sq, signature(t, X, c.queries[i])));
        worst = std::max(worst, best);
    }
    CHECK(worst <= 0.5 + 1e-12);
}

TEST_CASE("naive cover degenerate and size accounting") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = PointSet::from_rows({{0.0, 0.0}, {0.4, 0.1}, {1.0, 0.2}});

    CHECK_THROWS_AS(naive_cover(g, X, 0.0), std::invalid_argument);
    const Cover trivial = naive_cover(g, X, 1.0);
    CHECK(trivial.queries.size() == 0);
    REQUIRE(trivial.far.has_value());
    for (std::size_t i = 0; i < X.size(); ++i) CHECK(g.eval(*trivial.far, X[i]) < 1.0);

    const double eps = 0.4;
    const Cover c = naive_cover(g, X, eps);
    const double r = g.critical_radius(eps);
    const double tau = eps / g.lipschitz();
    const double per_axis = std::ceil(2.0 * r * std::sqrt(2.0) / (2.0 * tau)) + 1.0;
    CHECK(static_cast<double>(c.queries.size()) <=
          static_cast<double>(X.size()) * per_axis * per_axis + 1.0);
    CHECK(static_cast<double>(c.total_points()) <= lattice_cost_estimate(g, X, eps) + 1.0);

    // overlapping balls dedup on the shared lattice: a tight pair produces
    // fewer points than two disjoint copies would
    const PointSet tight = PointSet::from_rows({{0.0, 0.0}, {0.05, 0.0}});
    const PointSet apart = PointSet::from_rows({{0.0, 0.0}, {9.0, 0.0}});
    CHECK(naive_cover(g, tight, eps).queries.size() <
          naive_cover(g, apart, eps).queries.size());
}

TEST_CASE("greedy cover certifies its own pool") {
    auto rng = seeded_engine(17);
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    PointSet X(6);
    std::vector<double> p(6);
    for (int i = 0; i < 30; ++i) {
        for (auto& v : p) v = uniform(rng, 0.0, 1.0);
        X.append(p);
    }
    const double eps = 0.35;
    GreedyNetConfig cfg;
    cfg.pool = 4000;
    const Cover c = greedy_cover(g, X, eps, 11, cfg);
    REQUIRE(c.far.has_value());
    CHECK(c.meta.construction == "greedy_net");
    CHECK(c.queries.size() >= 1);

    // fresh random queries stay within eps of the net (empirical, with the
    // same in-ball bias the pool used)
    double worst = 0.0;
    const double r = g.critical_radius(eps);
    for (int t = 0; t < 4000; ++t) {
        const std::size_t i = uniform_index(rng, X.size());
        std::vector<double> q(6);
        double n2 = 0.0;
        for (auto& v : q) {
            v = normal01(rng);
            n2 += v * v;
        }
        const double rad = r * std::pow(uniform01(rng), 1.0 / 6.0) / std::sqrt(n2);
        for (std::size_t k = 0; k < 6; ++k) q[k] = X[i][k] + rad * q[k];
        double best = point_ddelta(g, X, q, *c.far);
        for (std::size_t j = 0; j < c.queries.size(); ++j)
            best = std::min(best, point_ddelta(g, X, q, c.queries[j]));
        worst = std::max(worst, best);
    }
    CHECK(worst <= eps * 1.05); // greedy is pool-certified; slack for fresh draws
}

TEST_CASE("cover JSON round-trip") {
    KernelSpec t{KernelFamily::truncated_gaussian, 1.5, 0.25};
    const PointSet X = PointSet::from_rows({{0.0, 1.0}, {0.5, -2.0}});
    Cover c = naive_cover(t, X, 0.6);
    c.meta.seed = 42;

    const std::string text = cover_to_json(c);
    const Cover back = cover_from_json(text);
    CHECK(back.meta.epsilon == c.meta.epsilon);
    CHECK(back.meta.kernel.family == t.family);
    CHECK(back.meta.kernel.sigma == t.sigma);
    CHECK(back.meta.kernel.trunc_tau == t.trunc_tau);
    CHECK(back.meta.seed == 42);
    CHECK(back.meta.construction == c.meta.construction);
    REQUIRE(back.queries.size() == c.queries.size());
    for (std::size_t i = 0; i < c.queries.size(); ++i)
        for (std::size_t k = 0; k < c.queries.dim(); ++k)
            CHECK(back.queries[i][k] == c.queries[i][k]); // bit-exact
    REQUIRE(back.far.has_value());
    CHECK((*back.far)[0] == (*c.far)[0]);
}
