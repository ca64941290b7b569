#include "doctest.h"

#include "cover/pipeline.hpp"
#include "cover/rng.hpp"

#include <cmath>

using namespace cover;

namespace {

PointSet random_box(std::uint64_t seed, std::size_t n, std::size_t d) {
    auto rng = seeded_engine(seed);
    PointSet ps(d);
    std::vector<double> p(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : p) v = uniform01(rng);
        ps.append(p);
    }
    return ps;
}

} // namespace

TEST_CASE("cover_of dispatches between lattice and greedy net") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    PipelineConfig cfg;
    const PointSet low = random_box(1, 15, 2);
    CHECK(cover_of(g, low, 0.4, 3, cfg).meta.construction == "naive_lattice");
    const PointSet high = random_box(2, 15, 12);
    CHECK(cover_of(g, high, 0.4, 3, cfg).meta.construction == "greedy_net");
}

TEST_CASE("pipeline on a small low-dimensional instance") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(5, 80, 2);
    PipelineConfig cfg;
    const BuildResult res = build_cover(g, X, 0.5, cfg, 11);

    CHECK(res.report.sample_size <= X.size());
    CHECK(res.report.q_prime_size <= res.report.q_size);
    CHECK(res.report.warnings == 0);
    CHECK(res.report.matched + 1 == res.report.q_prime_size); // far point appended
    CHECK(res.cover.meta.ambient_dim == 2);
    REQUIRE(res.cover.far.has_value());

    const auto rep = verify_cover(g, X, res.cover, 0.5, 3000, 23);
    CHECK(rep.passed);
}

TEST_CASE("pipeline in higher dimension uses the greedy route and certifies") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(6, 100, 12);
    PipelineConfig cfg;
    cfg.net.pool = 6000;
    const BuildResult res = build_cover(g, X, 0.5, cfg, 7);
    CHECK(res.report.q_construction == "greedy_net");
    CHECK(res.report.warnings == 0);
    CHECK(res.report.q_prime_size <= res.report.q_size);
    const auto rep = verify_cover(g, X, res.cover, 0.5, 3000, 29);
    CHECK(rep.passed);
}

TEST_CASE("tiny instances short-circuit to S = X and still certify") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(9, 10, 2);
    PipelineConfig cfg;
    cfg.auto_sample_mode = false;
    cfg.sample.mode = SampleMode::vc; // vc size at eps/4 dwarfs n = 10
    const BuildResult res = build_cover(g, X, 0.4, cfg, 3);
    CHECK(res.report.sample_size == X.size());
    CHECK(verify_cover(g, X, res.cover, 0.4, 2000, 31).passed);
}

TEST_CASE("a single-anchor sample degenerates gracefully") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(13, 120, 3);
    PipelineConfig cfg;
    // pd size at eps/4 = 0.245: floor(ln(1/delta)/(49*0.06)) + 1 = 1 anchor
    cfg.sample.delta = 0.9;
    const BuildResult res = build_cover(g, X, 0.98, cfg, 5);
    CHECK(res.report.sample_size == 1);
    CHECK(res.report.m == 0); // no embedding happened
    CHECK(verify_cover(g, X, res.cover, 0.98, 1000, 37).passed);
}

TEST_CASE("pull_back consumes a distinct cover point per kept point") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(21, 60, 2);
    PipelineConfig cfg;
    const PointSet S = draw_sample(X, cover_sample_size(g, 0.1, cfg.sample, 2), 1);
    // S may cap at X here; fine either way
    const TerminalEmbedding emb = build_embedding(S, 0.3, 2);
    const Cover q_emb = cover_of(g, emb.anchor_images, 0.05, 3, cfg);
    const PullBackResult pulled = pull_back(g, S, emb, q_emb, 0.4, 4, cfg);
    CHECK(pulled.matched <= q_emb.total_points());
    CHECK(pulled.cover.queries.size() == pulled.matched + pulled.warnings);
    CHECK(pulled.cover.far.has_value());
}

TEST_CASE("embedded distances preserve d_Delta at the lemma coupling") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const double eps = 0.5;
    const PointSet S = random_box(33, 50, 8);

    const double r = g.critical_radius(eps / 2.0);
    const double eps_prime = eps / (2.0 * g.lipschitz() * r);
    const TerminalEmbedding emb = build_embedding(S, std::min(eps_prime, 0.999), 6);

    auto rng = seeded_engine(44);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        std::vector<double> p(8), q(8);
        for (auto& v : p) v = uniform(rng, -0.3, 1.3);
        for (auto& v : q) v = uniform(rng, -0.3, 1.3);
        const auto fp = embed(emb, p);
        const auto fq = embed(emb, q);
        const double direct = point_ddelta(g, S, p, q);
        const double embedded = point_ddelta(g, emb.anchor_images, fp, fq);
        worst = std::max(worst, std::abs(direct - embedded));
    }
    CHECK(worst <= eps);
}

TEST_CASE("build_cover is deterministic in the seed") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(51, 40, 5);
    PipelineConfig cfg;
    const BuildResult a = build_cover(g, X, 0.6, cfg, 99);
    const BuildResult b = build_cover(g, X, 0.6, cfg, 99);
    REQUIRE(a.cover.queries.size() == b.cover.queries.size());
    for (std::size_t i = 0; i < a.cover.queries.size(); ++i)
        for (std::size_t k = 0; k < a.cover.queries.dim(); ++k)
            CHECK(a.cover.queries[i][k] == b.cover.queries[i][k]);
    CHECK(a.report.q_size == b.report.q_size);
}

TEST_CASE("build_cover rejects bad eps") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = random_box(61, 10, 2);
    PipelineConfig cfg;
    CHECK_THROWS_AS(build_cover(g, X, 0.0, cfg, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_cover(g, X, 1.0, cfg, 1), std::invalid_argument);
}
