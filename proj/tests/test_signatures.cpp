#include "doctest.h"

#include "cover/rng.hpp"
#include "cover/signatures.hpp"

#include <cmath>
#include <fstream>

using namespace cover;

namespace {

PointSet random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double lo, double hi) {
    PointSet ps(d);
    std::vector<double> p(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : p) v = uniform(rng, lo, hi);
        ps.append(p);
    }
    return ps;
}

} // namespace

TEST_CASE("signature values") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = PointSet::from_rows({{0.0}, {2.0}});
    const Signature s = signature(g, X, std::vector<double>{0.0});
    REQUIRE(s.values.size() == 2);
    CHECK(s.values[0] == 1.0);
    CHECK(s.values[1] == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
    CHECK(s.owner == X.owner_token());

    const PointSet one = PointSet::from_rows({{1.5}});
    CHECK(signature(g, one, std::vector<double>{1.5}).values[0] == 1.0);

    // far beyond the critical radius every entry drops below eps
    const double eps = 0.2;
    const double far = 2.0 + g.critical_radius(eps) * 1.01;
    for (double v : signature(g, X, std::vector<double>{far}).values) CHECK(v < eps);

    CHECK_THROWS_AS(signature(g, X, std::vector<double>{0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("ddelta basics") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = PointSet::from_rows({{0.0}, {2.0}});
    const Signature a = signature(g, X, std::vector<double>{0.3});
    CHECK(ddelta(a, a) == 0.0);

    Signature w{{1.0, 0.0}, X.owner_token()};
    Signature w2{{0.0, 1.0}, X.owner_token()};
    CHECK(ddelta(w, w2) == 1.0);

    Signature u{{0.9, 0.5}, X.owner_token()};
    Signature u2{{0.4, 0.3}, X.owner_token()};
    CHECK(ddelta(u, u2) == doctest::Approx(0.35).epsilon(1e-15));

    const PointSet Y = PointSet::from_rows({{0.0}, {2.0}});
    Signature other{{0.1, 0.1}, Y.owner_token()};
    CHECK_THROWS_AS(ddelta(w, other), std::invalid_argument); // different ground set
    Signature shorter{{0.1}, X.owner_token()};
    CHECK_THROWS_AS(ddelta(w, shorter), std::invalid_argument);
}

TEST_CASE("kde values") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    const PointSet X = PointSet::from_rows({{0.0}, {2.0}});
    CHECK(kde(g, X, std::vector<double>{1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    const PointSet one = PointSet::from_rows({{0.5}});
    CHECK(kde(g, one, std::vector<double>{0.5}) == 1.0);

    const double eps = 0.3;
    const double far = 2.0 + g.critical_radius(eps) * 1.01;
    CHECK(kde(g, X, std::vector<double>{far}) < eps);
}

TEST_CASE("d_Delta is a pseudometric dominated by L ||p-q||") {
    auto rng = seeded_engine(99);
    KernelSpec spec{KernelFamily::quartic, 1.2, 0.1};
    const PointSet X = random_points(rng, 40, 3, -1.0, 1.0);
    const double L = spec.lipschitz();
    for (int t = 0; t < 1000; ++t) {
        std::vector<double> p(3), q(3), w(3);
        for (int k = 0; k < 3; ++k) {
            p[k] = uniform(rng, -2.0, 2.0);
            q[k] = uniform(rng, -2.0, 2.0);
            w[k] = uniform(rng, -2.0, 2.0);
        }
        const Signature sp = signature(spec, X, p);
        const Signature sq = signature(spec, X, q);
        const Signature sw = signature(spec, X, w);
        const double pq = ddelta(sp, sq);
        CHECK(pq >= 0.0);
        CHECK(pq == ddelta(sq, sp));
        CHECK(pq <= ddelta(sp, sw) + ddelta(sw, sq) + 1e-12);
        CHECK(pq <= L * std::sqrt(squared_distance(p, q)) + 1e-12);
        // kde difference is dominated by d_Delta
        CHECK(std::abs(kde(spec, X, p) - kde(spec, X, q)) <= pq + 1e-12);
        // streaming and materialized paths agree bit-for-bit
        CHECK(point_ddelta(spec, X, p, q) == pq);
    }
}

TEST_CASE("point set loading errors carry line numbers") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cover_sig_test";
    fs::create_directories(dir);

    {
        std::ofstream out(dir / "ok.csv");
        out << "0.5,1.5\n-1,2\n";
    }
    const PointSet ok = PointSet::load_csv(dir / "ok.csv");
    CHECK(ok.size() == 2);
    CHECK(ok.dim() == 2);
    CHECK(ok[1][0] == -1.0);

    {
        std::ofstream out(dir / "bad.csv");
        out << "0.5,1.5\n0.5,zebra\n";
    }
    try {
        PointSet::load_csv(dir / "bad.csv");
        FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }

    {
        std::ofstream out(dir / "ragged.csv");
        out << "0.5,1.5\n0.5\n";
    }
    CHECK_THROWS_AS(PointSet::load_csv(dir / "ragged.csv"), std::runtime_error);

    {
        std::ofstream out(dir / "pts.json");
        out << "[[0.25, 1.0], [2.0, 3.0]]";
    }
    const PointSet pj = PointSet::load(dir / "pts.json");
    CHECK(pj.size() == 2);
    CHECK(pj[0][0] == 0.25);

    // csv round-trip is bit-exact
    ok.save_csv(dir / "roundtrip.csv");
    const PointSet rt = PointSet::load_csv(dir / "roundtrip.csv");
    REQUIRE(rt.size() == ok.size());
    for (std::size_t i = 0; i < ok.size(); ++i)
        for (std::size_t k = 0; k < ok.dim(); ++k) CHECK(rt[i][k] == ok[i][k]);

    fs::remove_all(dir);
}

TEST_CASE("pairwise sums of equal addends are exact for power-of-two counts") {
    detail::PairwiseSum sum;
    const double t = 0.12345678901234567;
    for (int i = 0; i < 64; ++i) sum.add(t);
    CHECK(sum.total() / 64.0 == t);
}
