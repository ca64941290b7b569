#include "doctest.h"

#include "cover/kernels.hpp"
#include "cover/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace cover;

namespace {

const KernelFamily kAllFamilies[] = {
    KernelFamily::gaussian,  KernelFamily::laplace,   KernelFamily::epanechnikov,
    KernelFamily::triangle,  KernelFamily::quartic,   KernelFamily::triweight,
    KernelFamily::truncated_gaussian,
};

double eval_at(const KernelSpec& spec, double dist) {
    return spec.eval(std::vector<double>{0.0}, std::vector<double>{dist});
}

} // namespace

TEST_CASE("kernel evaluation matches the closed-form rules") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    CHECK(eval_at(g, 0.0) == 1.0);
    CHECK(eval_at(g, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    KernelSpec e{KernelFamily::epanechnikov, 1.0, 0.1};
    CHECK(eval_at(e, 2.0) == 0.0);

    KernelSpec t{KernelFamily::triangle, 1.0, 0.1};
    CHECK(eval_at(t, 0.25) == doctest::Approx(0.75).epsilon(1e-12));

    KernelSpec tg{KernelFamily::truncated_gaussian, 1.0, 0.1};
    CHECK(eval_at(tg, 0.0) == 1.0);
    CHECK(eval_at(tg, 10.0) == 0.0);
    CHECK(eval_at(tg, 0.5) ==
          doctest::Approx((std::exp(-0.25) - 0.1) / 0.9).epsilon(1e-12));
}

TEST_CASE("evaluation rejects bad input") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    std::vector<double> a{0.0, 0.0}, b{1.0};
    CHECK_THROWS_AS(g.eval(a, b), std::invalid_argument);
    std::vector<double> nan{std::nan("")};
    std::vector<double> x{0.0};
    CHECK_THROWS_AS(g.eval(nan, x), std::invalid_argument);
    KernelSpec bad{KernelFamily::gaussian, -1.0, 0.1};
    CHECK_THROWS_AS(bad.eval(x, x), std::invalid_argument);
    KernelSpec bad_tau{KernelFamily::truncated_gaussian, 1.0, 1.5};
    CHECK_THROWS_AS(bad_tau.validate(), std::invalid_argument);
}

TEST_CASE("Lipschitz constants") {
    CHECK(KernelSpec{KernelFamily::gaussian, 1.0, 0.1}.lipschitz() ==
          doctest::Approx(std::sqrt(2.0 / std::exp(1.0))).epsilon(1e-15));
    CHECK(KernelSpec{KernelFamily::triangle, 2.0, 0.1}.lipschitz() == doctest::Approx(0.5));
    CHECK(KernelSpec{KernelFamily::quartic, 1.0, 0.1}.lipschitz() ==
          doctest::Approx(8.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-15));
    CHECK(KernelSpec{KernelFamily::triweight, 1.0, 0.1}.lipschitz() ==
          doctest::Approx(96.0 / (25.0 * std::sqrt(5.0))).epsilon(1e-15));
    // rescaled truncated gaussian steepens by 1/(1-tau)
    CHECK(KernelSpec{KernelFamily::truncated_gaussian, 1.0, 0.1}.lipschitz() ==
          doctest::Approx(std::sqrt(2.0 / std::exp(1.0)) / 0.9).epsilon(1e-15));
}

TEST_CASE("critical radius closed forms and residuals") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    CHECK(g.critical_radius(0.1) == doctest::Approx(std::sqrt(std::log(10.0))).epsilon(1e-15));
    KernelSpec e{KernelFamily::epanechnikov, 1.0, 0.1};
    CHECK(e.critical_radius(0.25) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
    KernelSpec t{KernelFamily::triangle, 2.0, 0.1};
    CHECK(t.critical_radius(0.5) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(g.critical_radius(0.0), std::invalid_argument);
    CHECK_THROWS_AS(g.critical_radius(1.0), std::invalid_argument);

    // g(r (1+u)) < eps <= g(r (1-u)) around the radius
    for (KernelFamily fam : kAllFamilies) {
        for (double sigma : {0.7, 1.0, 2.5}) {
            KernelSpec spec{fam, sigma, 0.1};
            for (double eps : {0.05, 0.1, 0.3, 0.5, 0.9}) {
                const double r = spec.critical_radius(eps);
                CAPTURE(spec.name());
                CAPTURE(eps);
                CHECK(eval_at(spec, r * (1.0 + 1e-6)) < eps);
                CHECK(eval_at(spec, r * (1.0 - 1e-6)) >= eps);
            }
        }
    }
}

TEST_CASE("critical radius is non-increasing in eps") {
    for (KernelFamily fam : kAllFamilies) {
        KernelSpec spec{fam, 1.3, 0.2};
        double prev = spec.critical_radius(0.01);
        for (double eps : {0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 0.95}) {
            const double r = spec.critical_radius(eps);
            CHECK(r <= prev + 1e-15);
            prev = r;
        }
    }
}

TEST_CASE("symmetry and Lipschitz properties on random triples") {
    auto rng = seeded_engine(20240811);
    for (KernelFamily fam : kAllFamilies) {
        KernelSpec spec{fam, 1.0 + uniform01(rng), 0.1 + 0.5 * uniform01(rng)};
        const double L = spec.lipschitz();
        for (int t = 0; t < 1000; ++t) {
            const std::size_t d = 1 + t % 4;
            std::vector<double> p(d), q(d), x(d);
            for (std::size_t k = 0; k < d; ++k) {
                p[k] = uniform(rng, -2.0, 2.0);
                q[k] = uniform(rng, -2.0, 2.0);
                x[k] = uniform(rng, -2.0, 2.0);
            }
            CHECK(spec.eval(p, x) == spec.eval(x, p));
            const double lhs = std::abs(spec.eval(p, x) - spec.eval(q, x));
            CHECK(lhs <= L * std::sqrt(squared_distance(p, q)) + 1e-12);
            const double v = spec.eval(p, x);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("semi-super-level membership") {
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    std::vector<double> p{0.0}, q{10.0}, x{0.0}, mid{0.5}, q1{1.0};
    CHECK_FALSE(semi_level_member(g, p, p, 0.1, x)); // p = q, difference zero
    CHECK(semi_level_member(g, p, q, 0.9, x));
    CHECK_FALSE(semi_level_member(g, p, q1, 0.01, mid)); // symmetric midpoint
    CHECK_THROWS_AS(semi_level_member(g, p, q, -1.0, x), std::invalid_argument);
    std::vector<double> x2{0.0, 0.0};
    CHECK_THROWS_AS(semi_level_member(g, p, q, 0.1, x2), std::invalid_argument);
}

TEST_CASE("family metadata") {
    CHECK(KernelSpec{KernelFamily::gaussian, 1.0, 0.1}.positive_definite());
    CHECK(KernelSpec{KernelFamily::laplace, 1.0, 0.1}.positive_definite());
    CHECK_FALSE(KernelSpec{KernelFamily::triangle, 1.0, 0.1}.positive_definite());
    CHECK(KernelSpec{KernelFamily::gaussian, 1.0, 0.1}.simply_computable());
    CHECK_FALSE(KernelSpec{KernelFamily::laplace, 1.0, 0.1}.simply_computable());
    CHECK(KernelSpec{KernelFamily::laplace, 1.0, 0.1}.simplicity_exponent() == 3);
    CHECK(KernelSpec{KernelFamily::quartic, 1.0, 0.1}.simplicity_exponent() == 2);

    CHECK(KernelSpec::parse("triangle", 2.0).family == KernelFamily::triangle);
    CHECK_THROWS_AS(KernelSpec::parse("sinc"), std::invalid_argument);
}
