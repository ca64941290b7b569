#include "doctest.h"

#include "cover/oracle.hpp"
#include "cover/pipeline.hpp"
#include "cover/rng.hpp"

#include <filesystem>

using namespace cover;

TEST_CASE("a cover written to disk verifies identically after reload") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "cover_io_test";
    fs::create_directories(dir);

    auto rng = seeded_engine(71);
    PointSet X(3);
    std::vector<double> p(3);
    for (int i = 0; i < 50; ++i) {
        for (auto& v : p) v = uniform01(rng);
        X.append(p);
    }
    KernelSpec g{KernelFamily::gaussian, 1.0, 0.1};
    PipelineConfig cfg;
    const BuildResult res = build_cover(g, X, 0.5, cfg, 17);

    save_cover(dir / "c.json", res.cover);
    const Cover back = load_cover(dir / "c.json");

    const auto before = verify_cover(g, X, res.cover, 0.5, 2000, 5);
    const auto after = verify_cover(back.meta.kernel, X, back, 0.5, 2000, 5);
    CHECK(before.max_error == after.max_error);
    CHECK(before.passed == after.passed);
    CHECK(before.worst_query == after.worst_query);

    fs::remove_all(dir);
}
