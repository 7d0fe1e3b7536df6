#include "doctest.h"

#include "support/oracle.hpp"
#include "vortexlab/annuli.hpp"

#include <sstream>

using namespace vlab;

TEST_CASE("annuli of a two-ball growth") {
    const auto tr = grow({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}}, 6.0);
    const auto a = annuli_from_trace(tr);
    REQUIRE(a.size() == 3);
    CHECK(a.has_provenance());
    CHECK(a.annuli[0].inner == doctest::Approx(1.0));
    CHECK(a.annuli[0].outer == doctest::Approx(2.0));
    CHECK(a.annuli[2].inner == doctest::Approx(4.0));
    CHECK(a.annuli[2].outer == doctest::Approx(6.0));
    CHECK(mcr_exact(a).count() == 2);
    CHECK(mcr_brute(a) == 2);
    CHECK(a.annuli[2].contains({2.0, 5.0}));
    CHECK_FALSE(a.annuli[2].contains({2.0, 3.0}));
}

TEST_CASE("touching radial intervals are rearrangeable") {
    const std::vector<Annulus> v{{{0.0, 0.0}, 0.0, 1.0}, {{5.0, 5.0}, 1.0, 2.0}, {{1.0, 1.0}, 1.5, 3.0}};
    CHECK(concentrically_rearrangeable(v, {0, 1}));
    CHECK_FALSE(concentrically_rearrangeable(v, {1, 2}));
    AnnuliCollection c;
    c.annuli = v;
    CHECK(max_overlap_depth(c) == 2);
    CHECK(is_valid_partition(c, {{{0, 1}, {2}}}));
    CHECK_FALSE(is_valid_partition(c, {{{0, 1, 2}}}));
    CHECK_FALSE(is_valid_partition(c, {{{0, 1}}}));
}

TEST_CASE("sweep matches exhaustive search") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = testing::random_annuli(rng, 1 + trial % 7);
        const auto p = mcr_exact(c);
        CHECK(is_valid_partition(c, p));
        CHECK(p.count() == mcr_brute(c));
        CHECK(p.count() == max_overlap_depth(c));
    }
    AnnuliCollection big;
    big.annuli.assign(11, Annulus{{0.0, 0.0}, 0.0, 1.0});
    CHECK_THROWS_AS(mcr_brute(big), Error);
}

TEST_CASE("merge-tree partition uses at most n classes") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cfg = testing::random_config(rng, 10, 3.0, 0.05);
        const auto tr = grow(initial_collection(cfg, 0.5 * cfg.eta0()), 3.0);
        const auto a = annuli_from_trace(tr);
        const auto k = mcr_construction_partition(tr, a);
        CHECK(is_valid_partition(a, k));
        CHECK(k.count() <= cfg.size());
        CHECK(mcr_exact(a).count() <= k.count());
    }
}

TEST_CASE("annuli CSV and SVG output") {
    const auto tr = grow({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}}, 6.0);
    const auto a = annuli_from_trace(tr);
    std::ostringstream csv;
    write_annuli_csv(csv, a, mcr_exact(a));
    CHECK(csv.str().rfind("center_x,center_y,inner,outer,class_id", 0) == 0);
    std::ostringstream svg;
    write_annuli_svg(svg, a, mcr_exact(a));
    CHECK(svg.str().find("<svg") != std::string::npos);
}
