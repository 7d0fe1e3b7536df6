#include "doctest.h"

#include "vortexlab/lorentz.hpp"

#include <random>
#include <sstream>

using namespace vlab;

namespace {

SampledField steps(const std::vector<double>& values, double h) {
    SamplePatch p;
    p.h = h;
    p.nx = values.size();
    p.ny = 1;
    p.values = values;
    return SampledField({p});
}

} // namespace

TEST_CASE("constant field") {
    const auto f = steps(std::vector<double>(16, 3.0), 0.5);
    CHECK(f.measure() == doctest::Approx(4.0));
    CHECK(quasi_norm(f) == doctest::Approx(6.0));
    CHECK(lorentz_norm(f) == doctest::Approx(6.0));
    CHECK(distribution_function(f, 2.9) == doctest::Approx(4.0));
    CHECK(distribution_function(f, 3.0) == 0.0);
    CHECK(lp_norm(f, 1.0) == doctest::Approx(12.0));
}

TEST_CASE("two-level field") {
    // value 4 on area 1, value 1 on area 3
    const auto f = steps({4.0, 1.0, 1.0, 1.0}, 1.0);
    CHECK(quasi_norm(f) == doctest::Approx(4.0));
    CHECK(lorentz_norm(f) == doctest::Approx(4.0));
    const auto g = steps({2.0, 1.9, 1.9, 1.9}, 1.0);
    CHECK(quasi_norm(g) == doctest::Approx(3.8));
    CHECK(lorentz_norm(g) == doctest::Approx(7.7 / 2.0));
}

TEST_CASE("quasi-norm and norm are equivalent on random step functions") {
    std::mt19937_64 rng(21);
    std::lognormal_distribution<double> v(0.0, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> vals(50);
        for (auto& x : vals) x = v(rng);
        const auto f = steps(vals, 0.1);
        const double q = quasi_norm(f);
        const double n = lorentz_norm(f);
        CHECK(q <= n * (1 + 1e-12));
        CHECK(n <= 2.0 * q * (1 + 1e-12));
        CHECK(lorentz_norm(f.scaled(3.0)) == doctest::Approx(3.0 * n));
    }
}

TEST_CASE("embedding into L^p") {
    CHECK(embedding_constant(1.0) == doctest::Approx(2.0));
    CHECK(embedding_constant(1.5) == doctest::Approx(std::pow(4.0, 1.0 / 1.5)));
    CHECK_THROWS_AS(embedding_constant(2.0), Error);
    std::mt19937_64 rng(4);
    std::exponential_distribution<double> v(0.3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> vals(30);
        for (auto& x : vals) x = v(rng);
        const auto f = steps(vals, 0.2);
        const auto e = embedding_check(f, 1.25, f.measure());
        CHECK(e.holds);
        CHECK(e.lhs <= e.rhs);
    }
}

TEST_CASE("sampled inverse distance") {
    const Point2 c{0.1, 0.2};
    const Box box{{c.x - 1.0, c.y - 1.0}, {c.x + 1.0, c.y + 1.0}};
    auto f = [&](const Point2& x) { return 1.0 / distance(x, c); };
    auto inside = [&](const Point2& x) { return distance(x, c) < 1.0; };
    const auto lo = sample_field(f, box, 1.0 / 64.0, SampleRule::cell_min, inside, {c});
    CHECK(quasi_norm(lo) == doctest::Approx(std::sqrt(M_PI)).epsilon(0.05));
    const auto mean = sample_field(f, box, 1.0 / 32.0, SampleRule::cell_mean, inside, {c});
    CHECK(lp_norm(mean, 1.0) == doctest::Approx(2.0 * M_PI).epsilon(0.02));
    CHECK(lorentz_norm(mean) == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(0.05));
    std::ostringstream out;
    write_distribution_csv(out, lo);
    CHECK(out.str().rfind("t,lambda", 0) == 0);
}

TEST_CASE("polar samples carry exact areas") {
    const Point2 c{1.0, -2.0};
    SampledField f;
    f.add_samples(sample_polar([&](const Point2& x) { return 1.0 / distance(x, c); }, c, 0.5, 2.0, 16, 32));
    CHECK(f.measure() == doctest::Approx(M_PI * (4.0 - 0.25)));
    CHECK(lp_norm(f, 1.0) == doctest::Approx(2.0 * M_PI * 1.5).epsilon(1e-6));
    SampledField disc;
    disc.add_samples(sample_polar([&](const Point2& x) { return 1.0 / distance(x, c); }, c, 0.0, 1.0, 48, 16));
    CHECK(disc.measure() == doctest::Approx(M_PI));
    // averaging preserves ∫_E over unions of cells, so the norm stays exact; the
    // quasi-norm of cell averages overshoots at the singular core
    CHECK(quasi_norm(disc) >= std::sqrt(M_PI));
    CHECK(lorentz_norm(disc) == doctest::Approx(2.0 * std::sqrt(M_PI)).epsilon(0.02));
    CHECK(lp_norm(disc.scaled(2.0), 1.0, [](const Point2&) { return 1.0; }) == doctest::Approx(4.0 * M_PI).epsilon(1e-3));
    CHECK_THROWS_AS(sample_polar([](const Point2&) { return 1.0; }, c, 1.0, 1.0, 4, 4), Error);
}
