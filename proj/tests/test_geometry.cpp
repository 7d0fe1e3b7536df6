#include "doctest.h"

#include "support/oracle.hpp"
#include "vortexlab/geometry.hpp"

#include <sstream>

using namespace vlab;

TEST_CASE("merge scale and merged ball") {
    const std::vector<Ball> balls{{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}, {{0.0, 10.0}, 2.0}};
    const auto ms = next_merge_scale(balls);
    CHECK(ms.scale == doctest::Approx(2.0));
    REQUIRE(ms.pairs.size() == 1);
    const Ball m = merge_balls({balls[0], {{3.0, 0.0}, 3.0}});
    CHECK(m.radius == doctest::Approx(4.0));
    CHECK(m.center.x == doctest::Approx(2.25));
    CHECK(std::isinf(next_merge_scale({balls[0]}).scale));
}

TEST_CASE("disjointness is enforced") {
    CHECK_THROWS_AS(require_disjoint({{{0.0, 0.0}, 1.0}, {{1.5, 0.0}, 1.0}}), Error);
    CHECK_THROWS_AS(grow({{{0.0, 0.0}, 1.0}, {{1.5, 0.0}, 1.0}}, 5.0), Error);
    CHECK_NOTHROW(require_disjoint({{{0.0, 0.0}, 1.0}, {{2.5, 0.0}, 1.0}}));
    CHECK_THROWS_AS(initial_collection(PointConfig({{0.0, 0.0}, {1.0, 0.0}}), 0.5), Error);
}

TEST_CASE("two balls merge at tangency") {
    const auto tr = grow({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}}, 6.0);
    const auto times = tr.merging_times();
    REQUIRE(times.size() == 1);
    CHECK(times[0] == doctest::Approx(4.0));
    const auto before = tr.collection_at(4.0, Side::pre);
    CHECK(before.size() == 2);
    CHECK(before[0].radius == doctest::Approx(2.0));
    const auto after = tr.collection_at(4.0);
    REQUIRE(after.size() == 1);
    CHECK(after[0].radius == doctest::Approx(4.0));
    CHECK(after[0].center.x == doctest::Approx(2.0));
    const auto fin = tr.final_collection();
    CHECK(fin[0].radius == doctest::Approx(6.0));
    CHECK(tr.leaves_of(tr.root_ids()[0]).size() == 2);
}

TEST_CASE("cascading merges happen at one time") {
    // After the first pair merges, the merged ball already touches the third.
    const auto tr = grow({{{0.0, 0.0}, 0.1}, {{1.0, 0.0}, 0.1}, {{0.5, 1.02}, 0.1}}, 3.0);
    const auto times = tr.merging_times();
    REQUIRE(times.size() == 1);
    CHECK(tr.collection_at(times[0]).size() == 1);
}

TEST_CASE("total radius is conserved and collections stay nested") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto cfg = testing::random_config(rng, 12, 4.0, 0.05);
        const auto tr = grow(initial_collection(cfg, 0.4 * cfg.eta0()), 4.0);
        std::vector<Ball> prev;
        for (const auto& ev : tr.events()) {
            const auto balls = tr.collection_at(ev.time);
            double s = 0.0;
            for (const auto& b : balls) s += b.radius;
            CHECK(std::abs(s - ev.time) <= 1e-12 * ev.time);
            for (const auto& b : prev) {
                bool inside = false;
                for (const auto& c : balls) inside = inside || distance(b.center, c.center) + b.radius <= c.radius * (1 + 1e-12);
                CHECK(inside);
            }
            prev = balls;
        }
    }
}

TEST_CASE("trace CSV round trip") {
    const auto tr = grow({{{0.0, 0.0}, 0.5}, {{3.0, 0.0}, 0.25}, {{0.0, 5.0}, 0.25}}, 5.0);
    std::stringstream ss;
    write_trace_csv(ss, tr);
    const auto back = read_trace_csv(ss);
    REQUIRE(back.events().size() == tr.events().size());
    CHECK(back.merging_times() == tr.merging_times());
    const auto a = tr.final_collection();
    const auto b = back.final_collection();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].radius == doctest::Approx(b[i].radius));
    std::stringstream bad("time,ball_id\n1,2\n");
    CHECK_THROWS_AS(read_trace_csv(bad), Error);
}

TEST_CASE("growth family extends backward without merges") {
    const PointConfig cfg({{0.0, 0.0}, {1.0, 0.0}, {0.0, 3.0}});
    const auto fam = growth_family(cfg, 0.01, 2.0);
    CHECK(fam.start_time() == doctest::Approx(0.01));
    CHECK(fam.end_time() == doctest::Approx(2.0));
    const auto small = fam.collection_at(0.03);
    REQUIRE(small.size() == 3);
    for (const auto& b : small) CHECK(b.radius == doctest::Approx(0.01));
    for (double t : fam.merging_times()) CHECK(t > 0.01);
}

TEST_CASE("concatenation joins matching growths") {
    const std::vector<Ball> init{{{0.0, 0.0}, 0.5}, {{3.0, 0.0}, 0.5}};
    const auto a = grow(init, 2.0);
    const auto b = grow(a.final_collection(), 5.0);
    const auto c = concatenate(a, b);
    CHECK(c.start_time() == doctest::Approx(1.0));
    CHECK(c.end_time() == doctest::Approx(5.0));
    CHECK(c.merging_times().size() == 1);
    CHECK(c.merging_times() == grow(init, 5.0).merging_times());
}

TEST_CASE("growth agrees with the stepping oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto cfg = testing::random_config(rng, 8, 3.0, 0.05);
        const auto init = initial_collection(cfg, 0.5 * cfg.eta0());
        const auto tr = grow(init, 2.5);
        const auto ours = testing::trace_events(tr);
        const auto ref = testing::stepping_oracle(init, 2.5);
        REQUIRE(ours.size() == ref.size());
        for (std::size_t i = 0; i < ours.size(); ++i) {
            CHECK(ours[i].partition == ref[i].partition);
            CHECK(std::abs(ours[i].time - ref[i].time) <= 1e-3 * ours[i].time);
        }
    }
}
