#pragma once

#include "vortexlab/annuli.hpp"
#include "vortexlab/core.hpp"
#include "vortexlab/geometry.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace vlab::testing {

using Partition = std::set<std::set<int>>;

struct OracleEvent {
    double time = 0.0;
    Partition partition;   // groups of initial indices after the merges at this step
};

// Brute-force growth: every step multiplies all radii by (1 + step), then
// overlapping closed balls are merged (repeated until none overlap). Runs of
// steps that provably contain no contact are skipped in one go; the result is
// the same as taking them one at a time.
std::vector<OracleEvent> stepping_oracle(const std::vector<Ball>& initial, double target, double step = 1e-5);

// Post-merge partitions of initial indices at each merging time of the trace.
std::vector<OracleEvent> trace_events(const GrowthTrace& trace);

// n uniform points in [0, side]² with the given minimum separation.
PointConfig random_config(std::mt19937_64& rng, std::size_t n, double side, double min_sep);

AnnuliCollection random_annuli(std::mt19937_64& rng, std::size_t count);

} // namespace vlab::testing
