#pragma once

#include "vortexlab/core.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace vlab {

// Relative tolerance used to decide tangency: pairs whose scale ratio is
// within this of the minimum merge together.
inline constexpr double kTangencyTolerance = 1e-12;

/// One ball of the merge forest. Between its birth and its death the ball
/// is scaled about its center, so its radius at total radius t is
/// birth_ball.radius · t / birth_time.
struct GrowthNode {
    int id = -1;
    Ball birth_ball;
    double birth_time = 0.0;
    int parent = -1;
    std::vector<int> children;
    std::optional<double> death_time;

    Ball at(double t) const { return {birth_ball.center, birth_ball.radius * t / birth_time}; }
};

struct MergeRecord {
    int merged_id = -1;
    std::vector<int> child_ids;
};

/// Collection stored at one event time. Collections are right-continuous:
/// at a merging time the stored collection is the post-merge one.
struct GrowthEvent {
    double time = 0.0;
    std::vector<int> ball_ids;
    std::vector<MergeRecord> merges;
};

enum class Side { post, pre };

class GrowthTrace {
public:
    GrowthTrace(std::vector<GrowthNode> nodes, std::vector<GrowthEvent> events);

    const std::vector<GrowthNode>& nodes() const { return nodes_; }
    const GrowthNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    const std::vector<GrowthEvent>& events() const { return events_; }

    double start_time() const { return events_.front().time; }
    double end_time() const { return events_.back().time; }

    /// The merging times S ⊂ (r₀, r].
    std::vector<double> merging_times() const;

    std::vector<Ball> initial_collection() const { return collection_at(start_time()); }
    std::vector<Ball> final_collection() const { return collection_at(end_time()); }

    /// Collection at total radius t; `pre` returns the left limit at merging times.
    std::vector<Ball> collection_at(double t, Side side = Side::post) const;
    std::vector<int> ids_at(double t, Side side = Side::post) const;

    /// Initial (leaf) node ids in the subtree of `id`.
    std::vector<int> leaves_of(int id) const;
    std::vector<int> leaf_ids() const;
    std::vector<int> root_ids() const { return events_.back().ball_ids; }

private:
    std::size_t event_index(double t, Side side) const;

    std::vector<GrowthNode> nodes_;
    std::vector<GrowthEvent> events_;
};

struct MergeScale {
    double scale = 0.0;                              // λ* (+∞ for fewer than two balls)
    std::vector<std::pair<int, int>> pairs;          // all pairs attaining λ*
};

/// λ* = min over pairs of |cᵢ − cⱼ| / (rᵢ + rⱼ), with ties within kTangencyTolerance.
MergeScale next_merge_scale(const std::vector<Ball>& balls);

/// Radius Σ rᵢ, center Σ rᵢcᵢ / Σ rᵢ.
Ball merge_balls(const std::vector<Ball>& balls);

/// Throws unless the closed balls are pairwise disjoint.
void require_disjoint(const std::vector<Ball>& balls);

/// Grows a disjoint collection at a common multiplicative rate, merging tangent
/// balls (with cascades) until the total radius reaches `target_total_radius`.
GrowthTrace grow(const std::vector<Ball>& initial, double target_total_radius);

/// {B̄(p, η)}_{p∈Λ}; requires 0 < η < η₀.
std::vector<Ball> initial_collection(const PointConfig& config, double eta);

/// Joins two growths whose end/start collections coincide into a single growth.
/// The junction is kept as an event only if it is a merging time.
GrowthTrace concatenate(const GrowthTrace& first, const GrowthTrace& second);

/// The family {B_r} for r ∈ [r_min, r_max]: a reference growth from
/// {B̄(p, η₁)}, η₁ = min{η₀/2, 1/(n+1)}, extended backward by the merge-free
/// family {B̄(p, t/n)} down to total radius r_min.
GrowthTrace growth_family(const PointConfig& config, double r_min, double r_max);

/// CSV with columns time,ball_id,center_x,center_y,radius,parent_id,total_radius;
/// one row per ball per event.
void write_trace_csv(std::ostream& out, const GrowthTrace& trace);
GrowthTrace read_trace_csv(std::istream& in);

} // namespace vlab
