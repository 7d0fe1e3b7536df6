#include "vortexlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace vlab {

namespace {

double total_radius(const std::vector<Ball>& balls) {
    double s = 0.0;
    for (const auto& b : balls) s += b.radius;
    return s;
}

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

bool touching(const Ball& a, const Ball& b) {
    return distance(a.center, b.center) <= (a.radius + b.radius) * (1.0 + kTangencyTolerance);
}

} // namespace

GrowthTrace::GrowthTrace(std::vector<GrowthNode> nodes, std::vector<GrowthEvent> events)
    : nodes_(std::move(nodes)), events_(std::move(events)) {
    if (events_.empty()) {
        throw Error("growth trace needs at least one event");
    }
    for (std::size_t i = 1; i < events_.size(); ++i) {
        if (!(events_[i].time > events_[i - 1].time)) {
            throw Error("growth trace event times must increase strictly");
        }
    }
}

std::vector<double> GrowthTrace::merging_times() const {
    std::vector<double> out;
    for (const auto& e : events_) {
        if (!e.merges.empty()) out.push_back(e.time);
    }
    return out;
}

std::size_t GrowthTrace::event_index(double t, Side side) const {
    const double lo = start_time();
    const double hi = end_time();
    const double slack = 1e-12 * hi;
    if (t < lo - slack || t > hi + slack) {
        throw Error("collection_at: t outside [r0, r]");
    }
    // last event with time <= t (post) or time < t (pre)
    std::size_t idx = 0;
    for (std::size_t i = 0; i < events_.size(); ++i) {
        const bool take = side == Side::post ? events_[i].time <= t : events_[i].time < t;
        if (take) idx = i;
    }
    return idx;
}

std::vector<int> GrowthTrace::ids_at(double t, Side side) const {
    return events_[event_index(t, side)].ball_ids;
}

std::vector<Ball> GrowthTrace::collection_at(double t, Side side) const {
    const auto& e = events_[event_index(t, side)];
    const double tt = std::clamp(t, start_time(), end_time());
    std::vector<Ball> out;
    out.reserve(e.ball_ids.size());
    for (int id : e.ball_ids) out.push_back(node(id).at(tt));
    return out;
}

std::vector<int> GrowthTrace::leaves_of(int id) const {
    std::vector<int> out;
    std::vector<int> stack{id};
    while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const auto& nd = node(cur);
        if (nd.children.empty()) {
            out.push_back(cur);
        } else {
            for (int c : nd.children) stack.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> GrowthTrace::leaf_ids() const { return events_.front().ball_ids; }

MergeScale next_merge_scale(const std::vector<Ball>& balls) {
    MergeScale out;
    out.scale = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::pair<int, int>>> ratios;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t k = i + 1; k < balls.size(); ++k) {
            const double lam = distance(balls[i].center, balls[k].center) /
                               (balls[i].radius + balls[k].radius);
            ratios.push_back({lam, {static_cast<int>(i), static_cast<int>(k)}});
            out.scale = std::min(out.scale, lam);
        }
    }
    for (const auto& [lam, pr] : ratios) {
        if (lam <= out.scale + kTangencyTolerance) out.pairs.push_back(pr);
    }
    return out;
}

Ball merge_balls(const std::vector<Ball>& balls) {
    if (balls.empty()) {
        throw Error("merge_balls needs at least one ball");
    }
    double r = 0.0;
    Point2 weighted{};
    for (const auto& b : balls) {
        r += b.radius;
        weighted += b.center * b.radius;
    }
    return {weighted / r, r};
}

void require_disjoint(const std::vector<Ball>& balls) {
    for (const auto& b : balls) validate(b);
    for (std::size_t i = 0; i < balls.size(); ++i) {
        for (std::size_t k = i + 1; k < balls.size(); ++k) {
            if (distance(balls[i].center, balls[k].center) <= balls[i].radius + balls[k].radius) {
                throw Error("initial balls overlap or touch (balls " + std::to_string(i) + " and " +
                            std::to_string(k) + ")");
            }
        }
    }
}

GrowthTrace grow(const std::vector<Ball>& initial, double target_total_radius) {
    if (initial.empty()) {
        throw Error("grow needs at least one ball");
    }
    require_disjoint(initial);
    const double r0 = total_radius(initial);
    if (!(target_total_radius > r0)) {
        throw Error("grow: target total radius must exceed the initial total radius");
    }

    std::vector<GrowthNode> nodes;
    std::vector<GrowthEvent> events;
    std::vector<int> current;
    for (const auto& b : initial) {
        GrowthNode nd;
        nd.id = static_cast<int>(nodes.size());
        nd.birth_ball = b;
        nd.birth_time = r0;
        current.push_back(nd.id);
        nodes.push_back(nd);
    }
    events.push_back({r0, current, {}});

    double t = r0;
    auto balls_at = [&](double time) {
        std::vector<Ball> out;
        out.reserve(current.size());
        for (int id : current) out.push_back(nodes[static_cast<std::size_t>(id)].at(time));
        return out;
    };

    while (true) {
        const auto ms = next_merge_scale(balls_at(t));
        const double t_merge = t * ms.scale;
        if (!(t_merge <= target_total_radius)) break;
        t = t_merge;

        // Union tangent pairs, then cascade until the merged collection is disjoint.
        std::vector<std::vector<int>> groups;
        for (int id : current) groups.push_back({id});
        std::vector<Ball> group_balls = balls_at(t);
        {
            DisjointSets ds(groups.size());
            for (const auto& [a, b] : ms.pairs) ds.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
            std::map<std::size_t, std::vector<int>> merged;
            for (std::size_t i = 0; i < groups.size(); ++i) {
                auto& g = merged[ds.find(i)];
                g.insert(g.end(), groups[i].begin(), groups[i].end());
            }
            groups.clear();
            for (auto& [root, g] : merged) groups.push_back(std::move(g));
        }
        while (true) {
            group_balls.clear();
            for (const auto& g : groups) {
                std::vector<Ball> members;
                for (int id : g) members.push_back(nodes[static_cast<std::size_t>(id)].at(t));
                group_balls.push_back(merge_balls(members));
            }
            DisjointSets ds(groups.size());
            bool any = false;
            for (std::size_t i = 0; i < groups.size(); ++i) {
                for (std::size_t k = i + 1; k < groups.size(); ++k) {
                    if (touching(group_balls[i], group_balls[k])) {
                        ds.unite(i, k);
                        any = true;
                    }
                }
            }
            if (!any) break;
            std::map<std::size_t, std::vector<int>> merged;
            for (std::size_t i = 0; i < groups.size(); ++i) {
                auto& g = merged[ds.find(i)];
                g.insert(g.end(), groups[i].begin(), groups[i].end());
            }
            groups.clear();
            for (auto& [root, g] : merged) groups.push_back(std::move(g));
        }

        GrowthEvent ev;
        ev.time = t;
        std::vector<int> next;
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const auto& g = groups[gi];
            if (g.size() == 1) {
                next.push_back(g.front());
                continue;
            }
            GrowthNode nd;
            nd.id = static_cast<int>(nodes.size());
            nd.birth_ball = group_balls[gi];
            nd.birth_time = t;
            nd.children = g;
            std::sort(nd.children.begin(), nd.children.end());
            for (int c : g) {
                nodes[static_cast<std::size_t>(c)].parent = nd.id;
                nodes[static_cast<std::size_t>(c)].death_time = t;
            }
            ev.merges.push_back({nd.id, nd.children});
            next.push_back(nd.id);
            nodes.push_back(std::move(nd));
        }
        current = std::move(next);
        ev.ball_ids = current;
        events.push_back(std::move(ev));
        if (t >= target_total_radius) break;
    }

    if (events.back().time < target_total_radius) {
        events.push_back({target_total_radius, current, {}});
    }
    return GrowthTrace(std::move(nodes), std::move(events));
}

std::vector<Ball> initial_collection(const PointConfig& config, double eta) {
    if (!(eta > 0.0) || !(eta < config.eta0())) {
        throw Error("initial_collection: eta must satisfy 0 < eta < eta0");
    }
    std::vector<Ball> out;
    out.reserve(config.size());
    for (const auto& p : config.points()) out.push_back({p, eta});
    return out;
}

GrowthTrace concatenate(const GrowthTrace& first, const GrowthTrace& second) {
    const auto a_end = first.final_collection();
    const auto b_start = second.initial_collection();
    const double t = first.end_time();
    if (std::abs(second.start_time() - t) > 1e-12 * t || a_end.size() != b_start.size()) {
        throw Error("concatenate: final collection of the first growth must match the second's start");
    }

    // Match the second growth's leaves to the first growth's final balls.
    const auto b_leaves = second.leaf_ids();
    std::map<int, int> leaf_to_first;
    const auto a_ids = first.events().back().ball_ids;
    for (int leaf : b_leaves) {
        const Ball lb = second.node(leaf).at(t);
        bool found = false;
        for (std::size_t i = 0; i < a_end.size(); ++i) {
            if (distance(a_end[i].center, lb.center) <= 1e-12 * (1.0 + norm(lb.center)) &&
                std::abs(a_end[i].radius - lb.radius) <= 1e-12 * lb.radius) {
                leaf_to_first[leaf] = a_ids[i];
                found = true;
                break;
            }
        }
        if (!found) {
            throw Error("concatenate: final collection of the first growth must match the second's start");
        }
    }

    std::vector<GrowthNode> nodes = first.nodes();
    std::map<int, int> remap = leaf_to_first;
    for (const auto& nd : second.nodes()) {
        if (remap.count(nd.id)) continue;
        remap[nd.id] = static_cast<int>(nodes.size());
        GrowthNode copy = nd;
        copy.id = remap[nd.id];
        nodes.push_back(copy);
    }
    for (auto& nd : nodes) {
        if (nd.id < static_cast<int>(first.nodes().size())) continue;
        for (auto& c : nd.children) c = remap[c];
        if (nd.parent >= 0) nd.parent = remap[nd.parent];
    }
    for (const auto& nd : second.nodes()) {
        if (!leaf_to_first.count(nd.id)) continue;
        auto& target = nodes[static_cast<std::size_t>(leaf_to_first[nd.id])];
        if (nd.parent >= 0) {
            target.parent = remap[nd.parent];
            target.death_time = nd.death_time;
        }
    }

    std::vector<GrowthEvent> events = first.events();
    if (events.back().merges.empty() && events.size() > 1) events.pop_back();
    for (std::size_t i = 0; i < second.events().size(); ++i) {
        GrowthEvent ev = second.events()[i];
        for (auto& id : ev.ball_ids) id = remap[id];
        for (auto& m : ev.merges) {
            m.merged_id = remap[m.merged_id];
            for (auto& c : m.child_ids) c = remap[c];
        }
        if (i == 0) {
            if (!events.empty() && events.back().time >= ev.time) continue;
            if (ev.merges.empty() && second.events().size() > 1) continue;
        }
        events.push_back(std::move(ev));
    }
    return GrowthTrace(std::move(nodes), std::move(events));
}

GrowthTrace growth_family(const PointConfig& config, double r_min, double r_max) {
    const double n = static_cast<double>(config.size());
    const double eta1 = std::min(config.eta0() / 2.0, 1.0 / (n + 1.0));
    const double ref_start = n * eta1;
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw Error("growth_family: need 0 < r_min < r_max");
    }
    if (r_min >= ref_start) {
        // Everything lies in the reference growth; restrict by regrowing from the
        // collection at r_min (growth is deterministic, so this is the same family).
        const auto ref = grow(initial_collection(config, eta1), std::max(r_max, ref_start * 1.5));
        return grow(ref.collection_at(r_min), r_max);
    }
    std::vector<Ball> small;
    for (const auto& p : config.points()) small.push_back({p, r_min / n});
    // Backward extension is merge-free up to n·η₁.
    std::vector<GrowthNode> nodes;
    std::vector<int> ids;
    for (const auto& b : small) {
        GrowthNode nd;
        nd.id = static_cast<int>(nodes.size());
        nd.birth_ball = b;
        nd.birth_time = r_min;
        ids.push_back(nd.id);
        nodes.push_back(nd);
    }
    GrowthTrace backward(nodes, {{r_min, ids, {}}, {ref_start, ids, {}}});
    if (r_max <= ref_start) {
        return GrowthTrace(nodes, {{r_min, ids, {}}, {r_max, ids, {}}});
    }
    return concatenate(backward, grow(initial_collection(config, eta1), r_max));
}

void write_trace_csv(std::ostream& out, const GrowthTrace& trace) {
    out << "time,ball_id,center_x,center_y,radius,parent_id,total_radius\n";
    out << std::setprecision(17);
    for (const auto& ev : trace.events()) {
        double total = 0.0;
        std::vector<Ball> balls;
        for (int id : ev.ball_ids) {
            balls.push_back(trace.node(id).at(ev.time));
            total += balls.back().radius;
        }
        for (std::size_t i = 0; i < balls.size(); ++i) {
            out << ev.time << ',' << ev.ball_ids[i] << ',' << balls[i].center.x << ',' << balls[i].center.y
                << ',' << balls[i].radius << ',' << trace.node(ev.ball_ids[i]).parent << ',' << total << '\n';
        }
    }
}

GrowthTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("time,ball_id", 0) != 0) {
        throw Error("trace csv: missing header 'time,ball_id,...'");
    }
    struct Row {
        double time;
        int id;
        Ball ball;
        int parent;
    };
    std::vector<Row> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 6) {
            throw Error("trace csv line " + std::to_string(lineno) + ": expected at least 6 fields");
        }
        try {
            rows.push_back({std::stod(cells[0]), std::stoi(cells[1]),
                            {{std::stod(cells[2]), std::stod(cells[3])}, std::stod(cells[4])},
                            std::stoi(cells[5])});
        } catch (const std::exception&) {
            throw Error("trace csv line " + std::to_string(lineno) + ": malformed number");
        }
    }
    if (rows.empty()) throw Error("trace csv: no rows");

    std::map<int, GrowthNode> by_id;
    std::vector<GrowthEvent> events;
    for (const auto& r : rows) {
        if (events.empty() || events.back().time != r.time) events.push_back({r.time, {}, {}});
        events.back().ball_ids.push_back(r.id);
        auto it = by_id.find(r.id);
        if (it == by_id.end()) {
            GrowthNode nd;
            nd.id = r.id;
            nd.birth_ball = r.ball;
            nd.birth_time = r.time;
            nd.parent = r.parent;
            by_id[r.id] = nd;
        }
    }
    const int max_id = by_id.rbegin()->first;
    std::vector<GrowthNode> nodes(static_cast<std::size_t>(max_id + 1));
    for (auto& [id, nd] : by_id) {
        if (id < 0) throw Error("trace csv: negative ball id");
        nodes[static_cast<std::size_t>(id)] = nd;
    }
    for (auto& nd : nodes) {
        if (nd.id < 0) throw Error("trace csv: ball ids must be contiguous from 0");
        if (nd.parent >= 0) {
            auto& par = nodes.at(static_cast<std::size_t>(nd.parent));
            par.children.push_back(nd.id);
        }
    }
    for (auto& nd : nodes) {
        std::sort(nd.children.begin(), nd.children.end());
        if (nd.parent >= 0) nd.death_time = nodes[static_cast<std::size_t>(nd.parent)].birth_time;
    }
    for (auto& ev : events) {
        for (int id : ev.ball_ids) {
            const auto& nd = nodes[static_cast<std::size_t>(id)];
            if (!nd.children.empty() && nd.birth_time == ev.time) ev.merges.push_back({id, nd.children});
        }
    }
    return GrowthTrace(std::move(nodes), std::move(events));
}

} // namespace vlab
