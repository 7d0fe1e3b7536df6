#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vlab::testing {

namespace {

struct Blob {
    Point2 c;
    double r;
    std::set<int> members;
};

Partition partition_of(const std::vector<Blob>& blobs) {
    Partition p;
    for (const auto& b : blobs) p.insert(b.members);
    return p;
}

// Merges every overlapping group; returns true if anything merged.
bool merge_overlaps(std::vector<Blob>& blobs) {
    bool any = false;
    for (;;) {
        const std::size_t n = blobs.size();
        std::vector<std::size_t> root(n);
        std::iota(root.begin(), root.end(), 0);
        auto find = [&](std::size_t i) {
            while (root[i] != i) i = root[i] = root[root[i]];
            return i;
        };
        bool merged = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = i + 1; k < n; ++k) {
                if (distance(blobs[i].c, blobs[k].c) <= blobs[i].r + blobs[k].r) {
                    root[find(i)] = find(k);
                    merged = true;
                }
            }
        }
        if (!merged) return any;
        any = true;
        std::vector<Blob> next;
        std::vector<long> slot(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t r = find(i);
            if (slot[r] < 0) {
                slot[r] = static_cast<long>(next.size());
                next.push_back({{0.0, 0.0}, 0.0, {}});
            }
            auto& b = next[static_cast<std::size_t>(slot[r])];
            b.c += blobs[i].c * blobs[i].r;
            b.r += blobs[i].r;
            b.members.insert(blobs[i].members.begin(), blobs[i].members.end());
        }
        for (auto& b : next) b.c = b.c / b.r;
        blobs = std::move(next);
    }
}

} // namespace

std::vector<OracleEvent> stepping_oracle(const std::vector<Ball>& initial, double target, double step) {
    std::vector<Blob> blobs;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        blobs.push_back({initial[i].center, initial[i].radius, {static_cast<int>(i)}});
    }
    const double growth = 1.0 + step;
    const double log_growth = std::log(growth);
    std::vector<OracleEvent> events;
    auto total = [&] {
        double s = 0.0;
        for (const auto& b : blobs) s += b.r;
        return s;
    };
    for (;;) {
        const double t = total();
        // Steps that can be skipped: no pair reaches contact before then.
        double safe = std::floor(std::log(target / t) / log_growth);
        for (std::size_t i = 0; i < blobs.size(); ++i) {
            for (std::size_t k = i + 1; k < blobs.size(); ++k) {
                const double ratio = distance(blobs[i].c, blobs[k].c) / (blobs[i].r + blobs[k].r);
                safe = std::min(safe, std::floor(std::log(ratio) / log_growth) - 2.0);
            }
        }
        if (safe >= 1.0) {
            const double f = std::pow(growth, safe);
            for (auto& b : blobs) b.r *= f;
        }
        if (total() * growth > target) break;
        for (auto& b : blobs) b.r *= growth;
        if (merge_overlaps(blobs)) events.push_back({total(), partition_of(blobs)});
    }
    return events;
}

std::vector<OracleEvent> trace_events(const GrowthTrace& trace) {
    std::vector<OracleEvent> out;
    const auto leaves = trace.leaf_ids();
    std::vector<int> index_of(trace.nodes().size(), -1);
    for (std::size_t i = 0; i < leaves.size(); ++i) index_of[static_cast<std::size_t>(leaves[i])] = static_cast<int>(i);
    for (double t : trace.merging_times()) {
        Partition p;
        for (int id : trace.ids_at(t)) {
            std::set<int> members;
            for (int leaf : trace.leaves_of(id)) members.insert(index_of[static_cast<std::size_t>(leaf)]);
            p.insert(members);
        }
        out.push_back({t, p});
    }
    return out;
}

PointConfig random_config(std::mt19937_64& rng, std::size_t n, double side, double min_sep) {
    std::uniform_real_distribution<double> u(0.0, side);
    std::vector<Point2> pts;
    while (pts.size() < n) {
        const Point2 p{u(rng), u(rng)};
        bool ok = true;
        for (const auto& q : pts) ok = ok && distance(p, q) >= min_sep;
        if (ok) pts.push_back(p);
    }
    return PointConfig(pts);
}

AnnuliCollection random_annuli(std::mt19937_64& rng, std::size_t count) {
    // Endpoints on a coarse grid so that touching and nested intervals occur.
    std::uniform_int_distribution<int> grid(0, 8);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    AnnuliCollection c;
    while (c.annuli.size() < count) {
        const int a = grid(rng);
        const int b = grid(rng);
        if (a == b) continue;
        c.annuli.push_back({{u(rng), u(rng)}, 0.25 * std::min(a, b), 0.25 * std::max(a, b)});
    }
    return c;
}

} // namespace vlab::testing
