#include "vortexlab/annuli.hpp"

#include <algorithm>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <queue>

namespace vlab {

AnnuliCollection annuli_from_trace(const GrowthTrace& trace) {
    AnnuliCollection out;
    const auto& events = trace.events();
    for (std::size_t i = 0; i + 1 < events.size(); ++i) {
        const double t0 = events[i].time;
        const double t1 = events[i + 1].time;
        if (!(t1 > t0)) continue;
        for (int id : events[i].ball_ids) {
            // both ends through at() so consecutive phases share their radius exactly
            const Ball b = trace.node(id).at(t0);
            out.annuli.push_back({b.center, b.radius, trace.node(id).at(t1).radius});
            out.origins.push_back({id, i});
        }
    }
    return out;
}

bool concentrically_rearrangeable(const std::vector<Annulus>& annuli, const std::vector<std::size_t>& subset) {
    std::vector<std::pair<double, double>> iv;
    iv.reserve(subset.size());
    for (auto i : subset) iv.push_back({annuli.at(i).inner, annuli.at(i).outer});
    std::sort(iv.begin(), iv.end());
    for (std::size_t k = 1; k < iv.size(); ++k) {
        if (iv[k - 1].second > iv[k].first) return false;
    }
    return true;
}

bool is_valid_partition(const AnnuliCollection& collection, const McrPartition& partition) {
    std::vector<int> seen(collection.size(), 0);
    for (const auto& cls : partition.classes) {
        if (cls.empty()) return false;
        for (auto i : cls) {
            if (i >= collection.size() || seen[i]++) return false;
        }
        if (!concentrically_rearrangeable(collection.annuli, cls)) return false;
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

std::size_t max_overlap_depth(const AnnuliCollection& collection) {
    // The depth function is constant on pieces (a, b], so its maximum is
    // attained at some outer radius.
    std::size_t best = 0;
    for (const auto& probe : collection.annuli) {
        const double t = probe.outer;
        std::size_t depth = 0;
        for (const auto& a : collection.annuli) {
            if (a.inner < t && t <= a.outer) ++depth;
        }
        best = std::max(best, depth);
    }
    return best;
}

McrPartition mcr_exact(const AnnuliCollection& collection) {
    std::vector<std::size_t> order(collection.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto& a = collection.annuli;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        if (a[l].inner != a[r].inner) return a[l].inner < a[r].inner;
        if (a[l].outer != a[r].outer) return a[l].outer < a[r].outer;
        return l < r;
    });

    McrPartition out;
    // min-heap of (current outer end, class index)
    using Slot = std::pair<double, std::size_t>;
    std::priority_queue<Slot, std::vector<Slot>, std::greater<>> ends;
    for (auto i : order) {
        if (!ends.empty() && ends.top().first <= a[i].inner) {
            const auto cls = ends.top().second;
            ends.pop();
            out.classes[cls].push_back(i);
            ends.push({a[i].outer, cls});
        } else {
            out.classes.push_back({i});
            ends.push({a[i].outer, out.classes.size() - 1});
        }
    }
    return out;
}

std::size_t mcr_brute(const AnnuliCollection& collection) {
    const std::size_t m = collection.size();
    if (m > 10) throw Error("mcr_brute: at most 10 annuli");
    if (m == 0) return 0;
    const auto& a = collection.annuli;
    auto overlap = [&](std::size_t i, std::size_t k) {
        return std::max(a[i].inner, a[k].inner) < std::min(a[i].outer, a[k].outer);
    };

    // Enumerate every set partition (restricted growth strings); no pruning
    // beyond rejecting invalid classes as they form.
    std::size_t best = m;
    std::vector<std::vector<std::size_t>> classes;
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx == m) {
            best = std::min(best, classes.size());
            return;
        }
        // by index: the recursion appends to `classes`
        for (std::size_t c = 0; c < classes.size(); ++c) {
            bool ok = true;
            for (auto k : classes[c]) ok = ok && !overlap(idx, k);
            if (!ok) continue;
            classes[c].push_back(idx);
            rec(idx + 1);
            classes[c].pop_back();
        }
        classes.push_back({idx});
        rec(idx + 1);
        classes.pop_back();
    };
    rec(0);
    return best;
}

McrPartition mcr_construction_partition(const GrowthTrace& trace) {
    return mcr_construction_partition(trace, annuli_from_trace(trace));
}

McrPartition mcr_construction_partition(const GrowthTrace& trace, const AnnuliCollection& collection) {
    if (!collection.has_provenance()) {
        throw Error("mcr_construction_partition: annuli carry no trace provenance");
    }
    std::map<int, std::vector<std::size_t>> own;
    for (std::size_t i = 0; i < collection.size(); ++i) {
        const int id = collection.origins[i].node_id;
        if (id < 0 || static_cast<std::size_t>(id) >= trace.nodes().size()) {
            throw Error("mcr_construction_partition: annulus provenance does not match the trace");
        }
        own[id].push_back(i);
    }

    // classes(v)[0] always holds v's own annuli.
    std::function<std::vector<std::vector<std::size_t>>(int)> classes_of = [&](int id) {
        const auto& nd = trace.node(id);
        std::vector<std::vector<std::size_t>> out;
        if (nd.children.empty()) {
            out.push_back({});
        } else {
            int largest = nd.children.front();
            for (int c : nd.children) {
                if (trace.node(c).at(nd.birth_time).radius > trace.node(largest).at(nd.birth_time).radius) {
                    largest = c;
                }
            }
            out = classes_of(largest);
            for (int c : nd.children) {
                if (c == largest) continue;
                auto sub = classes_of(c);
                for (auto& cls : sub) out.push_back(std::move(cls));
            }
        }
        if (auto it = own.find(id); it != own.end()) {
            out.front().insert(out.front().end(), it->second.begin(), it->second.end());
        }
        return out;
    };

    McrPartition part;
    for (int root : trace.root_ids()) {
        for (auto& cls : classes_of(root)) {
            if (!cls.empty()) part.classes.push_back(std::move(cls));
        }
    }
    return part;
}

void write_annuli_csv(std::ostream& out, const AnnuliCollection& collection, const McrPartition& partition) {
    std::vector<long> cls_of(collection.size(), -1);
    for (std::size_t k = 0; k < partition.classes.size(); ++k) {
        for (auto i : partition.classes[k]) cls_of.at(i) = static_cast<long>(k);
    }
    out << "center_x,center_y,inner,outer,class_id\n" << std::setprecision(17);
    for (std::size_t i = 0; i < collection.size(); ++i) {
        const auto& a = collection.annuli[i];
        out << a.center.x << ',' << a.center.y << ',' << a.inner << ',' << a.outer << ',' << cls_of[i] << '\n';
    }
}

namespace {

const char* palette(std::size_t k) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[k % 10];
}

void annulus_path(std::ostream& out, double cx, double cy, double r_in, double r_out, const char* color) {
    // Even-odd fill of two circles draws the ring.
    out << "<path fill-rule=\"evenodd\" fill=\"" << color << "\" fill-opacity=\"0.45\" stroke=\"" << color
        << "\" stroke-width=\"0.5\" vector-effect=\"non-scaling-stroke\" d=\"";
    for (double r : {r_out, r_in}) {
        out << "M " << cx - r << ' ' << cy << " a " << r << ' ' << r << " 0 1 0 " << 2 * r << " 0 a " << r << ' '
            << r << " 0 1 0 " << -2 * r << " 0 ";
    }
    out << "\"/>\n";
}

} // namespace

void write_annuli_svg(std::ostream& out, const AnnuliCollection& collection, const McrPartition& partition) {
    if (collection.size() == 0) {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"10\" height=\"10\"/>\n";
        return;
    }
    std::vector<std::size_t> cls_of(collection.size(), 0);
    for (std::size_t k = 0; k < partition.classes.size(); ++k) {
        for (auto i : partition.classes[k]) cls_of.at(i) = k;
    }
    Box box{{1e300, 1e300}, {-1e300, -1e300}};
    double max_outer = 0.0;
    for (const auto& a : collection.annuli) {
        box.lo.x = std::min(box.lo.x, a.center.x - a.outer);
        box.lo.y = std::min(box.lo.y, a.center.y - a.outer);
        box.hi.x = std::max(box.hi.x, a.center.x + a.outer);
        box.hi.y = std::max(box.hi.y, a.center.y + a.outer);
        max_outer = std::max(max_outer, a.outer);
    }
    const double w1 = box.width();
    const double h = std::max(box.height(), 2 * max_outer);
    const double w2 = 2.2 * max_outer * static_cast<double>(std::max<std::size_t>(1, partition.count()));
    const double total_w = w1 + 0.1 * w1 + w2;
    out << std::setprecision(9);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"900\" height=\""
        << static_cast<int>(900.0 * h / total_w) + 1 << "\" viewBox=\"" << box.lo.x << ' ' << -box.hi.y << ' '
        << total_w << ' ' << h << "\">\n";
    // y is flipped so the picture matches the plane's orientation.
    out << "<g transform=\"scale(1,-1)\">\n";
    for (std::size_t i = 0; i < collection.size(); ++i) {
        const auto& a = collection.annuli[i];
        annulus_path(out, a.center.x, a.center.y, a.inner, a.outer, palette(cls_of[i]));
    }
    const double base_x = box.lo.x + 1.1 * w1 + 1.1 * max_outer;
    const double base_y = 0.5 * (box.lo.y + box.hi.y);
    for (std::size_t k = 0; k < partition.classes.size(); ++k) {
        for (auto i : partition.classes[k]) {
            const auto& a = collection.annuli[i];
            annulus_path(out, base_x + 2.2 * max_outer * static_cast<double>(k), base_y, a.inner, a.outer,
                         palette(k));
        }
    }
    out << "</g>\n</svg>\n";
}

} // namespace vlab
