#include "vortexlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <queue>
#include <tuple>
#include <thread>

namespace vlab {

double compensated_total(const std::vector<double>& values) {
    CompensatedSum s;
    for (double v : values) s.add(v);
    return s.value();
}

namespace {

GaussRule build_rule(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

} // namespace

const GaussRule& gauss_legendre(std::size_t n) {
    if (n == 0 || n > 64) throw Error("gauss_legendre: order must be in [1, 64]");
    static std::mutex mu;
    static std::map<std::size_t, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
    return half * s.value();
}

namespace {

double adaptive_1d(const std::function<double(double)>& f, double a, double b, double whole, double tol,
                   std::size_t depth) {
    const double m = 0.5 * (a + b);
    const double left = integrate_gl(f, a, m, 8);
    const double right = integrate_gl(f, m, b, 8);
    if (std::abs(left + right - whole) <= tol || depth == 0) return left + right;
    return adaptive_1d(f, a, m, left, 0.5 * tol, depth - 1) + adaptive_1d(f, m, b, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          std::size_t max_depth) {
    if (a == b) return 0.0;
    return adaptive_1d(f, a, b, integrate_gl(f, a, b, 8), tol, max_depth);
}

namespace {

constexpr std::size_t kCellOrder = 4;
// Cells split per round; fixed so results do not depend on the worker count.
constexpr std::size_t kBatch = 16;

double cell_rule(const std::function<double(const Point2&)>& f, const Box& c) {
    static const GaussRule& rule = gauss_legendre(kCellOrder);
    const double hx = 0.5 * c.width();
    const double hy = 0.5 * c.height();
    const double mx = 0.5 * (c.lo.x + c.hi.x);
    const double my = 0.5 * (c.lo.y + c.hi.y);
    CompensatedSum s;
    for (std::size_t i = 0; i < kCellOrder; ++i) {
        for (std::size_t k = 0; k < kCellOrder; ++k) {
            s.add(rule.weights[i] * rule.weights[k] * f({mx + hx * rule.nodes[i], my + hy * rule.nodes[k]}));
        }
    }
    return hx * hy * s.value();
}

std::array<Box, 4> quarters(const Box& c) {
    const Point2 m = (c.lo + c.hi) * 0.5;
    return {Box{c.lo, m}, Box{{m.x, c.lo.y}, {c.hi.x, m.y}}, Box{{c.lo.x, m.y}, {m.x, c.hi.y}}, Box{m, c.hi}};
}

// A leaf carries its own estimate and that of its four quarters; the error is
// |quarters − whole| and the value reported is the quarters' sum.
struct Leaf {
    Box box;
    std::size_t depth = 0;
    std::array<double, 4> parts{};
    double value = 0.0;
    double error = 0.0;
    bool forced = false;
    bool alive = true;
};

void evaluate(const std::function<double(const Point2&)>& f, const CubatureOptions& opt, Leaf& leaf, double whole) {
    const auto q = quarters(leaf.box);
    for (std::size_t i = 0; i < 4; ++i) leaf.parts[i] = cell_rule(f, q[i]);
    leaf.value = (leaf.parts[0] + leaf.parts[1]) + (leaf.parts[2] + leaf.parts[3]);
    leaf.error = std::abs(leaf.value - whole);
    leaf.forced = opt.must_split && opt.must_split(leaf.box);
}

} // namespace

CubatureResult adaptive_cubature(const std::function<double(const Point2&)>& f, const Box& box,
                                 const CubatureOptions& options) {
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) return {};

    auto cut_points = [&](double lo, double hi, const std::vector<double>& extra) {
        std::vector<double> pts{lo, hi};
        for (double c : extra) {
            if (c > lo && c < hi) pts.push_back(c);
        }
        std::sort(pts.begin(), pts.end());
        std::vector<double> out{pts.front()};
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double a = out.back();
            const double b = pts[i];
            if (b <= a) continue;
            const std::size_t m =
                options.max_cell > 0.0 ? static_cast<std::size_t>(std::ceil((b - a) / options.max_cell)) : 1;
            for (std::size_t k = 1; k <= m; ++k) {
                out.push_back(k == m ? b : a + (b - a) * static_cast<double>(k) / static_cast<double>(m));
            }
        }
        return out;
    };
    const auto xs = cut_points(box.lo.x, box.hi.x, options.x_cuts);
    const auto ys = cut_points(box.lo.y, box.hi.y, options.y_cuts);

    std::vector<Leaf> leaves;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        for (std::size_t k = 0; k + 1 < ys.size(); ++k) leaves.push_back({{{xs[i], ys[k]}, {xs[i + 1], ys[k + 1]}}});
    }
    parallel_for(leaves.size(), [&](std::size_t i) { evaluate(f, options, leaves[i], cell_rule(f, leaves[i].box)); });

    // Max-heap on (forced, error), ties broken by leaf index.
    using Key = std::tuple<bool, double, long>;
    auto key_of = [&](std::size_t i) { return Key{leaves[i].forced, leaves[i].error, -static_cast<long>(i)}; };
    std::priority_queue<Key> heap;
    // Leaves at max_depth cannot be refined; their error is tracked apart so
    // that it does not drive useless refinement elsewhere.
    double open_error = 0.0;
    double frozen_error = 0.0;
    auto admit = [&](std::size_t i) {
        if (leaves[i].depth < options.max_depth) {
            open_error += leaves[i].error;
            heap.push(key_of(i));
        } else {
            frozen_error += leaves[i].error;
        }
    };
    for (std::size_t i = 0; i < leaves.size(); ++i) admit(i);
    auto done = [&] {
        const double budget = std::max(options.abs_tol - frozen_error, 0.05 * options.abs_tol);
        return open_error <= budget;
    };

    CubatureResult res;
    std::vector<std::size_t> batch;
    while (!heap.empty()) {
        const bool forced = std::get<0>(heap.top());
        if (!forced && done()) break;
        if (leaves.size() + 4 * kBatch > options.max_cells) {
            res.converged = false;
            break;
        }
        batch.clear();
        while (!heap.empty() && batch.size() < kBatch) {
            const auto top = heap.top();
            if (!std::get<0>(top) && done() && !batch.empty()) break;
            heap.pop();
            const auto b = static_cast<std::size_t>(-std::get<2>(top));
            open_error -= leaves[b].error;
            batch.push_back(b);
        }
        const std::size_t first = leaves.size();
        for (std::size_t b : batch) {
            leaves[b].alive = false;
            const auto q = quarters(leaves[b].box);
            for (std::size_t i = 0; i < 4; ++i) {
                Leaf child;
                child.box = q[i];
                child.depth = leaves[b].depth + 1;
                leaves.push_back(child);
            }
        }
        parallel_for(4 * batch.size(), [&](std::size_t k) {
            const auto& parent = leaves[batch[k / 4]];
            evaluate(f, options, leaves[first + k], parent.parts[k % 4]);
        });
        for (std::size_t i = first; i < leaves.size(); ++i) admit(i);
    }
    CompensatedSum v;
    CompensatedSum e;
    for (const auto& l : leaves) {
        if (!l.alive) continue;
        v.add(l.value);
        e.add(l.error);
        res.cells += 4;
        if (l.depth >= options.max_depth && l.error > options.abs_tol) res.converged = false;
    }
    res.value = v.value();
    res.error = e.value();
    if (res.error > options.abs_tol) res.converged = false;
    return res;
}

namespace {

std::atomic<int> g_threads{0};
thread_local bool t_in_parallel = false;

} // namespace

int thread_count() {
    const int set = g_threads.load();
    if (set > 0) return set;
    if (const char* env = std::getenv("VLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

void set_thread_count(int n) {
    if (n < 1) throw Error("thread count must be at least 1");
    g_threads.store(n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    // Nested loops run serially on the calling worker.
    if (workers <= 1 || t_in_parallel) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto run = [&] {
        t_in_parallel = true;
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
        t_in_parallel = false;
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

} // namespace vlab
