#pragma once

#include "vortexlab/core.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace vlab {

/// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) { add(v); return *this; }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double compensated_total(const std::vector<double>& values);

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss–Legendre rule with n nodes (Newton iteration on P_n).
const GaussRule& gauss_legendre(std::size_t n);

/// Fixed-order rule on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n = 8);

/// Adaptive Gauss–Kronrod-free bisection: accepts an interval when the n-point
/// rule and its two-halves refinement agree to `tol` (scaled by length).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          std::size_t max_depth = 40);

struct CubatureOptions {
    double abs_tol = 1e-8;      // target for the whole box
    std::size_t max_depth = 18;
    std::size_t max_cells = 4000000;
    double max_cell = 0.0;      // initial cells are at most this wide (0 = one cell)
    /// Cells for which this returns true are split regardless of the error test.
    std::function<bool(const Box&)> must_split;
    /// Extra initial cut lines (x = const and y = const).
    std::vector<double> x_cuts;
    std::vector<double> y_cuts;
};

struct CubatureResult {
    double value = 0.0;
    double error = 0.0;          // sum of leaf |parent − children| estimates
    std::size_t cells = 0;
    bool converged = true;       // false if the error target was not reached
};

/// Globally adaptive quadtree cubature with 4×4 tensor Gauss–Legendre per cell:
/// the leaf with the largest error estimate is split until the summed estimate
/// is below abs_tol. Cell evaluations run in parallel; the result does not
/// depend on the worker count.
CubatureResult adaptive_cubature(const std::function<double(const Point2&)>& f, const Box& box,
                                 const CubatureOptions& options);

/// Worker count used by parallel loops: set_thread_count, else VLAB_THREADS, else 1.
int thread_count();
void set_thread_count(int n);

/// Calls body(i) for i in [0, n) on thread_count() workers. Each index runs once;
/// callers write results by index so outcomes do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace vlab
