#pragma once

#include "vortexlab/core.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace vlab {

/// Uniform grid block: cell (i, k) covers [origin + (i, k)h, origin + (i+1, k+1)h].
/// Cells outside the measured domain hold NaN.
struct SamplePatch {
    Point2 origin;
    double h = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> values;   // row-major, k * nx + i

    Point2 cell_center(std::size_t i, std::size_t k) const {
        return {origin.x + (static_cast<double>(i) + 0.5) * h, origin.y + (static_cast<double>(k) + 0.5) * h};
    }
};

/// A sample of |f| standing for a cell of the given area around `at`.
struct WeightedSample {
    Point2 at;
    double value = 0.0;
    double weight = 0.0;
};

/// |f| sampled on one or more patches (each finite sample carries weight h²)
/// and on loose weighted samples.
class SampledField {
public:
    SampledField() = default;
    explicit SampledField(std::vector<SamplePatch> patches);

    void add_patch(SamplePatch patch);
    void add_samples(const std::vector<WeightedSample>& samples);
    const std::vector<SamplePatch>& patches() const { return patches_; }
    const std::vector<WeightedSample>& samples() const { return samples_; }

    /// (value, weight) pairs sorted by decreasing value.
    const std::vector<std::pair<double, double>>& sorted() const { return sorted_; }
    double measure() const { return measure_; }

    SampledField scaled(double a) const;

private:
    void rebuild();

    std::vector<SamplePatch> patches_;
    std::vector<WeightedSample> samples_;
    std::vector<std::pair<double, double>> sorted_;
    double measure_ = 0.0;
};

enum class SampleRule {
    center,     // value at the cell center (offset h/3 diagonally if a pole sits there)
    cell_min,   // minimum over the 3×3 nodes of the cell; a pointwise lower envelope
    cell_mean   // cell average; 2×2 Gauss, adaptive on cells within h of a pole
};

/// Samples |f| on the cells of `box` (spacing h) whose centers satisfy `inside`.
SamplePatch sample_patch(const std::function<double(const Point2&)>& f, const Box& box, double h, SampleRule rule,
                         const std::function<bool(const Point2&)>& inside, const std::vector<Point2>& poles = {});

SampledField sample_field(const std::function<double(const Point2&)>& f, const Box& box, double h, SampleRule rule,
                          const std::function<bool(const Point2&)>& inside, const std::vector<Point2>& poles = {});

/// Cell averages of |f| on a polar grid about `center` covering inner < r ≤ outer:
/// radii spaced geometrically, angles uniform, weights the exact cell areas.
/// With inner = 0 the innermost cell is the disc of radius outer·1e-6.
std::vector<WeightedSample> sample_polar(const std::function<double(const Point2&)>& f, const Point2& center,
                                         double inner, double outer, std::size_t radial_cells,
                                         std::size_t angular_cells);

/// λ(t) = |{|f| > t}|.
double distribution_function(const SampledField& field, double t);

/// sup_t √(t² λ(t)).
double quasi_norm(const SampledField& field);

/// sup over finite-measure E of |E|^{−1/2} ∫_E |f|, taken over superlevel sets
/// including fractions of a constant-value cell.
double lorentz_norm(const SampledField& field);

/// (∫|f|^p)^{1/p}.
double lp_norm(const SampledField& field, double p);
/// (∫(χ^{1/2}|f|)^p)^{1/p}, χ evaluated at cell centers.
double lp_norm(const SampledField& field, double p, const std::function<double(const Point2&)>& weight);

/// C_p = (2/(2−p))^{1/p}, 1 ≤ p < 2.
double embedding_constant(double p);

struct EmbeddingCheck {
    double lhs = 0.0;         // ‖f‖_p
    double rhs = 0.0;         // C_p |U|^{1/p − 1/2} ⦀f⦀
    double C_p = 0.0;
    bool holds = false;
};

/// ‖f‖_{L^p(U)} ≤ C_p |U|^{1/p−1/2} ⦀f⦀, checked on the samples (exact for step functions).
EmbeddingCheck embedding_check(const SampledField& field, double p, double domain_area);

/// CSV columns t,lambda at every distinct sample value (taken just below it) and at 0.
void write_distribution_csv(std::ostream& out, const SampledField& field);

} // namespace vlab
