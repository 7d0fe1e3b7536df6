#pragma once

#include "vortexlab/core.hpp"
#include "vortexlab/fields.hpp"

#include "json.hpp"

#include <functional>
#include <vector>

namespace vlab {

struct EnergyReport {
    double W_estimate = 0.0;
    std::vector<double> eta_sequence;
    std::vector<double> I_values;       // I(η) = ½∫ outside η-discs of χ|j|² + π log η Σχ(p)
    std::vector<double> extrapolants;   // second Richardson level, one per η from the third on
    double extrapolation_residual = 0.0;
    double quadrature_tolerance = 0.0;
    double quadrature_error = 0.0;      // summed cell error estimates
    std::size_t active_poles = 0;
};

nlohmann::json to_json(const EnergyReport& report);

/// Smooth bump: 1 on [0, ½], 0 on [1, ∞), quintic smoothstep between.
double pole_bump(double s);

/// Radius of the disc handled in polar coordinates around each pole of j:
/// min(½, 0.45 · distance to the nearest other pole).
std::vector<double> pole_disc_radii(const std::vector<Point2>& poles);

/// W(j, χ) = lim_{η→0} ½∫_{ℝ²∖∪B̄(p,η)} χ|j|² + π log η Σ_p χ(p).
///
/// Near each pole a partition of unity hands the integral to polar
/// coordinates, where the 1/r² part is integrated in closed form and the
/// π log η terms cancel exactly; the remaining η-dependence is removed by
/// Richardson extrapolation on η_k = η₀ 2^{−k}. Throws after 12 levels
/// without |ΔW| < tol.
EnergyReport renormalized_energy(const AnalyticField& j, const Cutoff& chi, const PointConfig& config, double tol);

struct DensitySample {
    double R = 0.0;
    double W = 0.0;
    double measure = 0.0;      // |U_R| (or length for line configurations)
    double density = 0.0;      // W / measure
    double error = 0.0;        // extrapolation residual + quadrature error, over measure
    std::size_t n = 0;
};

/// W(j_R, χ_{U_R}) / |U_R| for each R, with j_R = synthetic_j(family(R), background)
/// and χ the standard cutoff of region(R). `measure` defaults to the region area.
std::vector<DensitySample> energy_density(const std::function<PointConfig(double)>& family,
                                          const BackgroundMeasure& background, const std::vector<double>& R_values,
                                          double tol, const std::function<Region(double)>& region,
                                          const std::function<double(double)>& measure = {});

struct ShiftAveragedDensity {
    double R = 0.0;              // disc radius, or half length for chains
    double measure = 0.0;        // |U| (length for chains)
    double density = 0.0;        // mean over shifts of W/measure
    double min = 0.0;
    double max = 0.0;
    std::size_t shifts = 0;
    double at_origin = 0.0;      // W/measure for the unshifted placement
};

/// W/|B(0,R)| for the exact periodic lattice field at density 1/(2π), averaged
/// over the k×k midpoint grid of translations of the fundamental cell. The
/// average removes the dependence on where lattice points fall in the cutoff
/// ramp; it converges to (∫χ/|U|)·W_cell/(2π).
ShiftAveragedDensity lattice_energy_density(LatticeKind kind, double R, std::size_t k, double tol);

/// W per unit length for the neutral periodic chain with the given offsets on
/// U = [−half_length, half_length] × [−3, 3], averaged over k translations
/// through one period.
ShiftAveragedDensity chain_energy_density(const std::vector<double>& offsets, double half_length, std::size_t k,
                                          double tol);

} // namespace vlab
