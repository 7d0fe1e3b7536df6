#pragma once

#include "vortexlab/core.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>

namespace vlab {

/// Point density that neutralizes the Lebesgue background: 2π·density = 1.
inline constexpr double kNeutralDensity = 1.0 / (2.0 * M_PI);

double hex_spacing(double density = kNeutralDensity);
double square_spacing(double density = kNeutralDensity);
/// Spacing of the neutral chain for curl j = 2πν − δ_ℝ.
inline constexpr double kLineSpacing = 2.0 * M_PI;

/// Lattice points (one at the origin) strictly inside B(0, R).
PointConfig hex_lattice_in_ball(double R, double density = kNeutralDensity);
PointConfig square_lattice_in_ball(double R, double density = kNeutralDensity);

/// Hexagonal patch of s shells around the origin: n = 1 + 3s(s + 1).
PointConfig hex_shells(int shells, double density = kNeutralDensity);
/// s with 1 + 3s(s + 1) = n; throws if n is not a centered hexagonal number.
int hex_shells_for_count(std::size_t n);

/// Points k·spacing on the x₁-axis with |k·spacing| < half_length.
PointConfig line_lattice(double half_length, double spacing = kLineSpacing);

/// Poisson process of the given intensity on the region, conditioned on a
/// minimum separation (rejected draws are skipped). Seeded, deterministic.
PointConfig poisson_in_region(const Region& region, double intensity, std::uint64_t seed, double min_separation = 0.0);
/// Exactly n uniform points in the region with the given minimum separation.
PointConfig uniform_in_region(const Region& region, std::size_t n, std::uint64_t seed, double min_separation = 0.0);

/// Input file: {"points": [[x,y],...], "background": {"kind": ...}, "region": {...}}.
struct ConfigInput {
    PointConfig config;
    BackgroundMeasure background;
    std::optional<Region> region;
};

ConfigInput parse_config_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const PointConfig& config, const BackgroundMeasure& background,
                              const std::optional<Region>& region);
nlohmann::json region_to_json(const Region& region);
Region parse_region_json(const nlohmann::json& doc);

} // namespace vlab
