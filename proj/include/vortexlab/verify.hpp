#pragma once

#include "vortexlab/annuli.hpp"
#include "vortexlab/core.hpp"
#include "vortexlab/energy.hpp"
#include "vortexlab/fields.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/lorentz.hpp"

#include "json.hpp"

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vlab {

/// Index of the covering ball U_α = B(x_α, 1/4), x_α = (i, j)/8.
struct Alpha {
    long i = 0;
    long j = 0;
    auto operator<=>(const Alpha&) const = default;
};

/// max_x #{z ∈ ℤ² : |x − z| < radius} (open discs), found by checking the
/// cells of the circle arrangement around every pairwise intersection.
int max_lattice_points_in_open_disc(double radius);
/// #{z ∈ ℤ² : |z| ≤ radius}.
int lattice_points_in_closed_disc(double radius);
/// #{z ∈ ℤ² : |z| < radius}.
int lattice_points_in_open_disc(double radius);

struct Covering {
    static constexpr double kRadius = 0.25;
    static constexpr double kSpacing = 0.125;

    Region region;
    int overlap_number = 0;         // C_*: sup over x of the number of U_α containing x
    int lattice_count = 0;          // #{(i,j) : i² + j² ≤ 4}, the count at a lattice point
    int neighbor_bound = 0;         // k = #{β : dist(U_β, U_α) < 1/2}
    double rho = 0.0;               // 1/(32k)
    std::size_t alpha_count = 0;    // #{α : U_α ∩ Û ≠ ∅}

    static Point2 center(const Alpha& a) { return {kSpacing * static_cast<double>(a.i), kSpacing * static_cast<double>(a.j)}; }
    /// U_α ∩ Û ≠ ∅.
    bool member(const Alpha& a) const { return region.signed_depth(center(a)) > -1.0 - kRadius; }
    /// Member α with p ∈ U_α, sorted.
    std::vector<Alpha> alphas_containing(const Point2& p) const;
};

Covering build_covering(const Region& U);

struct AlphaGrowth {
    Alpha alpha;
    std::vector<std::size_t> points;   // indices into Λ
    GrowthTrace trace;
    AnnuliCollection annuli;
};

struct KeptBall {
    Ball ball;
    std::size_t growth = 0;            // index into growths
    int node_id = -1;
    std::vector<std::size_t> points;   // indices into Λ
    AnalyticField G;                   // G restricted to this ball
};

struct LocalizedConstruction {
    Covering covering;
    double eta = 0.0;
    double rho = 0.0;
    std::vector<AlphaGrowth> growths;
    std::vector<KeptBall> kept;
    std::size_t components = 0;
    std::size_t pruned = 0;            // balls removed from components
    AnnuliCollection annuli;           // kept annuli
    AnalyticField G;
};

/// Per-α growths to total radius ρ from {B̄(p, η)}, η = ½min{η₀, ρ/n}; each
/// connected component of the union of all balls is kept only with the balls
/// of the first α₀ (in (i, j) order) whose U_α₀ contains it.
LocalizedConstruction localized_construction(const PointConfig& lambda, const Region& U);

/// Points of the configuration in Û.
PointConfig points_in_hat(const PointConfig& config, const Region& U);

/// #{p : B(p, ½) ∩ {0 < χ ≤ ½‖χ‖_∞} ≠ ∅}, by exact geometry of the depth band.
std::size_t n_prime(const PointConfig& lambda, const Cutoff& chi);

/// D with ½∫χ|j − G|² = W(j, χ) + D:
/// D = ½[Σ_A ∫_A χ(|G|² − 2j·G) − Σ_p (2πχ(p) log η + E_p)],
/// E_p = ∫_{B(p,η)} (χ − χ(p))/|x − p|² + 2χ V_p·R_p. Annuli are integrated in
/// polar coordinates about their centers.
double comparison_defect(const AnalyticField& j, const Cutoff& chi, const std::vector<Point2>& points, double eta,
                         const AnnuliCollection& annuli, double tol);

/// Sampled |G| on every kept ball (cell averages, h = radius/cells_per_radius).
SampledField sample_G(const LocalizedConstruction& lc, std::size_t cells_per_radius = 64);

struct TheoremOptions {
    double beta = 1.0;
    double energy_tol = 1e-3;
    std::size_t g_cells_per_radius = 48;
};

struct VerifyReport {
    std::size_t n = 0;
    std::size_t n_prime = 0;
    std::size_t j_points = 0;
    std::string background;
    double beta = 1.0;
    double W = 0.0;
    double W_residual = 0.0;
    double chi_sup = 0.0;
    double chi_lip = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    int C_star = 0;
    int C_star_lattice = 0;
    int k = 0;
    std::size_t components = 0;
    std::size_t kept_balls = 0;
    std::size_t pruned = 0;
    double G_quasi = 0.0;
    double G_norm = 0.0;
    double G_norm_sq_over_n = 0.0;
    double G_bound_over_n = 0.0;       // π(4·13 + 1)
    bool G_bound_holds = false;
    double lhs = 0.0;                  // ½∫χ|j − G|²
    double excess = 0.0;               // lhs − (1 + β)W
    double rhs_without_constant = 0.0; // n(‖χ‖∞ + ‖∇χ‖∞) + n′ log n′ + 1
    double implied_C_beta = 0.0;
};

nlohmann::json to_json(const VerifyReport& report);

/// Main inequality on Λ = config ∩ Û with j = synthetic_j(config, background) and χ
/// the standard cutoff of U.
VerifyReport check_theorem_main(const PointConfig& config, const BackgroundMeasure& background, const Region& U,
                                 const TheoremOptions& options = {});

struct CorollaryOptions {
    double h = 1.0 / 16.0;
    double energy_tol = 1e-3;
    std::optional<double> W;           // reuse a known W(j, χ)
};

struct CorollaryRecord {
    double p = 0.0;
    double C_p = 0.0;
    std::size_t n = 0;
    std::size_t n_prime = 0;
    double area = 0.0;
    double W = 0.0;
    double lp = 0.0;                   // ‖√χ j‖_{L^p(U)}
    double quasi = 0.0;
    double norm = 0.0;                 // ‖√χ j‖_{2,∞}
    double chain_lhs = 0.0;            // lp / (C_p |U|^{1/p − 1/2})
    bool chain_holds = false;
    double rhs_without_constant = 0.0; // (W + n(‖χ‖∞ + ‖∇χ‖∞) + n′ log n′)^{1/2}
    double implied_C = 0.0;            // norm / rhs_without_constant
    double corollary_bound = 0.0;      // C_p |U|^{1/p−1/2} rhs_without_constant
    double baseline_bound = 0.0;       // ((|U| + C_p)^{1−p/2}(W + n(log n + 1)‖χ‖∞ + n‖∇χ‖∞)^{p/2})^{1/p}
};

nlohmann::json to_json(const CorollaryRecord& record);

/// Refuses p ≥ 1.95.
CorollaryRecord check_corollary(const PointConfig& config, const BackgroundMeasure& background, const Region& U,
                                double p, const CorollaryOptions& options = {});

struct CircleCheck {
    double radius = 0.0;
    std::size_t d_B = 0;
    double int_j2 = 0.0;
    double int_jG2 = 0.0;
    double margin = 0.0;               // ∫|j|² − ∫|j−G|² − 2πd_B/r_B + 2πM
};

struct AnnulusBoundRecord {
    Ball ball;
    std::size_t n_B = 0;
    double r = 0.0;                    // total radius of the collection
    double eta = 0.0;
    double M = 0.0;
    double energy = 0.0;               // ½∫_{B∖∪B̄(p,η)} |j|²
    double defect = 0.0;               // ½∫_{B∖∪B̄(p,η)} |j − G|²
    double log_term = 0.0;             // π n_B (log(r/(nη)) − M r)
    double margin = 0.0;               // energy − log_term − defect
    bool holds = false;
    std::vector<CircleCheck> circles;
    bool circles_hold = false;
};

nlohmann::json to_json(const AnnulusBoundRecord& record);

/// Ball-level lower bound and its circle version on concentric circles of
/// every annulus inside the ball. `trace` must start at n·η. `tol` applies to the
/// annulus integrals that decide `holds`; the defect (which cancels from the
/// margin) is integrated to max(tol, 1e-2).
AnnulusBoundRecord check_annulus_bounds(const GrowthTrace& trace, const AnalyticField& j, double eta,
                                        std::size_t ball_index, const BackgroundMeasure& background,
                                        double tol = 1e-7);

struct AnnularEnergy {
    Alpha alpha;
    std::size_t n_alpha = 0;
    double energy = 0.0;               // ∫_{C_α} |j|²
};

/// C_α = {x : |x − x_α| ∈ T_α}, T_α ⊂ (0, 3/4) avoiding the kept balls.
std::vector<AnnularEnergy> annular_energies(const LocalizedConstruction& lc, const AnalyticField& j, double tol = 1e-6);

struct ScalingRow {
    std::size_t n = 0;
    std::size_t n_prime = 0;
    double lp = 0.0;
    double W = 0.0;
    double corollary_bound = 0.0;
    double baseline_bound = 0.0;
    double baseline_ratio = 0.0;
    double n_prime_log_over_n = 0.0;
};

struct ScalingReport {
    std::string lattice;
    double p = 0.0;
    double slope = 0.0;
    double baseline_slope = 0.0;
    std::vector<ScalingRow> rows;
};

nlohmann::json to_json(const ScalingReport& report);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Lattice patches ("hex": shells with n = 1 + 3s(s+1); "square": (2s+1)² blocks)
/// at density 1/(2π), U = B(0, √(2n)), lebesgue background.
ScalingReport scaling_study(const std::string& lattice, double p, const std::vector<std::size_t>& n_values,
                            const CorollaryOptions& options = {});

/// Covering centers in use, U, and kept balls (drawn at a visible minimum size).
void write_construction_svg(std::ostream& out, const LocalizedConstruction& lc, const PointConfig& lambda);

} // namespace vlab
