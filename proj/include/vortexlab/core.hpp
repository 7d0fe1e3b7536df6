#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vlab {

/// Thrown for invalid inputs and violated preconditions throughout the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 operator/(double s) const { return {x / s, y / s}; }
    Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
    Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
    bool operator==(const Point2& o) const = default;
};

inline Point2 operator*(double s, const Point2& p) { return p * s; }
inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double norm_sq(const Point2& a) { return dot(a, a); }
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }
inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// x^⊥ = (x₂, −x₁). With this convention the unit vortex x^⊥/|x|² has
// circulation +2π along circles traversed in the direction of x^⊥.
inline Point2 perp(const Point2& v) { return {v.y, -v.x}; }

/// Closed ball B̄(center, radius).
struct Ball {
    Point2 center;
    double radius = 0.0;

    bool contains(const Point2& p) const { return distance(p, center) <= radius; }
    Ball scaled(double factor) const { return {center, radius * factor}; }
};

// Throws unless the radius is positive and the center finite.
void validate(const Ball& b);

struct Box {
    Point2 lo;
    Point2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
    bool contains(const Point2& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    Box inflated(double d) const { return {{lo.x - d, lo.y - d}, {hi.x + d, hi.y + d}}; }
};

/// The finite point set Λ. Points are validated to be finite and pairwise distinct.
class PointConfig {
public:
    explicit PointConfig(std::vector<Point2> points);

    const std::vector<Point2>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Point2& operator[](std::size_t i) const { return points_[i]; }

    /// Half the minimum pairwise distance; +∞ for a single point.
    double eta0() const { return eta0_; }

private:
    std::vector<Point2> points_;
    double eta0_ = std::numeric_limits<double>::infinity();
};

/// Minimum pairwise distance 2η₀.
double separation(const PointConfig& config);

enum class BackgroundKind { zero, lebesgue, line };

std::string_view to_string(BackgroundKind kind);
BackgroundKind background_from_string(std::string_view name);

/// Neutralizing background m. `line` is the length measure on the x₁-axis.
struct BackgroundMeasure {
    BackgroundKind kind = BackgroundKind::zero;

    /// M in m(B(x,r)) ≤ π M r for 0 < r < 1.
    double density_bound() const;
    /// Exact m(B̄(center, r)).
    double disc_mass(const Point2& center, double r) const;
};

/// Bounded open region U: a ball or an axis-aligned rectangle.
class Region {
public:
    enum class Kind { ball, rectangle };

    static Region ball(Point2 center, double radius);
    static Region rectangle(Point2 lo, Point2 hi);

    Kind kind() const { return kind_; }
    Point2 center() const;
    double radius() const { return radius_; }
    const Box& rect() const { return rect_; }

    /// d(x, Uᶜ) for x ∈ U, −d(x, U) otherwise.
    double signed_depth(const Point2& x) const;
    bool contains(const Point2& x) const { return signed_depth(x) > 0.0; }
    /// Û = {x | d(x, U) < 1}.
    bool hat_contains(const Point2& x) const { return signed_depth(x) > -1.0; }

    double area() const;
    double inradius() const;
    Box bounding_box() const;
    Box hat_bounding_box() const { return bounding_box().inflated(1.0); }

    Region translated(const Point2& shift) const;

private:
    Region() = default;

    Kind kind_ = Kind::ball;
    Box rect_{};
    double radius_ = 0.0;
};

enum class CutoffProfile {
    linear,    // ramp s ↦ s on [0,1]
    smooth     // C¹ smoothstep 3s² − 2s³ (Lipschitz factor 3/2)
};

/// χ(x) = a · φ(min(1, d(x, Uᶜ)/w)) inside U and 0 outside.
class Cutoff {
public:
    Cutoff(Region region, double amplitude, double ramp_width, CutoffProfile profile);

    double operator()(const Point2& x) const;

    double sup_norm() const { return amplitude_; }
    /// Stands in for ‖∇χ‖_∞.
    double lipschitz() const;
    const Region& support() const { return region_; }
    double amplitude() const { return amplitude_; }
    double ramp_width() const { return ramp_; }
    CutoffProfile profile() const { return profile_; }

    /// Depth at which the ramp reaches full amplitude.
    double plateau_depth() const { return ramp_; }

    Cutoff scaled(double factor) const;
    Cutoff translated(const Point2& shift) const;

private:
    Region region_;
    double amplitude_;
    double ramp_;
    CutoffProfile profile_;
};

/// Standard cutoff: 1 where d(x, Uᶜ) ≥ 1, 0 outside U, ramp in between.
Cutoff make_standard_cutoff(const Region& region, double amplitude = 1.0,
                            CutoffProfile profile = CutoffProfile::linear);

} // namespace vlab
