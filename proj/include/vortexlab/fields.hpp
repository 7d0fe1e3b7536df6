#pragma once

#include "vortexlab/annuli.hpp"
#include "vortexlab/core.hpp"
#include "vortexlab/geometry.hpp"

#include <iosfwd>
#include <vector>

namespace vlab {

// Orientation: the unit tangent of the circle ∂B(c, R) at x is
// τ = (x − c)^⊥/R, so the unit vortex has circulation +2π. The background
// terms below carry the sign that makes ∮ j·τ = 2π#(Λ∩B) − m(B).

/// Unit vortex (x − p)^⊥/|x − p|².
Point2 vortex_at(const Point2& x, const Point2& p);

/// −x^⊥/2 for lebesgue, (−sign(x₂)/2, 0) for line, 0 for zero.
Point2 background_at(const Point2& x, BackgroundKind kind);

enum class TermKind { vortex, background, annulus, ball, lattice, chain };

enum class LatticeKind { square, hex };

struct FieldTerm {
    TermKind kind = TermKind::vortex;
    Point2 center;          // pole, annulus/ball center, lattice origin or chain offset
    double inner = 0.0;     // annulus inner radius
    double outer = 0.0;     // annulus outer radius, ball radius, lattice spacing or chain period
    Point2 period;          // lattice: second period vector (the first is (outer, 0))
    BackgroundKind background = BackgroundKind::zero;
    double weight = 1.0;
};

/// |f|² = singular / |x − p|² + regular near a unit vortex at p.
struct SingularSplit {
    double singular = 1.0;
    double regular = 0.0;
};

/// Finite sum of primitive terms, each exactly evaluable.
class AnalyticField {
public:
    AnalyticField& add_vortex(const Point2& p, double weight = 1.0);
    AnalyticField& add_background(BackgroundKind kind, double weight = 1.0);
    /// χ_A(x)(x − c)^⊥/|x − c|².
    AnalyticField& add_annulus(const Annulus& a, double weight = 1.0);
    /// χ_{B̄(p,η)}(x)(x − p)^⊥/|x − p|².
    AnalyticField& add_ball(const Ball& b, double weight = 1.0);
    AnalyticField& add_field(const AnalyticField& other, double weight = 1.0);
    /// Unit vortices on the lattice through `origin` at density 1/(2π) plus the
    /// Lebesgue background, summed exactly as a doubly periodic field (theta functions).
    AnalyticField& add_neutral_lattice(LatticeKind kind, const Point2& origin = {});
    /// Vortices at offsets + kL e₁ (k ∈ ℤ, symmetric summation) with L = 2π·#offsets,
    /// plus the line background; offsets must lie on the x₁-axis.
    AnalyticField& add_neutral_chain(const std::vector<double>& offsets);

    const std::vector<FieldTerm>& terms() const { return terms_; }
    /// Centers of vortex and ball terms (deduplicated, insertion order); periodic
    /// terms are not listed (see poles_in).
    const std::vector<Point2>& poles() const { return poles_; }
    bool has_line_background() const;
    bool periodic() const;
    /// Every pole in the box, periodic images included.
    std::vector<Point2> poles_in(const Box& box) const;
    bool empty() const { return terms_.empty(); }

    /// Throws at a declared pole.
    Point2 operator()(const Point2& x) const;
    double magnitude(const Point2& x) const { return norm((*this)(x)); }

    /// The field minus the unit vortex at p (explicit, lattice or chain image).
    Point2 remainder(const Point2& x, const Point2& p) const;
    /// Requires a unit vortex at p.
    SingularSplit split(const Point2& x, const Point2& p) const;

    bool has_unit_vortex_at(const Point2& p) const;

    /// Keeps the terms that can be nonzero on B (global terms are kept).
    AnalyticField restricted_to(const Ball& b) const;

private:
    void add_pole(const Point2& p);

    std::vector<FieldTerm> terms_;
    std::vector<Point2> poles_;
};

double lattice_spacing(LatticeKind kind);

/// j = Σ_p (x − p)^⊥/|x − p|² + background term; curl j = 2πν − m, div j = 0.
AnalyticField synthetic_j(const PointConfig& config, const BackgroundMeasure& background);

/// G = Σ_A χ_A (x − c_A)^⊥/|x − c_A|² + Σ_p χ_{B̄(p,η)} (x − p)^⊥/|x − p|², with p over the
/// trace's initial centers. Requires 0 < η < min{η₀, r/n} and η ≤ r₀/n.
AnalyticField make_G(const GrowthTrace& trace, const AnnuliCollection& annuli, double eta);

/// ∮ f·τ over ∂B(center, radius). Trapezoid rule; when a line background
/// crosses the circle the arcs between crossings get composite Gauss rules.
double circulation(const AnalyticField& field, const Point2& center, double radius, std::size_t quad_points = 4096);

/// 2π#(Λ∩B) − m(B) for the open disc B(center, radius).
double expected_circulation(const PointConfig& config, const BackgroundMeasure& background, const Point2& center,
                            double radius);

/// CSV columns x,y,f1,f2,norm on an nx × ny node grid over `box` (NaN at poles).
void write_field_csv(std::ostream& out, const AnalyticField& field, const Box& box, std::size_t nx, std::size_t ny);

} // namespace vlab
