#include "vortexlab/fields.hpp"

#include "vortexlab/quadrature.hpp"

#include <algorithm>
#include <complex>
#include <iomanip>
#include <ostream>

namespace vlab {

Point2 vortex_at(const Point2& x, const Point2& p) {
    const Point2 d = x - p;
    const double r2 = norm_sq(d);
    if (r2 == 0.0) throw Error("field evaluated at a pole");
    return perp(d) / r2;
}

Point2 background_at(const Point2& x, BackgroundKind kind) {
    switch (kind) {
    case BackgroundKind::zero: return {};
    case BackgroundKind::lebesgue: return perp(x) * -0.5;
    case BackgroundKind::line: {
        const double s = x.y > 0.0 ? 1.0 : (x.y < 0.0 ? -1.0 : 0.0);
        return {-0.5 * s, 0.0};
    }
    }
    return {};
}

void AnalyticField::add_pole(const Point2& p) {
    if (std::find(poles_.begin(), poles_.end(), p) == poles_.end()) poles_.push_back(p);
}

AnalyticField& AnalyticField::add_vortex(const Point2& p, double weight) {
    if (!is_finite(p)) throw Error("vortex pole must be finite");
    FieldTerm t;
    t.kind = TermKind::vortex;
    t.center = p;
    t.weight = weight;
    terms_.push_back(t);
    add_pole(p);
    return *this;
}

AnalyticField& AnalyticField::add_background(BackgroundKind kind, double weight) {
    if (kind == BackgroundKind::zero) return *this;
    FieldTerm t;
    t.kind = TermKind::background;
    t.background = kind;
    t.weight = weight;
    terms_.push_back(t);
    return *this;
}

AnalyticField& AnalyticField::add_annulus(const Annulus& a, double weight) {
    if (!(a.inner > 0.0) || !(a.outer > a.inner)) throw Error("annulus needs 0 < inner < outer");
    FieldTerm t;
    t.kind = TermKind::annulus;
    t.center = a.center;
    t.inner = a.inner;
    t.outer = a.outer;
    t.weight = weight;
    terms_.push_back(t);
    return *this;
}

AnalyticField& AnalyticField::add_ball(const Ball& b, double weight) {
    validate(b);
    FieldTerm t;
    t.kind = TermKind::ball;
    t.center = b.center;
    t.outer = b.radius;
    t.weight = weight;
    terms_.push_back(t);
    add_pole(b.center);
    return *this;
}

AnalyticField& AnalyticField::add_field(const AnalyticField& other, double weight) {
    for (auto t : other.terms_) {
        t.weight *= weight;
        terms_.push_back(t);
    }
    for (const auto& p : other.poles_) add_pole(p);
    return *this;
}

double lattice_spacing(LatticeKind kind) {
    // cell area 2π
    return kind == LatticeKind::square ? std::sqrt(2.0 * M_PI) : std::sqrt(4.0 * M_PI / std::sqrt(3.0));
}

AnalyticField& AnalyticField::add_neutral_lattice(LatticeKind kind, const Point2& origin) {
    if (!is_finite(origin)) throw Error("lattice origin must be finite");
    FieldTerm t;
    t.kind = TermKind::lattice;
    t.center = origin;
    t.outer = lattice_spacing(kind);
    t.period = kind == LatticeKind::square ? Point2{0.0, 1.0} : Point2{0.5, 0.5 * std::sqrt(3.0)};
    terms_.push_back(t);
    return *this;
}

AnalyticField& AnalyticField::add_neutral_chain(const std::vector<double>& offsets) {
    if (offsets.empty()) throw Error("chain needs at least one offset");
    const double L = 2.0 * M_PI * static_cast<double>(offsets.size());
    for (double c : offsets) {
        if (!std::isfinite(c)) throw Error("chain offsets must be finite");
        FieldTerm t;
        t.kind = TermKind::chain;
        t.center = {c, 0.0};
        t.outer = L;
        terms_.push_back(t);
    }
    add_background(BackgroundKind::line);
    return *this;
}

bool AnalyticField::has_line_background() const {
    return std::any_of(terms_.begin(), terms_.end(), [](const FieldTerm& t) {
        return t.kind == TermKind::background && t.background == BackgroundKind::line;
    });
}

bool AnalyticField::periodic() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const FieldTerm& t) { return t.kind == TermKind::lattice || t.kind == TermKind::chain; });
}

namespace {

using cd = std::complex<double>;

// The field −i·conj(G) for a complex pole sum G; G = 1/(z − p) gives V_p.
Point2 field_of(cd G) { return {-G.imag(), -G.real()}; }

// θ₁'(v)/θ₁(v) for nome exp(iπτ); |Im v| ≤ π Im τ/2 keeps the series tame.
cd theta1_log_derivative(cd v, cd tau) {
    const cd ipt = cd(0.0, M_PI) * tau;
    cd num = 0.0;
    cd den = 0.0;
    for (int n = 0; n < 12; ++n) {
        const double h = n + 0.5;
        const double k = 2.0 * n + 1.0;
        const cd q = std::exp(ipt * (h * h)) * (n % 2 == 0 ? 1.0 : -1.0);
        num += q * k * std::cos(k * v);
        den += q * std::sin(k * v);
    }
    return num / den;
}

// Representative of w modulo ℤ + τℤ in the cell around 0, and the shifts removed.
cd reduce_to_cell(cd w, cd tau, long& n1, long& n2) {
    n2 = std::lround(w.imag() / tau.imag());
    w -= static_cast<double>(n2) * tau;
    n1 = std::lround(w.real());
    w -= static_cast<double>(n1);
    return w;
}

// Σ 1/(w − λ) over ℤ + τℤ made periodic: π θ₁'/θ₁(πw) + (π/A)(w − w̄), A = Im τ.
// With drop_pole the central 1/w is removed before any cancellation happens.
cd periodic_pole_sum(cd w, cd tau, bool drop_pole) {
    long n1 = 0;
    long n2 = 0;
    const cd wr = reduce_to_cell(w, tau, n1, n2);
    if (wr == 0.0) {
        if (!drop_pole || n1 != 0 || n2 != 0) throw Error("field evaluated at a pole");
        return 0.0;
    }
    cd g = M_PI * theta1_log_derivative(M_PI * wr, tau) + (M_PI / tau.imag()) * (wr - std::conj(wr));
    if (drop_pole) g -= 1.0 / w;
    return g;
}

// Σ_k 1/(z − kL) (symmetric) = (π/L) cot(πz/L), without overflow off the axis.
cd chain_pole_sum(cd z, double L, bool drop_pole) {
    const cd u = M_PI * z / L;
    const double shift = std::round(u.real() / M_PI);
    const cd ur = u - shift * M_PI;
    if (ur == 0.0) {
        if (!drop_pole || shift != 0.0) throw Error("field evaluated at a pole");
        return 0.0;
    }
    cd cot;
    if (ur.imag() > 0.0) {
        const cd e = std::exp(cd(0.0, 2.0) * ur);
        cot = cd(0.0, 1.0) * (e + 1.0) / (e - 1.0);
    } else {
        const cd e = std::exp(cd(0.0, -2.0) * ur);
        cot = cd(0.0, 1.0) * (1.0 + e) / (1.0 - e);
    }
    cd g = (M_PI / L) * cot;
    if (drop_pole) g -= 1.0 / z;
    return g;
}

cd complex_of(const Point2& p) { return {p.x, p.y}; }

bool is_lattice_image(const FieldTerm& t, const Point2& p) {
    const cd tau = complex_of(t.period);
    const cd w = complex_of(p - t.center) / t.outer;
    const double n2 = w.imag() / tau.imag();
    const double n1 = w.real() - n2 * tau.real();
    return std::abs(n2 - std::round(n2)) < 1e-9 && std::abs(n1 - std::round(n1)) < 1e-9;
}

bool is_chain_image(const FieldTerm& t, const Point2& p) {
    if (p.y != t.center.y) return false;
    const double k = (p.x - t.center.x) / t.outer;
    return std::abs(k - std::round(k)) < 1e-9;
}

// With `pole` set, a unit vortex of the term sitting there is left out.
Point2 term_value(const FieldTerm& t, const Point2& x, const Point2* pole = nullptr) {
    switch (t.kind) {
    case TermKind::vortex:
        if (pole && t.center == *pole && t.weight == 1.0) return {};
        return vortex_at(x, t.center) * t.weight;
    case TermKind::background: return background_at(x, t.background) * t.weight;
    case TermKind::annulus: {
        const double d = distance(x, t.center);
        if (d > t.inner && d <= t.outer) return vortex_at(x, t.center) * t.weight;
        return {};
    }
    case TermKind::ball: {
        const double d = distance(x, t.center);
        if (d <= t.outer) return vortex_at(x, t.center) * t.weight;
        return {};
    }
    case TermKind::lattice: {
        const bool drop = pole && t.weight == 1.0 && is_lattice_image(t, *pole);
        const Point2 base = drop ? *pole : t.center;
        const cd G = periodic_pole_sum(complex_of(x - base) / t.outer, complex_of(t.period), drop) / t.outer;
        return field_of(G) * t.weight;
    }
    case TermKind::chain: {
        const bool drop = pole && t.weight == 1.0 && is_chain_image(t, *pole);
        const Point2 base = drop ? *pole : t.center;
        return field_of(chain_pole_sum(complex_of(x - base), t.outer, drop)) * t.weight;
    }
    }
    return {};
}

} // namespace

std::vector<Point2> AnalyticField::poles_in(const Box& box) const {
    std::vector<Point2> out;
    auto push = [&](const Point2& p) {
        if (box.contains(p) && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    };
    for (const auto& t : terms_) {
        if (t.kind == TermKind::vortex || t.kind == TermKind::ball) push(t.center);
        if (t.kind == TermKind::lattice) {
            const Point2 e1{t.outer, 0.0};
            const Point2 e2 = t.period * t.outer;
            const long k0 = static_cast<long>(std::floor((box.lo.y - t.center.y) / e2.y)) - 1;
            const long k1 = static_cast<long>(std::ceil((box.hi.y - t.center.y) / e2.y)) + 1;
            for (long k = k0; k <= k1; ++k) {
                const Point2 row = t.center + e2 * static_cast<double>(k);
                const long i0 = static_cast<long>(std::floor((box.lo.x - row.x) / e1.x)) - 1;
                const long i1 = static_cast<long>(std::ceil((box.hi.x - row.x) / e1.x)) + 1;
                for (long i = i0; i <= i1; ++i) push(row + e1 * static_cast<double>(i));
            }
        }
        if (t.kind == TermKind::chain) {
            const long i0 = static_cast<long>(std::floor((box.lo.x - t.center.x) / t.outer)) - 1;
            const long i1 = static_cast<long>(std::ceil((box.hi.x - t.center.x) / t.outer)) + 1;
            for (long i = i0; i <= i1; ++i) push({t.center.x + t.outer * static_cast<double>(i), t.center.y});
        }
    }
    return out;
}

bool AnalyticField::has_unit_vortex_at(const Point2& p) const {
    return std::any_of(terms_.begin(), terms_.end(), [&](const FieldTerm& t) {
        if (t.weight != 1.0) return false;
        if (t.kind == TermKind::vortex) return t.center == p;
        if (t.kind == TermKind::lattice) return is_lattice_image(t, p);
        if (t.kind == TermKind::chain) return is_chain_image(t, p);
        return false;
    });
}


Point2 AnalyticField::operator()(const Point2& x) const {
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& t : terms_) {
        const Point2 v = term_value(t, x);
        sx += v.x;
        sy += v.y;
    }
    return {sx, sy};
}

Point2 AnalyticField::remainder(const Point2& x, const Point2& p) const {
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& t : terms_) {
        const Point2 v = term_value(t, x, &p);
        sx += v.x;
        sy += v.y;
    }
    return {sx, sy};
}

SingularSplit AnalyticField::split(const Point2& x, const Point2& p) const {
    if (!has_unit_vortex_at(p)) throw Error("singularity split needs a unit vortex at the given pole");
    const Point2 v = vortex_at(x, p);
    const Point2 rem = remainder(x, p);
    return {1.0, 2.0 * dot(v, rem) + norm_sq(rem)};
}

AnalyticField AnalyticField::restricted_to(const Ball& b) const {
    AnalyticField out;
    for (const auto& t : terms_) {
        bool keep = true;
        const double d = distance(t.center, b.center);
        if (t.kind == TermKind::annulus) keep = d - t.outer < b.radius && d + b.radius > t.inner;
        if (t.kind == TermKind::ball) keep = d < t.outer + b.radius;
        if (!keep) continue;
        out.terms_.push_back(t);
        if (t.kind == TermKind::vortex || t.kind == TermKind::ball) out.add_pole(t.center);
    }
    return out;
}

AnalyticField synthetic_j(const PointConfig& config, const BackgroundMeasure& background) {
    AnalyticField j;
    for (const auto& p : config.points()) j.add_vortex(p);
    j.add_background(background.kind);
    return j;
}

AnalyticField make_G(const GrowthTrace& trace, const AnnuliCollection& annuli, double eta) {
    std::vector<Point2> centers;
    for (int id : trace.leaf_ids()) centers.push_back(trace.node(id).birth_ball.center);
    const PointConfig cfg(centers);
    const double n = static_cast<double>(centers.size());
    if (!(eta > 0.0) || !(eta < cfg.eta0()) || !(eta < trace.end_time() / n)) {
        throw Error("make_G: eta must satisfy 0 < eta < min{eta0, r/n}");
    }
    if (eta > trace.start_time() / n * (1.0 + 1e-12)) {
        throw Error("make_G: eta balls must lie inside the initial balls (eta <= r0/n)");
    }
    AnalyticField g;
    for (const auto& a : annuli.annuli) g.add_annulus(a);
    for (const auto& c : centers) g.add_ball({c, eta});
    return g;
}

double circulation(const AnalyticField& field, const Point2& center, double radius, std::size_t quad_points) {
    if (!(radius > 0.0)) throw Error("circulation: radius must be positive");
    if (quad_points < 8) throw Error("circulation: need at least 8 quadrature points");
    for (const auto& p : field.poles()) {
        if (std::abs(distance(p, center) - radius) < radius * 1e-6) {
            throw Error("circulation: circle passes too close to a pole");
        }
    }
    auto integrand = [&](double theta) {
        const Point2 u{std::cos(theta), std::sin(theta)};
        const Point2 x = center + u * radius;
        // τ ds = u^⊥ R dθ
        return dot(field(x), perp(u)) * radius;
    };

    std::vector<double> cuts;
    if (field.has_line_background() && std::abs(center.y) < radius) {
        const double s = std::asin(-center.y / radius);
        cuts = {s, M_PI - s};
    }
    if (cuts.empty()) {
        CompensatedSum sum;
        const double h = 2.0 * M_PI / static_cast<double>(quad_points);
        for (std::size_t i = 0; i < quad_points; ++i) sum.add(integrand(h * static_cast<double>(i)));
        return h * sum.value();
    }
    // Two arcs; 16-node Gauss panels, total nodes ≈ quad_points.
    const double a0 = cuts[0];
    const double a1 = cuts[1];
    const double a2 = cuts[0] + 2.0 * M_PI;
    CompensatedSum sum;
    for (auto [lo, hi] : {std::pair{a0, a1}, std::pair{a1, a2}}) {
        const double frac = (hi - lo) / (2.0 * M_PI);
        const std::size_t panels =
            std::max<std::size_t>(1, static_cast<std::size_t>(frac * static_cast<double>(quad_points) / 16.0));
        for (std::size_t k = 0; k < panels; ++k) {
            const double pa = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(panels);
            const double pb = lo + (hi - lo) * static_cast<double>(k + 1) / static_cast<double>(panels);
            sum.add(integrate_gl(integrand, pa, pb, 16));
        }
    }
    return sum.value();
}

double expected_circulation(const PointConfig& config, const BackgroundMeasure& background, const Point2& center,
                            double radius) {
    std::size_t inside = 0;
    for (const auto& p : config.points()) {
        if (distance(p, center) < radius) ++inside;
    }
    return 2.0 * M_PI * static_cast<double>(inside) - background.disc_mass(center, radius);
}

void write_field_csv(std::ostream& out, const AnalyticField& field, const Box& box, std::size_t nx, std::size_t ny) {
    if (nx < 2 || ny < 2) throw Error("field csv needs at least 2x2 nodes");
    out << "x,y,f1,f2,norm\n" << std::setprecision(12);
    for (std::size_t k = 0; k < ny; ++k) {
        for (std::size_t i = 0; i < nx; ++i) {
            const Point2 x{box.lo.x + box.width() * static_cast<double>(i) / static_cast<double>(nx - 1),
                           box.lo.y + box.height() * static_cast<double>(k) / static_cast<double>(ny - 1)};
            Point2 v{std::nan(""), std::nan("")};
            try {
                v = field(x);
            } catch (const Error&) {
            }
            out << x.x << ',' << x.y << ',' << v.x << ',' << v.y << ',' << norm(v) << '\n';
        }
    }
}

} // namespace vlab
