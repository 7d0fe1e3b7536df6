#include "vortexlab/core.hpp"

#include <algorithm>

namespace vlab {

void validate(const Ball& b) {
    if (!is_finite(b.center) || !std::isfinite(b.radius)) {
        throw Error("ball has non-finite center or radius");
    }
    if (!(b.radius > 0.0)) {
        throw Error("ball radius must be positive");
    }
}

PointConfig::PointConfig(std::vector<Point2> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw Error("point configuration must contain at least one point");
    }
    for (const auto& p : points_) {
        if (!is_finite(p)) {
            throw Error("point configuration contains a non-finite coordinate");
        }
    }
    // Sorting by x lets the pair scan stop early once the x-gap exceeds the best distance.
    std::vector<Point2> sorted = points_;
    std::sort(sorted.begin(), sorted.end(),
              [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t k = i + 1; k < sorted.size(); ++k) {
            if (sorted[k].x - sorted[i].x >= best) break;
            const double d = distance(sorted[i], sorted[k]);
            if (d == 0.0) {
                throw Error("point configuration contains duplicate points");
            }
            best = std::min(best, d);
        }
    }
    eta0_ = 0.5 * best;
}

double separation(const PointConfig& config) { return 2.0 * config.eta0(); }

std::string_view to_string(BackgroundKind kind) {
    switch (kind) {
    case BackgroundKind::zero: return "zero";
    case BackgroundKind::lebesgue: return "lebesgue";
    case BackgroundKind::line: return "line";
    }
    return "zero";
}

BackgroundKind background_from_string(std::string_view name) {
    if (name == "zero") return BackgroundKind::zero;
    if (name == "lebesgue") return BackgroundKind::lebesgue;
    if (name == "line") return BackgroundKind::line;
    throw Error("unknown background kind '" + std::string(name) + "'");
}

double BackgroundMeasure::density_bound() const {
    switch (kind) {
    case BackgroundKind::zero: return 0.0;
    case BackgroundKind::lebesgue: return 1.0;   // π r² ≤ π r for r < 1
    case BackgroundKind::line: return 2.0 / M_PI; // chord ≤ 2r
    }
    return 0.0;
}

double BackgroundMeasure::disc_mass(const Point2& center, double r) const {
    switch (kind) {
    case BackgroundKind::zero: return 0.0;
    case BackgroundKind::lebesgue: return M_PI * r * r;
    case BackgroundKind::line: {
        const double d = std::abs(center.y);
        return d < r ? 2.0 * std::sqrt(r * r - d * d) : 0.0;
    }
    }
    return 0.0;
}

Region Region::ball(Point2 center, double radius) {
    if (!is_finite(center) || !(radius > 0.0) || !std::isfinite(radius)) {
        throw Error("ball region needs a finite center and positive radius");
    }
    Region r;
    r.kind_ = Kind::ball;
    r.rect_ = {center, center};
    r.radius_ = radius;
    return r;
}

Region Region::rectangle(Point2 lo, Point2 hi) {
    if (!is_finite(lo) || !is_finite(hi) || !(hi.x > lo.x) || !(hi.y > lo.y)) {
        throw Error("rectangle region needs finite corners with lo < hi");
    }
    Region r;
    r.kind_ = Kind::rectangle;
    r.rect_ = {lo, hi};
    return r;
}

Point2 Region::center() const {
    return kind_ == Kind::ball ? rect_.lo : (rect_.lo + rect_.hi) * 0.5;
}

double Region::signed_depth(const Point2& x) const {
    if (kind_ == Kind::ball) {
        return radius_ - distance(x, rect_.lo);
    }
    const double dx_lo = x.x - rect_.lo.x;
    const double dx_hi = rect_.hi.x - x.x;
    const double dy_lo = x.y - rect_.lo.y;
    const double dy_hi = rect_.hi.y - x.y;
    const double inside = std::min(std::min(dx_lo, dx_hi), std::min(dy_lo, dy_hi));
    if (inside >= 0.0) return inside;
    const double ox = std::max(0.0, std::max(-dx_lo, -dx_hi));
    const double oy = std::max(0.0, std::max(-dy_lo, -dy_hi));
    return -std::hypot(ox, oy);
}

double Region::area() const {
    return kind_ == Kind::ball ? M_PI * radius_ * radius_ : rect_.area();
}

double Region::inradius() const {
    return kind_ == Kind::ball ? radius_ : 0.5 * std::min(rect_.width(), rect_.height());
}

Box Region::bounding_box() const {
    if (kind_ == Kind::ball) {
        const Point2 c = rect_.lo;
        return {{c.x - radius_, c.y - radius_}, {c.x + radius_, c.y + radius_}};
    }
    return rect_;
}

Region Region::translated(const Point2& shift) const {
    Region r = *this;
    r.rect_.lo += shift;
    r.rect_.hi += shift;
    return r;
}

Cutoff::Cutoff(Region region, double amplitude, double ramp_width, CutoffProfile profile)
    : region_(region), amplitude_(amplitude), ramp_(ramp_width), profile_(profile) {
    if (!(amplitude > 0.0) || !(ramp_width > 0.0)) {
        throw Error("cutoff amplitude and ramp width must be positive");
    }
}

double Cutoff::operator()(const Point2& x) const {
    const double depth = region_.signed_depth(x);
    if (depth <= 0.0) return 0.0;
    const double s = std::min(1.0, depth / ramp_);
    const double shaped = profile_ == CutoffProfile::linear ? s : s * s * (3.0 - 2.0 * s);
    return amplitude_ * shaped;
}

double Cutoff::lipschitz() const {
    const double slope = profile_ == CutoffProfile::linear ? 1.0 : 1.5;
    return amplitude_ * slope / ramp_;
}

Cutoff Cutoff::scaled(double factor) const {
    return Cutoff(region_, amplitude_ * factor, ramp_, profile_);
}

Cutoff Cutoff::translated(const Point2& shift) const {
    return Cutoff(region_.translated(shift), amplitude_, ramp_, profile_);
}

Cutoff make_standard_cutoff(const Region& region, double amplitude, CutoffProfile profile) {
    if (!(region.inradius() > 1.0)) {
        throw Error("cutoff ramp does not fit: region inradius must exceed 1");
    }
    return Cutoff(region, amplitude, 1.0, profile);
}

} // namespace vlab
