#include "vortexlab/configs.hpp"

#include <random>

namespace vlab {

double hex_spacing(double density) {
    if (!(density > 0.0)) throw Error("lattice density must be positive");
    // cell area (√3/2) a² = 1/density
    return std::sqrt(2.0 / (std::sqrt(3.0) * density));
}

double square_spacing(double density) {
    if (!(density > 0.0)) throw Error("lattice density must be positive");
    return 1.0 / std::sqrt(density);
}

namespace {

PointConfig lattice_in_ball(double R, Point2 e1, Point2 e2) {
    if (!(R > 0.0)) throw Error("lattice radius must be positive");
    const double step = std::min(norm(e1), norm(e2));
    const long m = static_cast<long>(std::ceil(2.0 * R / step)) + 2;
    std::vector<Point2> pts;
    for (long k = -m; k <= m; ++k) {
        for (long i = -m; i <= m; ++i) {
            const Point2 p = e1 * static_cast<double>(i) + e2 * static_cast<double>(k);
            if (norm(p) < R) pts.push_back(p);
        }
    }
    return PointConfig(std::move(pts));
}

} // namespace

PointConfig hex_lattice_in_ball(double R, double density) {
    const double a = hex_spacing(density);
    return lattice_in_ball(R, {a, 0.0}, {0.5 * a, 0.5 * std::sqrt(3.0) * a});
}

PointConfig square_lattice_in_ball(double R, double density) {
    const double a = square_spacing(density);
    return lattice_in_ball(R, {a, 0.0}, {0.0, a});
}

PointConfig hex_shells(int shells, double density) {
    if (shells < 0) throw Error("hex_shells: shell count must be non-negative");
    const double a = hex_spacing(density);
    const Point2 e1{a, 0.0};
    const Point2 e2{0.5 * a, 0.5 * std::sqrt(3.0) * a};
    std::vector<Point2> pts;
    // Axial coordinates (i, k) with hex distance max(|i|, |k|, |i + k|) ≤ s.
    for (int k = -shells; k <= shells; ++k) {
        for (int i = -shells; i <= shells; ++i) {
            if (std::abs(i + k) > shells) continue;
            pts.push_back(e1 * static_cast<double>(i) + e2 * static_cast<double>(k));
        }
    }
    return PointConfig(std::move(pts));
}

int hex_shells_for_count(std::size_t n) {
    for (int s = 0; s < 10000; ++s) {
        const std::size_t c = 1 + 3 * static_cast<std::size_t>(s) * static_cast<std::size_t>(s + 1);
        if (c == n) return s;
        if (c > n) break;
    }
    throw Error("hex shell counts are 1 + 3s(s+1); got " + std::to_string(n));
}

PointConfig line_lattice(double half_length, double spacing) {
    if (!(half_length > 0.0) || !(spacing > 0.0)) throw Error("line lattice needs positive length and spacing");
    std::vector<Point2> pts;
    const long m = static_cast<long>(std::floor(half_length / spacing)) + 1;
    for (long k = -m; k <= m; ++k) {
        const double x = spacing * static_cast<double>(k);
        if (std::abs(x) < half_length) pts.push_back({x, 0.0});
    }
    return PointConfig(std::move(pts));
}

namespace {

Point2 uniform_point(const Region& region, std::mt19937_64& rng) {
    const Box b = region.bounding_box();
    std::uniform_real_distribution<double> ux(b.lo.x, b.hi.x);
    std::uniform_real_distribution<double> uy(b.lo.y, b.hi.y);
    while (true) {
        const Point2 p{ux(rng), uy(rng)};
        if (region.contains(p)) return p;
    }
}

bool separated(const std::vector<Point2>& pts, const Point2& p, double sep) {
    for (const auto& q : pts) {
        if (distance(p, q) < sep || p == q) return false;
    }
    return true;
}

} // namespace

PointConfig poisson_in_region(const Region& region, double intensity, std::uint64_t seed, double min_separation) {
    if (!(intensity > 0.0)) throw Error("Poisson intensity must be positive");
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long> count(intensity * region.area());
    const long n = std::max<long>(1, count(rng));
    std::vector<Point2> pts;
    for (long i = 0; i < n; ++i) {
        const Point2 p = uniform_point(region, rng);
        if (separated(pts, p, min_separation)) pts.push_back(p);
    }
    return PointConfig(std::move(pts));
}

PointConfig uniform_in_region(const Region& region, std::size_t n, std::uint64_t seed, double min_separation) {
    if (n == 0) throw Error("uniform_in_region needs n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<Point2> pts;
    std::size_t attempts = 0;
    while (pts.size() < n) {
        if (++attempts > 1000 * n + 1000) throw Error("uniform_in_region: separation too large for the region");
        const Point2 p = uniform_point(region, rng);
        if (separated(pts, p, min_separation)) pts.push_back(p);
    }
    return PointConfig(std::move(pts));
}

namespace {

Point2 parse_point(const nlohmann::json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw Error("field '" + field + "' must be a pair of numbers [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

Region parse_region_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
        throw Error("field 'region.kind' must be \"ball\" or \"rectangle\"");
    }
    const auto kind = doc["kind"].get<std::string>();
    if (kind == "ball") {
        if (!doc.contains("center")) throw Error("field 'region.center' is missing");
        if (!doc.contains("radius") || !doc["radius"].is_number()) {
            throw Error("field 'region.radius' must be a number");
        }
        return Region::ball(parse_point(doc["center"], "region.center"), doc["radius"].get<double>());
    }
    if (kind == "rectangle") {
        if (!doc.contains("lo") || !doc.contains("hi")) throw Error("field 'region.lo'/'region.hi' is missing");
        return Region::rectangle(parse_point(doc["lo"], "region.lo"), parse_point(doc["hi"], "region.hi"));
    }
    throw Error("field 'region.kind' must be \"ball\" or \"rectangle\" (got \"" + kind + "\")");
}

ConfigInput parse_config_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw Error("config input must be a JSON object");
    if (!doc.contains("points") || !doc["points"].is_array()) {
        throw Error("field 'points' must be an array of [x, y] pairs");
    }
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < doc["points"].size(); ++i) {
        pts.push_back(parse_point(doc["points"][i], "points[" + std::to_string(i) + "]"));
    }
    BackgroundMeasure bg;
    if (doc.contains("background")) {
        const auto& b = doc["background"];
        if (!b.is_object() || !b.contains("kind") || !b["kind"].is_string()) {
            throw Error("field 'background.kind' must be one of zero, lebesgue, line");
        }
        try {
            bg.kind = background_from_string(b["kind"].get<std::string>());
        } catch (const Error& e) {
            throw Error(std::string("field 'background.kind': ") + e.what());
        }
    }
    std::optional<Region> region;
    if (doc.contains("region")) region = parse_region_json(doc["region"]);
    try {
        return {PointConfig(std::move(pts)), bg, region};
    } catch (const Error& e) {
        throw Error(std::string("field 'points': ") + e.what());
    }
}

nlohmann::json region_to_json(const Region& region) {
    if (region.kind() == Region::Kind::ball) {
        return {{"kind", "ball"}, {"center", {region.center().x, region.center().y}}, {"radius", region.radius()}};
    }
    const Box& b = region.rect();
    return {{"kind", "rectangle"}, {"lo", {b.lo.x, b.lo.y}}, {"hi", {b.hi.x, b.hi.y}}};
}

nlohmann::json config_to_json(const PointConfig& config, const BackgroundMeasure& background,
                              const std::optional<Region>& region) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : config.points()) pts.push_back({p.x, p.y});
    nlohmann::json doc = {{"points", pts}, {"background", {{"kind", std::string(to_string(background.kind))}}}};
    if (region) doc["region"] = region_to_json(*region);
    return doc;
}

} // namespace vlab
