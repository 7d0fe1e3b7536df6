#include "vortexlab/lorentz.hpp"

#include "vortexlab/quadrature.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace vlab {

SampledField::SampledField(std::vector<SamplePatch> patches) : patches_(std::move(patches)) { rebuild(); }

void SampledField::add_patch(SamplePatch patch) {
    patches_.push_back(std::move(patch));
    rebuild();
}

void SampledField::add_samples(const std::vector<WeightedSample>& samples) {
    samples_.insert(samples_.end(), samples.begin(), samples.end());
    rebuild();
}

void SampledField::rebuild() {
    sorted_.clear();
    CompensatedSum m;
    for (const auto& p : patches_) {
        if (!(p.h > 0.0) || p.values.size() != p.nx * p.ny) throw Error("sample patch has inconsistent shape");
        const double w = p.h * p.h;
        for (double v : p.values) {
            if (std::isnan(v)) continue;
            if (!std::isfinite(v) || v < 0.0) throw Error("sampled magnitudes must be finite and non-negative");
            sorted_.push_back({v, w});
            m.add(w);
        }
    }
    for (const auto& smp : samples_) {
        if (!std::isfinite(smp.value) || smp.value < 0.0 || !(smp.weight >= 0.0)) {
            throw Error("weighted samples need finite non-negative values and weights");
        }
        sorted_.push_back({smp.value, smp.weight});
        m.add(smp.weight);
    }
    std::stable_sort(sorted_.begin(), sorted_.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    measure_ = m.value();
}

SampledField SampledField::scaled(double a) const {
    if (!(a >= 0.0)) throw Error("scale factor must be non-negative");
    auto copy = patches_;
    for (auto& p : copy) {
        for (auto& v : p.values) v *= a;
    }
    SampledField out(std::move(copy));
    auto loose = samples_;
    for (auto& smp : loose) smp.value *= a;
    out.add_samples(loose);
    return out;
}

namespace {

bool near_pole(const Point2& x, const std::vector<Point2>& poles, double r) {
    for (const auto& p : poles) {
        if (distance(x, p) <= r) return true;
    }
    return false;
}

double safe_eval(const std::function<double(const Point2&)>& f, const Point2& x) {
    try {
        return f(x);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
}

double cell_value(const std::function<double(const Point2&)>& f, const Box& cell, SampleRule rule,
                  const std::vector<Point2>& poles) {
    const double h = cell.width();
    const Point2 c = (cell.lo + cell.hi) * 0.5;
    switch (rule) {
    case SampleRule::center: {
        Point2 x = c;
        if (near_pole(x, poles, 1e-12 * h)) x += Point2{h / 3.0, h / 3.0};
        return f(x);
    }
    case SampleRule::cell_min: {
        double m = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 2; ++i) {
            for (int k = 0; k <= 2; ++k) {
                m = std::min(m, safe_eval(f, {cell.lo.x + 0.5 * h * i, cell.lo.y + 0.5 * h * k}));
            }
        }
        return m;
    }
    case SampleRule::cell_mean: {
        if (near_pole(c, poles, h)) {
            // The cell integral is O(h); fields with jumps near the pole (G) would
            // otherwise refine along every annulus circle crossing the cell.
            CubatureOptions opt;
            opt.abs_tol = 1e-5 * h;
            opt.max_depth = 24;
            opt.max_cells = 50000;
            return adaptive_cubature(f, cell, opt).value / (h * h);
        }
        const double g = 0.5 / std::sqrt(3.0);
        double s = 0.0;
        for (double dx : {-g, g}) {
            for (double dy : {-g, g}) s += f({c.x + dx * h, c.y + dy * h});
        }
        return 0.25 * s;
    }
    }
    return 0.0;
}

} // namespace

SamplePatch sample_patch(const std::function<double(const Point2&)>& f, const Box& box, double h, SampleRule rule,
                         const std::function<bool(const Point2&)>& inside, const std::vector<Point2>& poles) {
    if (!(h > 0.0)) throw Error("sample spacing must be positive");
    SamplePatch p;
    p.origin = box.lo;
    p.h = h;
    p.nx = static_cast<std::size_t>(std::ceil(box.width() / h - 1e-9));
    p.ny = static_cast<std::size_t>(std::ceil(box.height() / h - 1e-9));
    if (p.nx == 0 || p.ny == 0) throw Error("sample box is empty");
    p.values.assign(p.nx * p.ny, std::nan(""));
    parallel_for(p.ny, [&](std::size_t k) {
        for (std::size_t i = 0; i < p.nx; ++i) {
            const Point2 c = p.cell_center(i, k);
            if (inside && !inside(c)) continue;
            const Box cell{{c.x - 0.5 * h, c.y - 0.5 * h}, {c.x + 0.5 * h, c.y + 0.5 * h}};
            p.values[k * p.nx + i] = std::abs(cell_value(f, cell, rule, poles));
        }
    });
    return p;
}

SampledField sample_field(const std::function<double(const Point2&)>& f, const Box& box, double h, SampleRule rule,
                          const std::function<bool(const Point2&)>& inside, const std::vector<Point2>& poles) {
    return SampledField({sample_patch(f, box, h, rule, inside, poles)});
}

double distribution_function(const SampledField& field, double t) {
    if (t < 0.0) throw Error("distribution_function: t must be non-negative");
    CompensatedSum s;
    for (const auto& [v, w] : field.sorted()) {
        if (!(v > t)) break;
        s.add(w);
    }
    return s.value();
}

double quasi_norm(const SampledField& field) {
    // sup_t t²λ(t) is approached as t ↑ v, where λ = |{|f| ≥ v}|.
    const auto& s = field.sorted();
    double best = 0.0;
    CompensatedSum mass;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mass.add(s[i].second);
        if (i + 1 < s.size() && s[i + 1].first == s[i].first) continue;
        best = std::max(best, s[i].first * s[i].first * mass.value());
    }
    return std::sqrt(best);
}

double lorentz_norm(const SampledField& field) {
    // F(w) = S(w)/√w with S the integral of the decreasing rearrangement; on a
    // constant segment of value v the interior critical point is w* = S₀/v − W₀.
    const auto& s = field.sorted();
    double best = 0.0;
    CompensatedSum W;
    CompensatedSum S;
    for (const auto& [v, w] : s) {
        if (v <= 0.0) break;
        const double W0 = W.value();
        const double S0 = S.value();
        const double ws = S0 / v - W0;
        if (ws > 0.0 && ws < w) {
            const double wt = W0 + ws;
            best = std::max(best, (S0 + v * ws) / std::sqrt(wt));
        }
        W.add(w);
        S.add(v * w);
        best = std::max(best, S.value() / std::sqrt(W.value()));
    }
    return best;
}

double lp_norm(const SampledField& field, double p) {
    if (!(p > 0.0)) throw Error("lp_norm: p must be positive");
    CompensatedSum s;
    for (const auto& [v, w] : field.sorted()) s.add(w * std::pow(v, p));
    return std::pow(s.value(), 1.0 / p);
}

double lp_norm(const SampledField& field, double p, const std::function<double(const Point2&)>& weight) {
    if (!(p > 0.0)) throw Error("lp_norm: p must be positive");
    CompensatedSum s;
    for (const auto& patch : field.patches()) {
        for (std::size_t k = 0; k < patch.ny; ++k) {
            for (std::size_t i = 0; i < patch.nx; ++i) {
                const double v = patch.values[k * patch.nx + i];
                if (std::isnan(v)) continue;
                const double chi = weight(patch.cell_center(i, k));
                s.add(patch.h * patch.h * std::pow(std::sqrt(std::max(chi, 0.0)) * v, p));
            }
        }
    }
    for (const auto& smp : field.samples()) {
        s.add(smp.weight * std::pow(std::sqrt(std::max(weight(smp.at), 0.0)) * smp.value, p));
    }
    return std::pow(s.value(), 1.0 / p);
}

std::vector<WeightedSample> sample_polar(const std::function<double(const Point2&)>& f, const Point2& center,
                                         double inner, double outer, std::size_t radial_cells,
                                         std::size_t angular_cells) {
    if (!(inner >= 0.0) || !(outer > inner)) throw Error("sample_polar: need 0 <= inner < outer");
    if (radial_cells == 0 || angular_cells == 0) throw Error("sample_polar: need at least one cell");
    std::vector<double> radii;
    if (inner > 0.0) {
        for (std::size_t k = 0; k <= radial_cells; ++k) {
            radii.push_back(inner * std::pow(outer / inner, static_cast<double>(k) / static_cast<double>(radial_cells)));
        }
    } else {
        const double core = outer * 1e-6;
        radii.push_back(0.0);
        for (std::size_t k = 0; k <= radial_cells; ++k) {
            radii.push_back(core * std::pow(1e6, static_cast<double>(k) / static_cast<double>(radial_cells)));
        }
    }
    radii.back() = outer;
    const double dth = 2.0 * M_PI / static_cast<double>(angular_cells);
    const auto& g = gauss_legendre(2);
    std::vector<WeightedSample> out;
    out.reserve((radii.size() - 1) * angular_cells);
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
        const double r0 = radii[k];
        const double r1 = radii[k + 1];
        const double area_ring = 0.5 * (r1 * r1 - r0 * r0) * dth;
        for (std::size_t a = 0; a < angular_cells; ++a) {
            const double t0 = dth * static_cast<double>(a);
            // area-weighted 2×2 Gauss average over the polar cell
            double num = 0.0;
            double den = 0.0;
            for (std::size_t i = 0; i < 2; ++i) {
                const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * g.nodes[i];
                for (std::size_t l = 0; l < 2; ++l) {
                    const double th = t0 + 0.5 * dth * (1.0 + g.nodes[l]);
                    const double w = g.weights[i] * g.weights[l] * r;
                    num += w * f(center + Point2{std::cos(th), std::sin(th)} * r);
                    den += w;
                }
            }
            const double mid = 0.5 * (r0 + r1);
            const double th = t0 + 0.5 * dth;
            out.push_back({center + Point2{std::cos(th), std::sin(th)} * mid, num / den, area_ring});
        }
    }
    return out;
}

double embedding_constant(double p) {
    if (!(p >= 1.0) || !(p < 2.0)) throw Error("embedding constant needs 1 <= p < 2");
    return std::pow(2.0 / (2.0 - p), 1.0 / p);
}

EmbeddingCheck embedding_check(const SampledField& field, double p, double domain_area) {
    if (!(p >= 1.0) || !(p < 2.0)) throw Error("embedding_check needs 1 <= p < 2");
    if (!(domain_area > 0.0)) throw Error("embedding_check needs a positive domain area");
    EmbeddingCheck out;
    out.C_p = embedding_constant(p);
    out.lhs = lp_norm(field, p);
    out.rhs = out.C_p * std::pow(domain_area, 1.0 / p - 0.5) * quasi_norm(field);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
    return out;
}

void write_distribution_csv(std::ostream& out, const SampledField& field) {
    out << "t,lambda\n" << std::setprecision(17);
    out << 0.0 << ',' << distribution_function(field, 0.0) << '\n';
    const auto& s = field.sorted();
    CompensatedSum mass;
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < s.size(); ++i) {
        mass.add(s[i].second);
        if (i + 1 < s.size() && s[i + 1].first == s[i].first) continue;
        if (s[i].first > 0.0) rows.push_back({s[i].first, mass.value()});
    }
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) out << it->first << ',' << it->second << '\n';
}

} // namespace vlab
