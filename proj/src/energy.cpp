#include "vortexlab/energy.hpp"

#include "vortexlab/quadrature.hpp"

#include <algorithm>
#include <sstream>

namespace vlab {

nlohmann::json to_json(const EnergyReport& report) {
    return {{"W_estimate", report.W_estimate},
            {"eta_sequence", report.eta_sequence},
            {"I_values", report.I_values},
            {"extrapolants", report.extrapolants},
            {"extrapolation_residual", report.extrapolation_residual},
            {"quadrature_tolerance", report.quadrature_tolerance},
            {"quadrature_error", report.quadrature_error},
            {"active_poles", report.active_poles}};
}

double pole_bump(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    const double u = 2.0 * (s - 0.5);
    return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

std::vector<double> pole_disc_radii(const std::vector<Point2>& poles) {
    std::vector<double> out(poles.size(), 0.5);
    for (std::size_t i = 0; i < poles.size(); ++i) {
        for (std::size_t k = 0; k < poles.size(); ++k) {
            if (i != k) out[i] = std::min(out[i], 0.45 * distance(poles[i], poles[k]));
        }
    }
    return out;
}

namespace {

struct ActivePole {
    Point2 p;
    double delta = 0.0;
    double chi_p = 0.0;
};

// ∫_{1/2}^{1} bump(s)/s ds
double bump_log_integral() {
    static const double v = integrate_adaptive([](double s) { return pole_bump(s) / s; }, 0.5, 1.0, 1e-15);
    return v;
}

// Poles of j relevant on `window`: every explicit vortex plus periodic images in the window.
std::vector<Point2> unit_vortex_poles(const AnalyticField& j, const Box& window) {
    std::vector<Point2> out;
    for (const auto& t : j.terms()) {
        if (t.kind == TermKind::vortex && t.weight == 1.0) {
            if (std::find(out.begin(), out.end(), t.center) != out.end()) {
                throw Error("renormalized_energy: repeated vortex pole");
            }
            out.push_back(t.center);
        } else if ((t.kind == TermKind::lattice || t.kind == TermKind::chain) && t.weight == 1.0) {
            continue;
        } else if (t.kind != TermKind::background) {
            throw Error("renormalized_energy: j must be a sum of unit vortices and a background term");
        }
    }
    if (j.periodic()) {
        for (const auto& p : j.poles_in(window)) {
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
    }
    return out;
}

} // namespace

EnergyReport renormalized_energy(const AnalyticField& j, const Cutoff& chi, const PointConfig& config, double tol) {
    if (!(tol > 0.0)) throw Error("renormalized_energy: tol must be positive");
    const auto poles = unit_vortex_poles(j, chi.support().hat_bounding_box());
    for (const auto& p : config.points()) {
        if (std::find(poles.begin(), poles.end(), p) == poles.end()) {
            throw Error("renormalized_energy: configuration point is not a vortex of j");
        }
    }
    for (const auto& p : poles) {
        if (chi(p) > 0.0 && std::find(config.points().begin(), config.points().end(), p) == config.points().end()) {
            throw Error("renormalized_energy: j has a vortex in supp(chi) that is not in the configuration");
        }
    }

    const auto radii = pole_disc_radii(poles);
    const Region& region = chi.support();
    std::vector<ActivePole> active;
    for (std::size_t i = 0; i < poles.size(); ++i) {
        if (region.signed_depth(poles[i]) > -radii[i]) active.push_back({poles[i], radii[i], chi(poles[i])});
    }

    EnergyReport rep;
    rep.active_poles = active.size();
    rep.quadrature_tolerance = 0.1 * tol;
    const bool line = j.has_line_background();

    // Outer part: ½χ|j|²(1 − Σψ_p) over the bounding box of supp χ.
    auto outer_f = [&](const Point2& x) {
        const double c = chi(x);
        if (c == 0.0) return 0.0;
        double psi = 0.0;
        for (const auto& a : active) {
            const double d = distance(x, a.p);
            if (d < a.delta) {
                psi += pole_bump(d / a.delta);
            }
        }
        if (psi >= 1.0) return 0.0;
        return 0.5 * c * norm_sq(j(x)) * (1.0 - psi);
    };
    CubatureOptions opt;
    opt.abs_tol = 0.5 * rep.quadrature_tolerance;
    opt.max_cell = 0.5;
    opt.max_depth = 16;
    if (line) opt.y_cuts.push_back(0.0);
    opt.must_split = [&](const Box& c) {
        const double size = std::max(c.width(), c.height());
        for (const auto& a : active) {
            if (size <= 0.25 * a.delta) continue;
            const double dx = std::max({c.lo.x - a.p.x, 0.0, a.p.x - c.hi.x});
            const double dy = std::max({c.lo.y - a.p.y, 0.0, a.p.y - c.hi.y});
            if (dx * dx + dy * dy < a.delta * a.delta) return true;
        }
        return false;
    };
    const Box box = region.bounding_box();
    const auto outer = adaptive_cubature(outer_f, box, opt);
    rep.quadrature_error += outer.error;

    // Closed-form part of each disc: πχ(p)(log(δ/2) + ∫_{δ/2}^{δ} ψ/r dr).
    CompensatedSum constant;
    constant.add(outer.value);
    const double L = bump_log_integral();
    for (const auto& a : active) constant.add(M_PI * a.chi_p * (std::log(0.5 * a.delta) + L));

    // Polar remainder ∫_η^δ∫ ½ψ[(χ − χ(p))/r + χ(2V·R + |R|²) r] dθ dr.
    auto polar_piece = [&](const ActivePole& a, double r_lo, double r_hi, double ptol, double& err) {
        auto g = [&](const Point2& rt) {
            const double r = rt.x;
            const Point2 u{std::cos(rt.y), std::sin(rt.y)};
            const Point2 x = a.p + u * r;
            const double c = chi(x);
            const Point2 rem = j.remainder(x, a.p);
            const double psi = pole_bump(r / a.delta);
            // V·R r = u^⊥ · R
            return 0.5 * psi * ((c - a.chi_p) / r + c * (2.0 * dot(perp(u), rem) + norm_sq(rem) * r));
        };
        CubatureOptions po;
        po.abs_tol = ptol;
        po.max_depth = 14;
        po.y_cuts = {M_PI};
        const auto res = adaptive_cubature(g, {{r_lo, 0.0}, {r_hi, 2.0 * M_PI}}, po);
        err += res.error;
        return res.value;
    };

    const double min_delta =
        active.empty() ? 0.5 : std::min_element(active.begin(), active.end(), [](auto& l, auto& r) {
                                   return l.delta < r.delta;
                               })->delta;
    double eta = 0.25 * min_delta;
    const double ptol = 0.5 * rep.quadrature_tolerance / static_cast<double>(std::max<std::size_t>(1, active.size()));

    std::vector<double> polar(active.size(), 0.0);
    std::vector<double> perr(active.size(), 0.0);
    parallel_for(active.size(), [&](std::size_t i) {
        polar[i] = polar_piece(active[i], eta, active[i].delta, ptol, perr[i]);
    });

    std::vector<double> r1;
    const std::size_t max_levels = 12;
    for (std::size_t k = 0; k < max_levels; ++k) {
        if (k > 0) {
            const double prev = eta;
            eta *= 0.5;
            parallel_for(active.size(), [&](std::size_t i) {
                polar[i] += polar_piece(active[i], eta, prev, 0.25 * ptol, perr[i]);
            });
        }
        CompensatedSum total;
        total.add(constant.value());
        for (double v : polar) total.add(v);
        rep.eta_sequence.push_back(eta);
        rep.I_values.push_back(total.value());
        const auto& I = rep.I_values;
        if (k >= 1) r1.push_back(2.0 * I[k] - I[k - 1]);
        if (k >= 2) {
            const std::size_t m = r1.size();
            rep.extrapolants.push_back((4.0 * r1[m - 1] - r1[m - 2]) / 3.0);
        }
        if (rep.extrapolants.size() >= 2) {
            const std::size_t m = rep.extrapolants.size();
            rep.extrapolation_residual = std::abs(rep.extrapolants[m - 1] - rep.extrapolants[m - 2]);
            if (rep.extrapolation_residual < tol) {
                rep.W_estimate = rep.extrapolants.back();
                rep.quadrature_error += compensated_total(perr);
                return rep;
            }
        }
    }
    std::ostringstream msg;
    msg << "renormalized_energy: extrapolation did not converge after " << max_levels
        << " levels (last residual " << rep.extrapolation_residual << ", tol " << tol << ")";
    throw Error(msg.str());
}

std::vector<DensitySample> energy_density(const std::function<PointConfig(double)>& family,
                                          const BackgroundMeasure& background, const std::vector<double>& R_values,
                                          double tol, const std::function<Region(double)>& region,
                                          const std::function<double(double)>& measure) {
    std::vector<DensitySample> out;
    for (double R : R_values) {
        const PointConfig cfg = family(R);
        const Region U = region(R);
        const Cutoff chi = make_standard_cutoff(U);
        const auto j = synthetic_j(cfg, background);
        const auto rep = renormalized_energy(j, chi, cfg, tol);
        DensitySample s;
        s.R = R;
        s.W = rep.W_estimate;
        s.measure = measure ? measure(R) : U.area();
        s.density = s.W / s.measure;
        s.error = (rep.extrapolation_residual + rep.quadrature_error) / s.measure;
        s.n = cfg.size();
        out.push_back(s);
    }
    return out;
}

namespace {

double placed_density(const AnalyticField& j, const Region& U, double measure, double tol) {
    const Cutoff chi = make_standard_cutoff(U);
    const PointConfig cfg(j.poles_in(U.hat_bounding_box()));
    return renormalized_energy(j, chi, cfg, tol).W_estimate / measure;
}

} // namespace

ShiftAveragedDensity lattice_energy_density(LatticeKind kind, double R, std::size_t k, double tol) {
    if (!(R > 1.0)) throw Error("lattice_energy_density: R must exceed the ramp width 1");
    if (k < 1) throw Error("lattice_energy_density: need at least one shift");
    const double a = lattice_spacing(kind);
    const Point2 e1{a, 0.0};
    const Point2 e2 = kind == LatticeKind::square ? Point2{0.0, a} : Point2{0.5 * a, 0.5 * std::sqrt(3.0) * a};
    const Region U = Region::ball({0.0, 0.0}, R);
    ShiftAveragedDensity out;
    out.R = R;
    out.measure = U.area();
    out.shifts = k * k;
    // W is invariant under s ↦ −s (rotation by π fixes the lattice and the disc),
    // and the midpoint grid pairs index m with k² − 1 − m.
    const std::size_t half = (k * k + 1) / 2;
    std::vector<double> values(half);
    parallel_for(half, [&](std::size_t m) {
        const double fi = (static_cast<double>(m / k) + 0.5) / static_cast<double>(k);
        const double fl = (static_cast<double>(m % k) + 0.5) / static_cast<double>(k);
        AnalyticField j;
        j.add_neutral_lattice(kind, e1 * fi + e2 * fl);
        values[m] = placed_density(j, U, out.measure, tol);
    });
    CompensatedSum sum;
    for (std::size_t m = 0; m < half; ++m) {
        const bool self_paired = 2 * m + 1 == k * k;
        sum.add(self_paired ? values[m] : 2.0 * values[m]);
    }
    out.density = sum.value() / static_cast<double>(k * k);
    out.min = *std::min_element(values.begin(), values.end());
    out.max = *std::max_element(values.begin(), values.end());
    AnalyticField j0;
    j0.add_neutral_lattice(kind);
    out.at_origin = placed_density(j0, U, out.measure, tol);
    return out;
}

ShiftAveragedDensity chain_energy_density(const std::vector<double>& offsets, double half_length, std::size_t k,
                                          double tol) {
    if (!(half_length > 1.0)) throw Error("chain_energy_density: half length must exceed the ramp width 1");
    if (k < 1) throw Error("chain_energy_density: need at least one shift");
    const double L = 2.0 * M_PI * static_cast<double>(offsets.size());
    const Region U = Region::rectangle({-half_length, -3.0}, {half_length, 3.0});
    ShiftAveragedDensity out;
    out.R = half_length;
    out.measure = 2.0 * half_length;
    out.shifts = k;
    std::vector<double> values(k);
    parallel_for(k, [&](std::size_t i) {
        const double sh = L * (static_cast<double>(i) + 0.5) / static_cast<double>(k);
        std::vector<double> o;
        for (double c : offsets) o.push_back(c + sh);
        AnalyticField j;
        j.add_neutral_chain(o);
        values[i] = placed_density(j, U, out.measure, tol);
    });
    out.density = compensated_total(values) / static_cast<double>(k);
    out.min = *std::min_element(values.begin(), values.end());
    out.max = *std::max_element(values.begin(), values.end());
    AnalyticField j0;
    j0.add_neutral_chain(offsets);
    out.at_origin = placed_density(j0, U, out.measure, tol);
    return out;
}

} // namespace vlab
