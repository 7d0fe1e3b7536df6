#include "vortexlab/annuli.hpp"
#include "vortexlab/configs.hpp"
#include "vortexlab/energy.hpp"
#include "vortexlab/fields.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/lorentz.hpp"
#include "vortexlab/quadrature.hpp"
#include "vortexlab/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace vlab;
using nlohmann::json;

namespace {

constexpr int kInequalityFailure = 2;
constexpr int kInputError = 1;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open input file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error("'" + path + "' is not valid JSON: " + e.what());
    }
}

ConfigInput read_config(const std::string& path) { return parse_config_json(read_json(path)); }

Region require_region(const ConfigInput& in) {
    if (!in.region) throw Error("field 'region' is missing (needed for this command)");
    return *in.region;
}

// Writes to `path`, or stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

GrowthTrace read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trace file '" + path + "'");
    return read_trace_csv(in);
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error("option " + flag + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw Error("option " + flag + " needs a comma-separated list");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"vortexlab: ball constructions, renormalized energy and Lorentz estimates for point vortices"};
    app.require_subcommand(1);
    // --h is the grid spacing, so help is long-form only
    app.set_help_flag("--help", "print this help and exit");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: VLAB_THREADS or 1)")->check(CLI::PositiveNumber);

    // grow
    auto* grow_cmd = app.add_subcommand("grow", "grow balls from the configuration to a total radius");
    std::string points_path;
    double target = 0.0;
    double eta = 0.0;
    std::string out_path;
    grow_cmd->add_option("--points", points_path, "configuration JSON")->required();
    grow_cmd->add_option("--target", target, "target total radius")->required();
    grow_cmd->add_option("--eta", eta, "initial radius per point (default min(eta0/4, target/(4n)))");
    grow_cmd->add_option("--out", out_path, "trace CSV (default stdout)");

    // annuli
    auto* annuli_cmd = app.add_subcommand("annuli", "growth annuli of a trace");
    std::string trace_path;
    std::string svg_path;
    annuli_cmd->add_option("--trace", trace_path, "trace CSV")->required();
    annuli_cmd->add_option("--out", out_path, "annuli CSV (default stdout)");
    annuli_cmd->add_option("--svg", svg_path, "SVG rendering");

    // mcr
    auto* mcr_cmd = app.add_subcommand("mcr", "minimal concentric rearrangement number of a trace's annuli");
    mcr_cmd->add_option("--trace", trace_path, "trace CSV")->required();
    mcr_cmd->add_option("--out", out_path, "JSON report (default stdout)");

    // energy
    auto* energy_cmd = app.add_subcommand("energy", "renormalized energy W(j, chi) on the configuration's region");
    double tol = 1e-4;
    energy_cmd->add_option("--points", points_path, "configuration JSON with region")->required();
    energy_cmd->add_option("--tol", tol, "extrapolation tolerance")->check(CLI::PositiveNumber);
    energy_cmd->add_option("--out", out_path, "JSON report (default stdout)");

    // lorentz
    auto* lorentz_cmd = app.add_subcommand("lorentz", "Lorentz quantities of sqrt(chi)|j| sampled on the region");
    double h = 1.0 / 16.0;
    double p = 1.5;
    std::string dist_path;
    lorentz_cmd->add_option("--points", points_path, "configuration JSON with region")->required();
    lorentz_cmd->add_option("--h", h, "grid spacing")->check(CLI::PositiveNumber);
    lorentz_cmd->add_option("--p", p, "exponent for the L^p embedding, 1 <= p < 2")->check(CLI::Range(1.0, 1.999));
    lorentz_cmd->add_option("--dist", dist_path, "distribution function CSV");
    lorentz_cmd->add_option("--out", out_path, "JSON report (default stdout)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "main inequality, G estimate and L^p corollary");
    double beta = 1.0;
    verify_cmd->add_option("--points", points_path, "configuration JSON with region")->required();
    verify_cmd->add_option("--beta", beta, "beta > 0")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--p", p, "exponent for the corollary, 1 <= p < 1.95")->check(CLI::Range(1.0, 1.9499));
    verify_cmd->add_option("--tol", tol, "energy tolerance")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--h", h, "grid spacing for the corollary")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--svg", svg_path, "SVG of the covering and kept balls");
    verify_cmd->add_option("--out", out_path, "JSON report (default stdout)");

    // scaling
    auto* scaling_cmd = app.add_subcommand("scaling", "L^p norm of sqrt(chi) j against n on lattice patches");
    std::string lattice = "hex";
    std::string n_list = "7,19,37,61,91,127,169";
    std::string csv_path;
    scaling_cmd->add_option("--lattice", lattice, "hex or square")->check(CLI::IsMember({"hex", "square"}));
    scaling_cmd->add_option("--p", p, "exponent, 1 <= p <= 1.9")->check(CLI::Range(1.0, 1.9));
    scaling_cmd->add_option("--n", n_list, "comma-separated point counts");
    scaling_cmd->add_option("--h", h, "grid spacing")->check(CLI::PositiveNumber);
    scaling_cmd->add_option("--csv", csv_path, "scaling table CSV");
    scaling_cmd->add_option("--out", out_path, "JSON report (default stdout)");

    // compare-lattices
    auto* compare_cmd = app.add_subcommand("compare-lattices", "energy per area (length) of lattices and perturbations");
    std::string R_list = "6,9,12";
    std::size_t shifts = 6;
    std::size_t perturbations = 20;
    std::uint64_t seed = 0;
    double amplitude = 0.5;
    compare_cmd->add_option("--R", R_list, "comma-separated disc radii");
    compare_cmd->add_option("--shifts", shifts, "translations per cell direction")->check(CLI::PositiveNumber);
    compare_cmd->add_option("--perturbations", perturbations, "random 1D perturbations");
    compare_cmd->add_option("--amplitude", amplitude, "perturbation half-width in units of pi")
        ->check(CLI::Range(0.0, 1.0));
    compare_cmd->add_option("--seed", seed, "random seed")->required();
    compare_cmd->add_option("--tol", tol, "energy tolerance")->check(CLI::PositiveNumber);
    compare_cmd->add_option("--out", out_path, "JSON report (default stdout)");

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "write a configuration JSON");
    std::string kind = "hex";
    double radius = 6.0;
    double intensity = 1.0 / (2.0 * M_PI);
    double min_sep = 0.0;
    gen_cmd->add_option("--kind", kind, "hex, square, hex-shells, line or poisson")
        ->check(CLI::IsMember({"hex", "square", "hex-shells", "line", "poisson"}));
    gen_cmd->add_option("--radius", radius, "disc radius, shell count or half length")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--intensity", intensity, "Poisson intensity")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--min-sep", min_sep, "Poisson minimum separation");
    gen_cmd->add_option("--seed", seed, "random seed (poisson)");
    gen_cmd->add_option("--out", out_path, "configuration JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kInputError;
    }

    try {
        if (threads > 0) set_thread_count(threads);

        if (*grow_cmd) {
            const auto in = read_config(points_path);
            const double n = static_cast<double>(in.config.size());
            if (eta <= 0.0) eta = std::min(0.25 * in.config.eta0(), 0.25 * target / n);
            const auto trace = grow(initial_collection(in.config, eta), target);
            std::ostringstream out;
            write_trace_csv(out, trace);
            emit(out_path, out.str());
            return 0;
        }

        if (*annuli_cmd) {
            const auto trace = read_trace(trace_path);
            const auto annuli = annuli_from_trace(trace);
            const auto part = mcr_exact(annuli);
            std::ostringstream out;
            write_annuli_csv(out, annuli, part);
            emit(out_path, out.str());
            if (!svg_path.empty()) {
                std::ostringstream svg;
                write_annuli_svg(svg, annuli, part);
                emit(svg_path, svg.str());
            }
            return 0;
        }

        if (*mcr_cmd) {
            const auto trace = read_trace(trace_path);
            const auto annuli = annuli_from_trace(trace);
            const auto exact = mcr_exact(annuli);
            const auto built = mcr_construction_partition(trace, annuli);
            const std::size_t n = trace.leaf_ids().size();
            const bool holds = exact.count() <= n && built.count() <= n && is_valid_partition(annuli, built);
            emit(out_path, dump({{"annuli", annuli.size()},
                                 {"K_exact", exact.count()},
                                 {"K_construction", built.count()},
                                 {"n", n},
                                 {"holds", holds}}));
            return holds ? 0 : kInequalityFailure;
        }

        if (*energy_cmd) {
            const auto in = read_config(points_path);
            const Region U = require_region(in);
            const auto j = synthetic_j(in.config, in.background);
            const auto rep = renormalized_energy(j, make_standard_cutoff(U), in.config, tol);
            json doc = to_json(rep);
            doc["region"] = region_to_json(U);
            doc["n"] = in.config.size();
            emit(out_path, dump(doc));
            return 0;
        }

        if (*lorentz_cmd) {
            const auto in = read_config(points_path);
            const Region U = require_region(in);
            const auto j = synthetic_j(in.config, in.background);
            const Cutoff chi = make_standard_cutoff(U);
            const auto field =
                sample_field([&](const Point2& x) { return std::sqrt(chi(x)) * j.magnitude(x); }, U.bounding_box(), h,
                             SampleRule::cell_mean, [&](const Point2& x) { return U.contains(x); }, j.poles());
            const double q = quasi_norm(field);
            const double nrm = lorentz_norm(field);
            const auto emb = embedding_check(field, p, field.measure());
            const bool equiv = q <= nrm * (1.0 + 1e-12) && nrm <= 2.0 * q * (1.0 + 1e-12);
            emit(out_path, dump({{"h", h},
                                 {"measure", field.measure()},
                                 {"quasi_norm", q},
                                 {"norm", nrm},
                                 {"norm_equivalence_holds", equiv},
                                 {"p", p},
                                 {"lp", emb.lhs},
                                 {"embedding_rhs", emb.rhs},
                                 {"C_p", emb.C_p},
                                 {"embedding_holds", emb.holds}}));
            if (!dist_path.empty()) {
                std::ostringstream d;
                write_distribution_csv(d, field);
                emit(dist_path, d.str());
            }
            return equiv && emb.holds ? 0 : kInequalityFailure;
        }

        if (*verify_cmd) {
            const auto in = read_config(points_path);
            const Region U = require_region(in);
            TheoremOptions topt;
            topt.beta = beta;
            topt.energy_tol = tol;
            const auto rep = check_theorem_main(in.config, in.background, U, topt);
            CorollaryOptions copt;
            copt.h = h;
            copt.W = rep.W;
            const auto cor = check_corollary(in.config, in.background, U, p, copt);
            if (!svg_path.empty()) {
                const auto lambda = points_in_hat(in.config, U);
                std::ostringstream svg;
                write_construction_svg(svg, localized_construction(lambda, U), lambda);
                emit(svg_path, svg.str());
            }
            const bool holds = rep.G_bound_holds && cor.chain_holds;
            emit(out_path, dump({{"theorem", to_json(rep)}, {"corollary", to_json(cor)}, {"holds", holds}}));
            return holds ? 0 : kInequalityFailure;
        }

        if (*scaling_cmd) {
            std::vector<std::size_t> ns;
            for (double v : parse_list(n_list, "--n")) {
                if (v < 1.0 || v != std::floor(v)) throw Error("option --n: counts must be positive integers");
                ns.push_back(static_cast<std::size_t>(v));
            }
            CorollaryOptions opt;
            opt.h = h;
            const auto rep = scaling_study(lattice, p, ns, opt);
            emit(out_path, dump(to_json(rep)));
            if (!csv_path.empty()) {
                std::ostringstream csv;
                csv << std::setprecision(12)
                    << "n,n_prime,lp,W,corollary_bound,baseline_bound,baseline_ratio,n_prime_log_over_n\n";
                for (const auto& r : rep.rows) {
                    csv << r.n << ',' << r.n_prime << ',' << r.lp << ',' << r.W << ',' << r.corollary_bound << ','
                        << r.baseline_bound << ',' << r.baseline_ratio << ',' << r.n_prime_log_over_n << '\n';
                }
                emit(csv_path, csv.str());
            }
            return 0;
        }

        if (*compare_cmd) {
            bool holds = true;
            json planar = json::array();
            for (double R : parse_list(R_list, "--R")) {
                const auto hex = lattice_energy_density(LatticeKind::hex, R, shifts, tol);
                const auto sq = lattice_energy_density(LatticeKind::square, R, shifts, tol);
                const bool ok = hex.density <= sq.density;
                holds = holds && ok;
                planar.push_back({{"R", R},
                                  {"hex", hex.density},
                                  {"square", sq.density},
                                  {"hex_range", {hex.min, hex.max}},
                                  {"square_range", {sq.min, sq.max}},
                                  {"hex_unshifted", hex.at_origin},
                                  {"square_unshifted", sq.at_origin},
                                  {"hex_le_square", ok}});
            }
            const std::size_t m = 4;
            const double half_length = 2.0 * M_PI * static_cast<double>(m);
            std::vector<double> lat;
            for (std::size_t i = 0; i < m; ++i) lat.push_back(2.0 * M_PI * static_cast<double>(i));
            const auto base = chain_energy_density(lat, half_length, 16, tol);
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> u(-amplitude * M_PI, amplitude * M_PI);
            json perturbed = json::array();
            std::size_t beaten = 0;
            for (std::size_t r = 0; r < perturbations; ++r) {
                std::vector<double> o;
                for (double c : lat) o.push_back(c + u(rng));
                const auto d = chain_energy_density(o, half_length, 16, tol);
                if (d.density <= base.density) ++beaten;
                perturbed.push_back({{"offsets", o}, {"density", d.density}});
            }
            holds = holds && beaten == 0;
            emit(out_path, dump({{"planar", planar},
                                 {"chain", {{"lattice", base.density},
                                            {"perturbed", perturbed},
                                            {"perturbations_not_above_lattice", beaten}}},
                                 {"holds", holds}}));
            return holds ? 0 : kInequalityFailure;
        }

        if (*gen_cmd) {
            PointConfig cfg({{0.0, 0.0}});
            BackgroundMeasure bg{BackgroundKind::lebesgue};
            Region U = Region::ball({0.0, 0.0}, radius);
            if (kind == "hex") {
                cfg = hex_lattice_in_ball(radius);
            } else if (kind == "square") {
                cfg = square_lattice_in_ball(radius);
            } else if (kind == "hex-shells") {
                cfg = hex_shells(static_cast<int>(radius));
                U = Region::ball({0.0, 0.0}, std::sqrt(2.0 * static_cast<double>(cfg.size())));
            } else if (kind == "line") {
                cfg = line_lattice(radius + 2.0 * M_PI);
                bg.kind = BackgroundKind::line;
                U = Region::rectangle({-radius, -3.0}, {radius, 3.0});
            } else {
                cfg = poisson_in_region(U, intensity, seed, min_sep);
            }
            emit(out_path, dump(config_to_json(cfg, bg, U)));
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return 0;
}
