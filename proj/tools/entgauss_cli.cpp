// entgauss: capacity-achieving discrete Gaussians, certified conditional
// entropy over AWGN, and the figure-data sweeps behind them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "entgauss/channel.hpp"
#include "entgauss/constellation.hpp"
#include "entgauss/distribution.hpp"
#include "entgauss/errors.hpp"
#include "entgauss/extremal.hpp"
#include "entgauss/solver.hpp"
#include "entgauss/theta.hpp"
#include "svg_plot.hpp"

namespace {

namespace channel = entgauss::channel;
namespace extremal = entgauss::extremal;
namespace solver = entgauss::solver;
using json = nlohmann::json;

constexpr double kLn2 = std::numbers::ln2;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double to_nats(double v, const std::string& units) {
    return units == "bits" ? v * kLn2 : v;
}
double from_nats(double v, const std::string& units) {
    return units == "bits" ? v / kLn2 : v;
}

std::vector<double> parse_grid(const std::string& spec) {
    // min:max:count[:log]
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4)
        throw std::domain_error("grid must be min:max:count[:log]");
    const double lo = std::stod(parts[0]);
    const double hi = std::stod(parts[1]);
    const int count = std::stoi(parts[2]);
    const bool logspace = parts.size() == 4 && parts[3] == "log";
    if (parts.size() == 4 && parts[3] != "log" && parts[3] != "linear")
        throw std::domain_error("grid spacing must be 'log' or 'linear'");
    if (count < 2 || !(lo < hi)) throw std::domain_error("grid needs count >= 2 and min < max");
    if (logspace && !(lo > 0)) throw std::domain_error("log grid needs min > 0");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        g[static_cast<std::size_t>(i)] =
            logspace ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    return g;
}

struct FigData {
    std::vector<std::string> meta;      // metadata lines, '#'-prefixed on write
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> warnings;  // emitted as comment lines after meta
};

void write_csv(const FigData& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot open output file '" + path + "'");
    for (const auto& m : d.meta) out << "# " << m << "\n";
    for (const auto& w : d.warnings) out << "# warning: " << w << "\n";
    for (std::size_t c = 0; c < d.columns.size(); ++c)
        out << d.columns[c] << (c + 1 < d.columns.size() ? "," : "");
    out << "\n";
    for (const auto& row : d.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << fmt17(row[c]) << (c + 1 < row.size() ? "," : "");
        out << "\n";
    }
}

void write_json_fig(const FigData& d, const std::string& path) {
    json doc;
    doc["meta"] = d.meta;
    doc["warnings"] = d.warnings;
    doc["columns"] = d.columns;
    doc["rows"] = d.rows;
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot open output file '" + path + "'");
    out << doc.dump(2) << "\n";
}

std::string sibling_with_extension(const std::string& path, const std::string& ext) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ext;
    return path.substr(0, dot) + ext;
}

// csv always lands at `out`; svg/json variants sit next to it
void emit_figure(const FigData& d, const std::string& out, const std::string& format,
                 const std::string& title, const std::string& xlabel,
                 const std::string& ylabel, const std::vector<svgplot::Series>& series,
                 bool logx, bool logy) {
    if (format == "json") {
        write_json_fig(d, out);
        return;
    }
    write_csv(d, out);
    if (format == "svg")
        svgplot::write_svg(sibling_with_extension(out, ".svg"), title, xlabel, ylabel,
                           series, logx, logy);
}

void print_record(const json& j) { std::cout << j.dump(2) << "\n"; }

int run(int argc, char** argv) {
    CLI::App app{
        "Capacity-achieving input distributions of the entropy-constrained "
        "Gaussian channel, with certified H(X|Y) evaluation"};
    app.require_subcommand(1);
    // '--h' is an entropy option here, so help must not claim '-h'
    app.set_help_flag("--help", "Print help");

    if (const char* cap = std::getenv("ENTGAUSS_MAX_TERMS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end == cap || *end != '\0' || v < 1)
            throw std::domain_error("ENTGAUSS_MAX_TERMS must be a positive integer");
        entgauss::theta::set_term_cap(static_cast<int>(v));
    }

    std::string units = "bits";
    app.add_option("--units", units, "Entropy units for input/output")
        ->check(CLI::IsMember({"bits", "nats"}))
        ->capture_default_str();

    // ---- solve ----
    auto* c_solve = app.add_subcommand("solve", "Solve h = L - lambda L' for the capacity spec");
    double solve_h = 0.0, solve_tol = 1e-12;
    c_solve->add_option("--h", solve_h, "Entropy target")->required();
    c_solve->add_option("--tol", solve_tol, "Entropy residual tolerance")->capture_default_str();
    c_solve->callback([&]() {
        const auto r = solver::solve(to_nats(solve_h, units), solve_tol);
        json j;
        j["h"] = solve_h;
        j["units"] = units;
        j["h_nats"] = r.h_target;
        j["lambda_h"] = r.lambda_h;
        j["d_h"] = r.d_h;
        j["entropy_residual"] = r.entropy_residual;
        j["variance_check"] = r.variance_check;
        j["regime"] = r.below_threshold ? "below_threshold" : "above_threshold";
        print_record(j);
    });

    // ---- theta ----
    auto* c_theta = app.add_subcommand("theta", "Evaluate L_a(lambda) and derivatives");
    double th_lambda = 0.0, th_a = 0.0, th_tol = 1e-12;
    c_theta->add_option("--lambda", th_lambda, "Gibbs parameter")->required();
    c_theta->add_option("--a", th_a, "Lattice shift in [0,1)")->capture_default_str();
    c_theta->add_option("--tol", th_tol, "Absolute tolerance on L")->capture_default_str();
    c_theta->callback([&]() {
        const auto t = entgauss::theta::log_theta(th_lambda, th_a, th_tol);
        json j;
        j["lambda"] = t.lambda;
        j["shift_a"] = t.shift_a;
        j["L"] = t.L;
        j["dL"] = t.dL;
        j["d2L"] = t.d2L;
        j["truncation_terms"] = t.truncation_terms;
        j["abs_error_bound"] = t.abs_error_bound;
        print_record(j);
    });

    // ---- hxy ----
    auto* c_hxy = app.add_subcommand("hxy", "Conditional entropy H(X|Y) over AWGN");
    std::string hxy_dist;
    double hxy_snr = 0.0, hxy_tol = 1e-10;
    c_hxy->add_option("--dist", hxy_dist, "Constellation: JSON path or dgauss:h=...")->required();
    c_hxy->add_option("--snr", hxy_snr, "Signal-to-noise ratio")->required();
    c_hxy->add_option("--tol", hxy_tol, "Relative tolerance")->capture_default_str();
    c_hxy->callback([&]() {
        const auto d = entgauss::load_constellation(hxy_dist);
        const auto ev = channel::conditional_entropy(d, hxy_snr, hxy_tol);
        json j;
        j["snr"] = ev.snr;
        j["sigma"] = ev.sigma;
        j["units"] = units;
        j["H_X"] = from_nats(ev.H_X, units);
        j["h_Y"] = from_nats(ev.h_Y, units);
        j["I_XY"] = from_nats(ev.I_XY, units);
        j["H_X_given_Y"] = from_nats(ev.H_X_given_Y, units);
        j["rel_error_bound"] = ev.rel_error_bound;
        j["underflow"] = ev.underflow;
        print_record(j);
    });

    // ---- bounds ----
    auto* c_bounds = app.add_subcommand("bounds", "Proof bounds around H(X|Y)");
    std::string bounds_dist;
    double bounds_snr = 0.0, bounds_delta = 0.0, bounds_tol = 1e-10;
    c_bounds->add_option("--dist", bounds_dist, "Constellation")->required();
    c_bounds->add_option("--snr", bounds_snr, "Signal-to-noise ratio")->required();
    c_bounds->add_option("--delta", bounds_delta,
                         "Lower-bound window; 0 picks the best over a grid")
        ->capture_default_str();
    c_bounds->add_option("--tol", bounds_tol, "Quadrature tolerance")->capture_default_str();
    c_bounds->callback([&]() {
        const auto d = entgauss::load_constellation(bounds_dist);
        const auto ev = channel::conditional_entropy(d, bounds_snr, bounds_tol);
        double delta = bounds_delta, lower;
        if (delta > 0.0) {
            lower = channel::hxy_lower_bound(d, bounds_snr, delta);
        } else {
            lower = 0.0;
            const double sigma = 1.0 / std::sqrt(bounds_snr);
            for (int k = 0; k < 60; ++k) {
                const double cand = sigma * 1e-3 * std::pow(1e4, k / 59.0);
                const double v = channel::hxy_lower_bound(d, bounds_snr, cand);
                if (v > lower) {
                    lower = v;
                    delta = cand;
                }
            }
        }
        const double upper = channel::hxy_upper_bound(d, bounds_snr);
        json j;
        j["snr"] = bounds_snr;
        j["units"] = units;
        j["delta_used"] = delta;
        j["lower"] = from_nats(lower, units);
        j["value"] = from_nats(ev.H_X_given_Y, units);
        j["upper"] = from_nats(upper, units);
        print_record(j);
    });

    // ---- exponent ----
    auto* c_exp = app.add_subcommand("exponent", "Fit the H(X|Y) decay exponent in snr");
    std::string exp_dist, exp_grid;
    double exp_tol = 1e-10;
    c_exp->add_option("--dist", exp_dist, "Constellation")->required();
    c_exp->add_option("--snr-grid", exp_grid, "min:max:count[:log]")->required();
    c_exp->add_option("--tol", exp_tol, "Quadrature tolerance")->capture_default_str();
    c_exp->callback([&]() {
        const auto d = entgauss::load_constellation(exp_dist);
        const auto fit = channel::fit_exponent(d, parse_grid(exp_grid), exp_tol);
        json j;
        j["snr_grid"] = fit.snr_grid;
        j["scaled_log_values"] = fit.scaled_log_values;
        j["fitted_limit"] = fit.fitted_limit;
        j["predicted_limit"] = fit.predicted_limit;
        print_record(j);
    });

    // ---- verify ----
    auto* c_verify = app.add_subcommand(
        "verify", "Extremal checks: dmin search, duality, shift and tangent comparisons");
    double verify_h = 0.0;
    int verify_atoms = 6;
    std::uint64_t verify_trials = 2000, verify_seed = 1;
    c_verify->add_option("--h", verify_h, "Entropy target")->required();
    c_verify->add_option("--n-atoms", verify_atoms, "Atoms per search candidate")
        ->capture_default_str();
    c_verify->add_option("--trials", verify_trials, "Search restarts")->capture_default_str();
    c_verify->add_option("--seed", verify_seed, "Master seed")->capture_default_str();
    c_verify->callback([&]() {
        const double h = to_nats(verify_h, units);
        const auto rep = extremal::dmin_search(h, verify_atoms, verify_trials, verify_seed);
        const auto dual = extremal::duality_check(h);
        const auto shift = extremal::shift_comparison(h);
        const auto tangent = extremal::tangent_lemma_check(h);

        json j;
        j["h"] = verify_h;
        j["units"] = units;
        j["h_nats"] = h;
        json s;
        s["h_target"] = rep.h_target;
        s["best_dmin_found"] = rep.best_dmin_found;
        s["d_h_reference"] = rep.d_h_reference;
        s["trials"] = rep.trials;
        s["seed"] = rep.seed;
        if (rep.best_candidate) {
            s["best_candidate"] =
                json::parse(entgauss::constellation_json(*rep.best_candidate));
            const auto ref = materialize(
                solver::capacity_spec(solver::solve(h)));
            s["tv_to_reference"] =
                extremal::aligned_tv_distance(*rep.best_candidate, ref);
        }
        j["search"] = s;
        j["duality"] = {{"var_h", dual.var_h}, {"product", dual.product}};
        j["shift"] = {{"var_a0", shift.var_a0},
                      {"var_a_half", shift.var_a_half},
                      {"half_shift_clamped", shift.half_shift_clamped},
                      {"gap_log10", shift.gap_log10},
                      {"strict_inequality", shift.strict_inequality}};
        j["tangent"] = {{"slope_f", tangent.slope_f},
                        {"slope_g", tangent.slope_g},
                        {"half_shift_clamped", tangent.half_shift_clamped},
                        {"strict_inequality", tangent.strict_inequality}};
        print_record(j);
    });

    // ---- fig1 ----
    auto* c_fig1 = app.add_subcommand(
        "fig1", "H(X|Y) of the capacity spec vs snr, against the decay asymptote");
    double f1_min = 0.5, f1_max = 60.0;
    int f1_count = 25;
    std::string f1_hlist = "0.05,0.5,5";
    std::string f1_out, f1_format = "csv";
    double f1_tol = 1e-10;
    c_fig1->add_option("--snr-min", f1_min)->capture_default_str();
    c_fig1->add_option("--snr-max", f1_max)->capture_default_str();
    c_fig1->add_option("--count", f1_count)->capture_default_str();
    c_fig1->add_option("--h-list", f1_hlist, "Comma-separated entropy values")
        ->capture_default_str();
    c_fig1->add_option("--tol", f1_tol)->capture_default_str();
    c_fig1->add_option("--out", f1_out, "Output path (CSV)")->required();
    c_fig1->add_option("--format", f1_format)
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();
    c_fig1->callback([&]() {
        std::vector<double> hs;
        std::stringstream ss(f1_hlist);
        std::string item;
        while (std::getline(ss, item, ',')) hs.push_back(std::stod(item));
        std::vector<double> grid(static_cast<std::size_t>(f1_count));
        for (int i = 0; i < f1_count; ++i)
            grid[static_cast<std::size_t>(i)] =
                f1_min * std::pow(f1_max / f1_min, static_cast<double>(i) / (f1_count - 1));

        FigData d;
        d.meta.push_back("entgauss fig1 --snr-min " + fmt17(f1_min) + " --snr-max " +
                         fmt17(f1_max) + " --count " + std::to_string(f1_count) +
                         " --h-list " + f1_hlist + " --units " + units + " --tol " +
                         fmt17(f1_tol));
        d.meta.push_back("ratio column is H(X|Y) in nats over exp(-snr d_h^2/8)");
        d.columns = {"h_" + units, "snr", "hxy_" + units, "asymptote",
                     "corollary_approx", "ratio_nats"};
        std::vector<svgplot::Series> series;
        for (double hv : hs) {
            const double h = to_nats(hv, units);
            const auto r = solver::solve(h);
            const auto dist = materialize(solver::capacity_spec(r));
            const double rate = r.d_h * r.d_h / 8.0;
            const double rate_approx = solver::gap_exponent_approx(
                h, r.below_threshold ? entgauss::Regime::small : entgauss::Regime::large);
            svgplot::Series s_h{"H(X|Y), h=" + fmt17(hv).substr(0, 6), {}, {}};
            svgplot::Series s_a{"asymptote, h=" + fmt17(hv).substr(0, 6), {}, {}};
            for (double snr : grid) {
                const auto ev = channel::conditional_entropy(dist, snr, f1_tol);
                if (ev.underflow) {
                    d.warnings.push_back("underflow at h=" + fmt17(hv) +
                                         ", snr=" + fmt17(snr) + "; point dropped");
                    continue;
                }
                const double asym = std::exp(-snr * rate);
                const double approx = std::exp(-snr * rate_approx);
                d.rows.push_back({hv, snr, from_nats(ev.H_X_given_Y, units), asym,
                                  approx, ev.H_X_given_Y / asym});
                s_h.x.push_back(snr);
                s_h.y.push_back(ev.H_X_given_Y);
                s_a.x.push_back(snr);
                s_a.y.push_back(asym);
            }
            series.push_back(std::move(s_h));
            series.push_back(std::move(s_a));
        }
        emit_figure(d, f1_out, f1_format, "Conditional entropy vs snr", "snr",
                    "H(X|Y) [nats]", series, false, true);
    });

    // ---- fig2 ----
    auto* c_fig2 = app.add_subcommand("fig2", "PMF of the capacity-achieving lattice");
    double f2_h = 0.0;
    std::string f2_out, f2_format = "csv";
    c_fig2->add_option("--h", f2_h, "Entropy target")->required();
    c_fig2->add_option("--out", f2_out, "Output path (CSV)")->required();
    c_fig2->add_option("--format", f2_format)
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();
    c_fig2->callback([&]() {
        const double h = to_nats(f2_h, units);
        const auto r = solver::solve(h);
        const auto dist = materialize(solver::capacity_spec(r));
        FigData d;
        d.meta.push_back("entgauss fig2 --h " + fmt17(f2_h) + " --units " + units);
        d.meta.push_back("lambda_h " + fmt17(r.lambda_h) + " d_h " + fmt17(r.d_h));
        d.columns = {"atom", "prob"};
        svgplot::Series s{"pmf", {}, {}};
        for (std::size_t i = 0; i < dist.size(); ++i) {
            d.rows.push_back({dist.atoms()[i], dist.probs()[i]});
            s.x.push_back(dist.atoms()[i]);
            s.y.push_back(dist.probs()[i]);
        }
        emit_figure(d, f2_out, f2_format, "Capacity-achieving pmf", "x", "P(x)", {s},
                    false, true);
    });

    // ---- fig5 ----
    auto* c_fig5 = app.add_subcommand("fig5", "d_h and its closed approximations vs h");
    double f5_min = 1e-4, f5_max = 10.0;
    int f5_count = 40;
    std::string f5_out, f5_format = "csv";
    c_fig5->add_option("--h-min", f5_min)->capture_default_str();
    c_fig5->add_option("--h-max", f5_max)->capture_default_str();
    c_fig5->add_option("--count", f5_count)->capture_default_str();
    c_fig5->add_option("--out", f5_out, "Output path (CSV)")->required();
    c_fig5->add_option("--format", f5_format)
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();
    c_fig5->callback([&]() {
        FigData d;
        d.meta.push_back("entgauss fig5 --h-min " + fmt17(f5_min) + " --h-max " +
                         fmt17(f5_max) + " --count " + std::to_string(f5_count) +
                         " --units " + units);
        d.columns = {"h_" + units, "d_h", "d_h_small_approx", "d_h_large_approx"};
        svgplot::Series se{"d_h", {}, {}}, ss{"small-h approx", {}, {}},
            sl{"large-h approx", {}, {}};
        for (int i = 0; i < f5_count; ++i) {
            const double hv =
                f5_min * std::pow(f5_max / f5_min, static_cast<double>(i) / (f5_count - 1));
            const double h = to_nats(hv, units);
            const double exact = solver::solve(h).d_h;
            const double small = solver::d_h_approx(h, entgauss::Regime::small);
            const double large = solver::d_h_approx(h, entgauss::Regime::large);
            d.rows.push_back({hv, exact, small, large});
            se.x.push_back(hv);
            se.y.push_back(exact);
            if (std::isfinite(small)) {
                ss.x.push_back(hv);
                ss.y.push_back(small);
            }
            sl.x.push_back(hv);
            sl.y.push_back(large);
        }
        emit_figure(d, f5_out, f5_format, "Largest minimum distance vs entropy",
                    "h [" + units + "]", "d_h", {se, ss, sl}, true, true);
    });

    // ---- figL ----
    auto* c_figL = app.add_subcommand(
        "figL", "L_0 and L_{1/2} with a tangent line (tangency at --tangent-lambda)");
    double fl_min = 0.05, fl_max = 4.5, fl_tangent = 2.3;
    int fl_count = 200;
    std::string fl_out, fl_format = "csv";
    c_figL->add_option("--lambda-min", fl_min)->capture_default_str();
    c_figL->add_option("--lambda-max", fl_max)->capture_default_str();
    c_figL->add_option("--count", fl_count)->capture_default_str();
    c_figL->add_option("--tangent-lambda", fl_tangent)->capture_default_str();
    c_figL->add_option("--out", fl_out, "Output path (CSV)")->required();
    c_figL->add_option("--format", fl_format)
        ->check(CLI::IsMember({"csv", "json", "svg"}))
        ->capture_default_str();
    c_figL->callback([&]() {
        const auto t0 = entgauss::theta::log_theta(fl_tangent, 0.0, 1e-14);
        const double y_intercept = t0.L - fl_tangent * t0.dL;  // entropy h
        const double x_intercept = fl_tangent - t0.L / t0.dL;  // h d_h^2
        FigData d;
        d.meta.push_back("entgauss figL --lambda-min " + fmt17(fl_min) +
                         " --lambda-max " + fmt17(fl_max) + " --count " +
                         std::to_string(fl_count) + " --tangent-lambda " +
                         fmt17(fl_tangent));
        d.meta.push_back("tangent y-intercept (h) " + fmt17(y_intercept) +
                         " x-intercept (h d_h^2) " + fmt17(x_intercept));
        d.columns = {"lambda", "L0", "L_half", "tangent"};
        svgplot::Series s0{"L_0", {}, {}}, sh{"L_1/2", {}, {}}, st{"tangent", {}, {}};
        for (int i = 0; i < fl_count; ++i) {
            const double lam = fl_min + (fl_max - fl_min) * i / (fl_count - 1);
            const double L0 = entgauss::theta::log_theta(lam, 0.0, 1e-13).L;
            const double Lh = entgauss::theta::log_theta(lam, 0.5, 1e-13).L;
            const double tan = t0.L + t0.dL * (lam - fl_tangent);
            d.rows.push_back({lam, L0, Lh, tan});
            s0.x.push_back(lam);
            s0.y.push_back(L0);
            sh.x.push_back(lam);
            sh.y.push_back(Lh);
            st.x.push_back(lam);
            st.y.push_back(tan);
        }
        emit_figure(d, fl_out, fl_format, "Lattice log-theta potential", "lambda",
                    "L_a(lambda)", {s0, sh, st}, false, false);
    });

    // let '--units' (a global option) appear after the subcommand name
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const entgauss::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
