#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heatsharp/constants.hpp"
#include "heatsharp/errors.hpp"
#include "heatsharp/experiments.hpp"
#include "heatsharp/exponents.hpp"
#include "heatsharp/function_spec.hpp"
#include "heatsharp/gridfn.hpp"
#include "heatsharp/records.hpp"
#include "heatsharp/selftest.hpp"

namespace heatsharp::cli {

namespace detail {

using heatsharp::detail::JsonWriter;

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("cannot parse number list entry '" + item + "'");
        }
    }
    if (out.empty()) throw DomainError("empty number list");
    return out;
}

/// Inline JSON, or @path to read a file.
inline FunctionSpec load_spec(const std::string& text) {
    if (!text.empty() && text.front() == '@') {
        std::ifstream in(text.substr(1));
        if (!in) throw DomainError("cannot open spec file '" + text.substr(1) + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_function_spec(buf.str());
    }
    return parse_function_spec(text);
}

inline void emit(const std::string& payload, const std::string& output_path, std::ostream& out) {
    if (output_path.empty()) {
        out << payload << '\n';
        return;
    }
    std::ofstream f(output_path);
    if (!f) throw DomainError("cannot open output file '" + output_path + "'");
    f << payload << '\n';
}

inline std::string grid_to_json(const GridFunction& f) {
    JsonWriter w;
    w.begin_object();
    w.key("x_lo").value(f.x_lo);
    w.key("x_hi").value(f.x_hi);
    w.key("h").value(f.h);
    w.key("n").value(f.size());
    w.key("trusted_lo").value(f.trusted_lo);
    w.key("trusted_hi").value(f.trusted_hi);
    w.key("truncation_warning").value(f.truncation_warning);
    w.key("samples").begin_array();
    for (double v : f.samples) w.value(v);
    w.end_array();
    w.end_object();
    return w.str();
}

inline int verdict_status(Verdict v) { return v == Verdict::fail ? 1 : 0; }

} // namespace detail

/// Full command-line driver; returns the process status (0 pass or
/// informational, 1 failed verdict or data error, 2 usage error).
/// Argument conversion happens while parsing, so malformed values exit
/// with 2; anything the computation itself rejects exits with 1.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{
        "Sharp-constant toolkit for the one-dimensional heat equation.\n"
        "Verifies the bound ||f * Theta_t||_r <= C_pq alpha_q t^(-(1-1/q)/2) ||f||_p\n"
        "with 1 + 1/r = 1/p + 1/q, its attainment by Gaussian powers Theta_t^beta,\n"
        "and the tail witness showing no smaller exponent can be controlled.",
        "heatsharp"};
    app.require_subcommand(1);
    app.footer("Exponents accept decimals ('1.5'), fractions ('4/3'), and 'inf'.\n"
               "HEATSHARP_THREADS caps the evolution worker count.\n"
               "Status: 0 = pass/informational, 1 = failed verdict or data error, 2 = usage.");

    // raw flag storage
    std::string p_text = "2", q_text = "2", s_text, spec_text, times_text, x_text;
    std::string output_path, format = "csv";
    double t = 1.0, t_lo = 1.0, t_hi = 100.0, gamma = 0.0;
    double x_lo = 0.0, x_hi = 0.0, h = 0.01, delta = 1e-3, span = 100.0;
    std::size_t n = 0, points = 16;
    bool use_fft = false;
    std::string path_choice = "auto", mode = "norms";
    std::optional<double> beta_opt, tol_opt;

    // typed values, filled by the subcommand callbacks during parsing
    Exponent p = Exponent::finite(2.0), q = Exponent::finite(2.0), s = Exponent::finite(2.0);
    FunctionSpec spec;
    std::vector<double> times, xs;
    std::optional<GridSpec> grid;
    std::function<int()> action;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--output", output_path, "Write the result here instead of stdout");
    };
    auto take_grid = [&](CLI::App* sub) {
        const std::size_t given =
            sub->count("--x-lo") + sub->count("--x-hi") + sub->count("--n");
        if (given == 3) grid = GridSpec{x_lo, x_hi, n};
        else if (given != 0)
            throw DomainError("pass all of --x-lo, --x-hi, --n or none");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--x-lo", x_lo, "Grid left edge");
        sub->add_option("--x-hi", x_hi, "Grid right edge");
        sub->add_option("--n", n, "Grid point count (>= 2)");
    };

    auto* constants = app.add_subcommand(
        "constants", "Print c_p, alpha_q, the sharp Young and heat constants, the decay "
                     "exponent, and the extremal Gaussian power for one exponent pair.");
    constants->add_option("--p", p_text, "Exponent p")->required();
    constants->add_option("--q", q_text, "Exponent q")->required();
    add_output(constants);
    constants->callback([&] {
        p = Exponent::parse(p_text);
        q = Exponent::parse(q_text);
        action = [&]() -> int {
            const SharpConstants sc = sharp_constants(p, q);
            detail::JsonWriter w;
            w.begin_object();
            w.key("name").value("sharp_constants");
            w.key("p").value(sc.triple.p.str());
            w.key("q").value(sc.triple.q.str());
            w.key("r").value(sc.triple.r.str());
            w.key("c_p").value(sc.c_p);
            w.key("c_q").value(sc.c_q);
            w.key("c_r").value(sc.c_r);
            w.key("alpha_q").value(sc.alpha_q);
            w.key("young_constant").value(sc.young_constant);
            w.key("heat_constant").value(sc.heat_constant);
            w.key("decay_exponent").value(sc.decay);
            w.key("extremal_beta").begin_object();
            w.key("kind").value(sc.beta.kind_name());
            w.key("value").value(sc.beta.value);
            w.end_object();
            w.end_object();
            detail::emit(w.str(), output_path, out);
            return 0;
        };
    });

    auto* equality = app.add_subcommand(
        "verify-equality",
        "Scan the equality residual beta^(1-1/q)/(1+beta)^(1-1/r) minus its sharp value; it "
        "must vanish exactly at beta* = (1-1/q)/(1-1/p) and fall away on both sides.");
    equality->add_option("--p", p_text, "Exponent p")->required();
    equality->add_option("--q", q_text, "Exponent q")->required();
    equality->add_option("--points", points, "Scan points (default 41)");
    equality->add_option("--span", span, "Scan factor around beta* (default 100)")
        ->capture_default_str();
    add_output(equality);
    equality->callback([&] {
        p = Exponent::parse(p_text);
        q = Exponent::parse(q_text);
        if (equality->count("--points") == 0) points = 41;
        if (points < 5) throw DomainError("--points must be at least 5");
        if (!(span > 1.0)) throw DomainError("--span must exceed 1");
        action = [&]() -> int {
            const YoungTriple triple = young_r(p, q);
            const ExtremalBeta beta = extremal_beta(p, q);
            ExperimentRecord rec;
            rec.name = "equality_residual";
            rec.add_param("p", p.str());
            rec.add_param("q", q.str());
            rec.add_param("r", triple.r.str());
            rec.add_param("beta_kind", beta.kind_name());
            rec.tolerance = tolerances::residual_at_extremal;
            const double center = beta.attained() ? beta.value : 1.0;
            const auto betas = heatsharp::detail::log_spaced(
                center / span, center * span, points % 2 == 0 ? points + 1 : points);
            std::vector<double> res;
            for (double b : betas) {
                res.push_back(equality_residual(b, triple));
                rec.rows.push_back({b, res.back(), std::nullopt});
            }
            if (beta.attained()) {
                const double at_star = equality_residual(beta.value, triple);
                rec.add_param("beta_star", beta.value);
                rec.add_param("residual_at_beta_star", at_star);
                int changes = 0;
                for (std::size_t i = 1; i + 1 < res.size(); ++i)
                    if ((res[i] - res[i - 1] > 0.0) != (res[i + 1] - res[i] > 0.0)) ++changes;
                const bool ok = std::fabs(at_star) <= rec.tolerance && changes == 1 &&
                                res[1] > res[0] && res.back() < res[res.size() - 2];
                rec.verdict = ok ? Verdict::pass : Verdict::fail;
            } else {
                rec.verdict = Verdict::informational;
            }
            detail::emit(rec.to_json(), output_path, out);
            return detail::verdict_status(rec.verdict);
        };
    });

    auto* evolve = app.add_subcommand(
        "evolve", "Convolve a sampled input with the heat kernel at time t and print the grid.");
    evolve->add_option("--spec", spec_text, "Function spec: inline JSON or @file")->required();
    evolve->add_option("--t", t, "Evolution time (> 0)")->required();
    add_grid(evolve);
    evolve->add_flag("--fft", use_fft, "Use the spectral route instead of direct quadrature");
    evolve->add_option("--format", format, "csv (default) or json")->capture_default_str();
    add_output(evolve);
    evolve->callback([&] {
        spec = detail::load_spec(spec_text);
        take_grid(evolve);
        if (format != "csv" && format != "json")
            throw DomainError("unknown format '" + format + "'");
        action = [&]() -> int {
            const GridSpec gs = grid ? *grid : heatsharp::detail::auto_grid(spec, t, 0.01);
            const GridFunction f = sample(spec, gs.x_lo, gs.x_hi, gs.n);
            const GridFunction u = use_fft ? heat_evolve_fft(f, t) : heat_evolve(f, t);
            if (format == "json") {
                detail::emit(detail::grid_to_json(u), output_path, out);
            } else {
                std::ostringstream os;
                write_csv(u, os);
                std::string payload = os.str();
                if (!payload.empty() && payload.back() == '\n') payload.pop_back();
                detail::emit(payload, output_path, out);
            }
            if (u.truncation_warning)
                err << "warning: kernel radius exceeds the grid half-width; "
                       "values near the edges are truncated\n";
            return 0;
        };
    });

    auto* sharp = app.add_subcommand(
        "sharpness", "Measure rho(t) = ||f*Theta_t||_r / (K t^(-(1-1/q)/2) ||f||_p); the sharp "
                     "bound keeps rho <= 1, with equality for the matched Gaussian power.");
    sharp->add_option("--p", p_text, "Exponent p")->required();
    sharp->add_option("--q", q_text, "Exponent q")->required();
    sharp->add_option("--spec", spec_text, "Function spec: inline JSON or @file")->required();
    sharp->add_option("--times", times_text, "Comma-separated times, e.g. 0.1,1,10")->required();
    sharp->add_option("--path", path_choice, "auto | closed | grid")->capture_default_str();
    add_grid(sharp);
    sharp->add_option("--tolerance", tol_opt, "Override the verdict tolerance");
    add_output(sharp);
    sharp->callback([&] {
        p = Exponent::parse(p_text);
        q = Exponent::parse(q_text);
        spec = detail::load_spec(spec_text);
        times = detail::parse_list(times_text);
        take_grid(sharp);
        if (path_choice != "auto" && path_choice != "closed" && path_choice != "grid")
            throw DomainError("unknown path '" + path_choice + "'");
        action = [&]() -> int {
            RatioPath path = RatioPath::automatic;
            if (path_choice == "closed") path = RatioPath::closed_form;
            if (path_choice == "grid") path = RatioPath::quadrature;
            const ExperimentRecord rec =
                verify_sharpness_ratio(p, q, spec, times, path, grid, tol_opt);
            detail::emit(rec.to_json(), output_path, out);
            return detail::verdict_status(rec.verdict);
        };
    });

    auto* decay = app.add_subcommand(
        "decay-fit", "Fit the time decay of the matched family ratio against its exact law "
                     "K t^(-(1-1/q)/2), or report the raw decay of a fixed input.");
    decay->add_option("--p", p_text, "Exponent p")->required();
    decay->add_option("--q", q_text, "Exponent q")->required();
    decay->add_option("--beta", beta_opt, "Gaussian power (default: extremal, else 1)");
    decay->add_option("--spec", spec_text, "Fixed input spec instead of the Gaussian family");
    decay->add_option("--t-lo", t_lo, "Smallest time")->capture_default_str();
    decay->add_option("--t-hi", t_hi, "Largest time")->capture_default_str();
    decay->add_option("--points", points, "Sample count (>= 3)")->capture_default_str();
    add_output(decay);
    decay->callback([&] {
        p = Exponent::parse(p_text);
        q = Exponent::parse(q_text);
        if (!spec_text.empty()) spec = detail::load_spec(spec_text);
        action = [&]() -> int {
            if (spec_text.empty()) {
                double beta = 1.0;
                if (beta_opt) beta = *beta_opt;
                else if (const ExtremalBeta eb = extremal_beta(p, q); eb.attained())
                    beta = eb.value;
                spec = GaussianPowerSpec{1.0, beta};
            }
            const ExperimentRecord rec = decay_slope(p, q, spec, t_lo, t_hi, points);
            detail::emit(rec.to_json(), output_path, out);
            return detail::verdict_status(rec.verdict);
        };
    });

    auto* blowup = app.add_subcommand(
        "blowup", "Show that a modulus t^(-gamma) weaker than t^(-(1-1/q)/2) fails: the "
                  "witness ratio grows like t^(gamma-(1-1/q)/2) as t -> 0.");
    blowup->add_option("--p", p_text, "Exponent p")->required();
    blowup->add_option("--q", q_text, "Exponent q")->required();
    blowup->add_option("--gamma", gamma, "Conjectured decay exponent (>= 0)")->required();
    blowup->add_option("--t-lo", t_lo, "Smallest time");
    blowup->add_option("--t-hi", t_hi, "Largest time");
    blowup->add_option("--points", points, "Sample count (>= 2)")->capture_default_str();
    add_output(blowup);
    blowup->callback([&] {
        p = Exponent::parse(p_text);
        q = Exponent::parse(q_text);
        if (blowup->count("--t-lo") == 0) t_lo = 1e-6;
        if (blowup->count("--t-hi") == 0) t_hi = 1.0;
        action = [&]() -> int {
            const ExperimentRecord rec = blowup_ratio(
                p, q, DecayModulus{gamma}, heatsharp::detail::log_spaced(t_lo, t_hi, points));
            detail::emit(rec.to_json(), output_path, out);
            return detail::verdict_status(rec.verdict);
        };
    });

    auto* counter = app.add_subcommand(
        "counterexample",
        "Audit the tail witness x^(-1/p) log^-2 x: its L^p mass converges to 1/(2p-1) while "
        "every exponent s < p diverges (mode norms), and its evolution dominates "
        "f(x) erf((x-e)/(2 sqrt t))/2 pointwise (mode lower-bound).");
    counter->add_option("--mode", mode, "norms (default) or lower-bound")->capture_default_str();
    counter->add_option("--p", p_text, "Tail exponent p")->required();
    counter->add_option("--s", s_text, "Smaller exponent s < p (mode norms)");
    counter->add_option("--l-lo", t_lo, "Smallest cutoff L (mode norms, default 1e6)");
    counter->add_option("--l-hi", t_hi, "Largest cutoff L (mode norms, default 1e12)");
    counter->add_option("--points", points, "Cutoff count (mode norms, default 25)");
    counter->add_option("--t", t, "Evolution time (mode lower-bound)")->capture_default_str();
    counter->add_option("--x", x_text, "Comma-separated audit points (mode lower-bound)");
    counter->add_option("--dx", h, "Grid spacing (mode lower-bound)")->capture_default_str();
    add_output(counter);
    counter->callback([&] {
        p = Exponent::parse(p_text);
        if (mode == "norms") {
            s = Exponent::parse(s_text.empty() ? "3/2" : s_text);
            if (counter->count("--l-lo") == 0) t_lo = 1e6;
            if (counter->count("--l-hi") == 0) t_hi = 1e12;
            if (counter->count("--points") == 0) points = 25;
        } else if (mode == "lower-bound") {
            xs = detail::parse_list(x_text.empty() ? "50,100,200,500,1000" : x_text);
        } else {
            throw DomainError("unknown mode '" + mode + "'");
        }
        action = [&]() -> int {
            const ExperimentRecord rec =
                mode == "norms"
                    ? counterexample_norms(p, s,
                                           heatsharp::detail::log_spaced(t_lo, t_hi, points))
                    : counterexample_lower_bound_check(p, t, xs, h);
            detail::emit(rec.to_json(), output_path, out);
            return detail::verdict_status(rec.verdict);
        };
    });

    auto* initial = app.add_subcommand(
        "initial-condition", "Check u_t -> f in L^p as t -> 0 for a sampled input.");
    initial->add_option("--spec", spec_text, "Function spec: inline JSON or @file")->required();
    initial->add_option("--p", p_text, "Norm exponent")->required();
    initial->add_option("--times", times_text, "Comma-separated decreasing times")->required();
    add_grid(initial);
    add_output(initial);
    initial->callback([&] {
        p = Exponent::parse(p_text);
        spec = detail::load_spec(spec_text);
        times = detail::parse_list(times_text);
        take_grid(initial);
        action = [&]() -> int {
            const ExperimentRecord rec = initial_convergence(spec, p, times, grid);
            detail::emit(rec.to_json(), output_path, out);
            return detail::verdict_status(rec.verdict);
        };
    });

    auto* pde = app.add_subcommand(
        "pde-residual", "Max |d/dt u - d2/dx2 u| of the evolved input by centered differences.");
    pde->add_option("--spec", spec_text, "Function spec: inline JSON or @file")->required();
    pde->add_option("--t", t, "Evolution time")->required();
    pde->add_option("--x-lo", x_lo, "Window left edge")->required();
    pde->add_option("--x-hi", x_hi, "Window right edge")->required();
    pde->add_option("--dx", h, "Space step")->capture_default_str();
    pde->add_option("--delta", delta, "Time step for the centered difference")
        ->capture_default_str();
    add_output(pde);
    pde->callback([&] {
        spec = detail::load_spec(spec_text);
        action = [&]() -> int {
            const double res = pde_residual(spec, t, x_lo, x_hi, h, delta);
            detail::JsonWriter w;
            w.begin_object();
            w.key("name").value("pde_residual");
            w.key("t").value(t);
            w.key("x_lo").value(x_lo);
            w.key("x_hi").value(x_hi);
            w.key("h").value(h);
            w.key("delta").value(delta);
            w.key("residual").value(res);
            w.end_object();
            detail::emit(w.str(), output_path, out);
            return 0;
        };
    });

    auto* selftest = app.add_subcommand(
        "selftest", "Run every acceptance check and print one PASS/FAIL line per criterion.");
    selftest->callback([&] {
        action = [&]() -> int {
            bool all = true;
            run_acceptance_criteria([&](const CriterionResult& r) {
                out << format_criterion_line(r) << std::endl;
                all = all && r.pass;
            });
            out << (all ? "all criteria passed" : "some criteria FAILED") << '\n';
            return all ? 0 : 1;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        return action ? action() : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace heatsharp::cli
