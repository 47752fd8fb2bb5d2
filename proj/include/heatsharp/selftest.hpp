#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "heatsharp/constants.hpp"
#include "heatsharp/errors.hpp"
#include "heatsharp/experiments.hpp"
#include "heatsharp/exponents.hpp"
#include "heatsharp/function_spec.hpp"
#include "heatsharp/gaussian.hpp"
#include "heatsharp/gridfn.hpp"

namespace heatsharp {

struct CriterionResult {
    int index;
    std::string name;
    bool pass;
    std::string detail;
};

namespace selftest_detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

/// The exponent set every sweep draws from.
inline std::vector<Exponent> exponent_set() {
    return {Exponent::finite(1.0),  Exponent::parse("5/4"), Exponent::parse("4/3"),
            Exponent::parse("3/2"), Exponent::finite(2.0),  Exponent::finite(3.0),
            Exponent::finite(4.0),  Exponent::infinity()};
}

inline bool admissible(Exponent p, Exponent q) {
    try {
        young_r(p, q);
        return true;
    } catch (const InvalidTriple&) {
        return false;
    }
}

inline std::vector<std::pair<Exponent, Exponent>> admissible_pairs(bool finite_interior_only) {
    std::vector<std::pair<Exponent, Exponent>> out;
    for (Exponent p : exponent_set())
        for (Exponent q : exponent_set()) {
            if (finite_interior_only &&
                (p.is_one() || p.is_infinite() || q.is_one() || q.is_infinite()))
                continue;
            if (admissible(p, q)) out.emplace_back(p, q);
        }
    return out;
}

inline double param_double(const ExperimentRecord& rec, const std::string& key) {
    for (const auto& [k, v] : rec.params)
        if (k == key) return std::stod(v);
    throw DomainError("record '" + rec.name + "' lacks param '" + key + "'");
}

inline GridFunction sampled_kernel(double t, double half_width, std::size_t n) {
    const Gaussian k = heat_kernel(t);
    const FunctionSpec spec = GaussianSpec{std::exp(k.log_amplitude), 0.0, t};
    return sample(spec, -half_width, half_width, n);
}

// --- criterion bodies ------------------------------------------------

/// Theta_1 * Theta_1 = Theta_2: exact width and center, amplitude to
/// 1e-14, and the sampled evolution within 1e-8 of the exact profile.
inline CriterionResult c01_semigroup() {
    const Gaussian t1 = heat_kernel(1.0);
    const Gaussian conv = convolve(t1, t1);
    const Gaussian t2 = heat_kernel(2.0);
    const bool exact = conv.width == 2.0 && conv.center == 0.0;
    const double amp_defect = std::fabs(conv.log_amplitude - t2.log_amplitude);

    const GridFunction f = sampled_kernel(1.0, 40.0, 8001);
    const GridFunction u = heat_evolve(f, 1.0);
    double sup = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        sup = std::max(sup, std::fabs(u.samples[i] - evaluate(t2, u.x(i))));

    const bool pass = exact && amp_defect <= 1e-14 && sup <= 1e-8;
    return {1, "semigroup_identity", pass,
            "width/center exact=" + std::string(exact ? "yes" : "no") +
                ", amp defect=" + num(amp_defect) + " (<=1e-14), grid sup=" + num(sup) +
                " (<=1e-8)"};
}

/// ||Theta_t||_q against alpha_q t^{-(1-1/q)/2}: closed form to 1e-13
/// relative, grid quadrature to 1e-8 relative.
inline CriterionResult c02_kernel_norms() {
    const std::vector<Exponent> qs = {Exponent::finite(1.0), Exponent::parse("4/3"),
                                      Exponent::finite(2.0), Exponent::finite(3.0),
                                      Exponent::infinity()};
    const std::vector<double> ts = {0.1, 1.0, 10.0};
    double worst_closed = 0.0, worst_grid = 0.0;
    for (double t : ts) {
        const Gaussian kernel = heat_kernel(t);
        const GridFunction f = sampled_kernel(t, 40.0, 8001);
        for (Exponent q : qs) {
            const double exact = alpha(q) * std::pow(t, -decay_exponent(q));
            worst_closed = std::max(worst_closed, std::fabs(lp_norm(kernel, q) / exact - 1.0));
            worst_grid = std::max(worst_grid, std::fabs(lp_norm_grid(f, q) / exact - 1.0));
        }
    }
    const bool pass = worst_closed <= 1e-13 && worst_grid <= 1e-8;
    return {2, "kernel_norms", pass,
            "closed rel=" + num(worst_closed) + " (<=1e-13), grid rel=" + num(worst_grid) +
                " (<=1e-8), 5 exponents x 3 times"};
}

/// The product identity linking c_p, alpha_p across an admissible triple
/// holds to 1e-12 for every pair drawn from the exponent set.
inline CriterionResult c03_constant_identity() {
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& [p, q] : admissible_pairs(false)) {
        worst = std::max(worst, rhs_identity_check(young_r(p, q)));
        ++count;
    }
    return {3, "constant_identity", worst <= 1e-12,
            "max defect=" + num(worst) + " (<=1e-12) over " + std::to_string(count) + " pairs"};
}

/// q = 1 collapses the estimate to the mass bound: K_{p,1} = 1.
inline CriterionResult c04_endpoint_constant() {
    double worst = 0.0;
    for (Exponent p : exponent_set())
        worst = std::max(worst,
                         std::fabs(heat_estimate_constant(p, Exponent::finite(1.0)) - 1.0));
    return {4, "endpoint_constant", worst <= 1e-14,
            "max |K(p,1)-1|=" + num(worst) + " (<=1e-14)"};
}

/// The matched extremal family attains ratio 1: closed form to 1e-10,
/// quadrature to 1e-4, across all interior admissible pairs and three
/// times.
inline CriterionResult c05_extremal_ratio() {
    const auto pairs = admissible_pairs(true);
    const std::vector<double> ts = {0.1, 1.0, 10.0};
    const GridSpec grid{-60.0, 60.0, 6001};
    double worst_closed = 0.0, worst_grid = 0.0;
    for (const auto& [p, q] : pairs) {
        const ExtremalBeta beta = extremal_beta(p, q);
        for (double t : ts) {
            const FunctionSpec spec = GaussianPowerSpec{t, beta.value};
            const ExperimentRecord closed =
                verify_sharpness_ratio(p, q, spec, {t}, RatioPath::closed_form);
            worst_closed = std::max(worst_closed, std::fabs(closed.rows[0].value - 1.0));
            const ExperimentRecord gridded =
                verify_sharpness_ratio(p, q, spec, {t}, RatioPath::quadrature, grid);
            worst_grid = std::max(worst_grid, std::fabs(gridded.rows[0].value - 1.0));
        }
    }
    const bool pass = worst_closed <= 1e-10 && worst_grid <= 1e-4;
    return {5, "extremal_ratio", pass,
            "closed |rho-1|=" + num(worst_closed) + " (<=1e-10), grid |rho-1|=" +
                num(worst_grid) + " (<=1e-4) over " + std::to_string(pairs.size()) +
                " pairs x 3 times"};
}

/// Random inputs never beat the constant: 200 seeded Gaussians (closed
/// form) and 50 seeded mixtures/indicators (quadrature), every ratio at
/// most 1 + 1e-6 over all admissible pairs and three times.
inline CriterionResult c06_random_inputs() {
    std::mt19937_64 rng(0x4845415453484152ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
    };

    const auto pairs = admissible_pairs(false);
    std::vector<SharpConstants> scs;
    scs.reserve(pairs.size());
    for (const auto& [p, q] : pairs) scs.push_back(sharp_constants(p, q));
    const std::vector<double> ts = {0.1, 1.0, 10.0};

    double worst_closed = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double a = log_uniform(0.1, 10.0);
        const double tau = log_uniform(0.01, 100.0);
        const double mu = -5.0 + 10.0 * unit(rng);
        const Gaussian g = Gaussian::from_amplitude(a, mu, tau);
        for (const SharpConstants& sc : scs) {
            const double log_fp = log_lp_norm(g, sc.triple.p);
            for (double t : ts) {
                const double rho =
                    std::exp(log_lp_norm(convolve(g, heat_kernel(t)), sc.triple.r) -
                             std::log(sc.heat_constant) - log_fp + sc.decay * std::log(t));
                worst_closed = std::max(worst_closed, rho);
            }
        }
    }

    auto random_indicator = [&] {
        const double lo = -5.0 + 6.0 * unit(rng);
        const double len = 0.5 + 3.5 * unit(rng);
        return IndicatorSpec{lo, lo + len};
    };
    auto random_weight = [&] {
        const double w = 0.2 + 1.8 * unit(rng);
        return unit(rng) < 0.5 ? -w : w;
    };

    double worst_grid = 0.0;
    for (int k = 0; k < 50; ++k) {
        FunctionSpec spec;
        if (k < 25) {
            spec = random_indicator();
        } else {
            MixtureSpec mix;
            const int atoms = 2 + static_cast<int>(rng() % 3);
            for (int j = 0; j < atoms; ++j) {
                AtomSpec atom;
                if (unit(rng) < 0.7) {
                    atom = GaussianSpec{log_uniform(0.2, 5.0), -4.0 + 8.0 * unit(rng),
                                        log_uniform(0.05, 5.0)};
                } else {
                    atom = random_indicator();
                }
                mix.terms.push_back({random_weight(), atom});
            }
            spec = mix;
        }
        const GridFunction f = sample(spec, -55.0, 55.0, 5501);
        std::map<double, double> fnorm;
        for (double t : ts) {
            const GridFunction u = heat_evolve(f, t);
            std::map<double, double> unorm;
            for (const SharpConstants& sc : scs) {
                auto fit = fnorm.find(sc.triple.p.reciprocal());
                if (fit == fnorm.end())
                    fit = fnorm.emplace(sc.triple.p.reciprocal(), lp_norm_grid(f, sc.triple.p))
                              .first;
                auto uit = unorm.find(sc.triple.r.reciprocal());
                if (uit == unorm.end())
                    uit = unorm.emplace(sc.triple.r.reciprocal(), lp_norm_grid(u, sc.triple.r))
                              .first;
                const double rho =
                    uit->second / (sc.heat_constant * fit->second * std::pow(t, -sc.decay));
                worst_grid = std::max(worst_grid, rho);
            }
        }
    }

    const bool pass = worst_closed <= 1.0 + 1e-6 && worst_grid <= 1.0 + 1e-6;
    return {6, "random_inputs_bounded", pass,
            "closed max rho=" + num(worst_closed) + ", grid max rho=" + num(worst_grid) +
                " (<=1+1e-6; 200 Gaussians + 50 mixtures/indicators, " +
                std::to_string(pairs.size()) + " pairs x 3 times)"};
}

/// The equality residual vanishes at beta* (to 1e-12) and is unimodal
/// around it: along 41 log-spaced betas in [beta*/100, 100 beta*] the
/// first differences are positive, then negative, with exactly one sign
/// change.
inline CriterionResult c07_equality_residual() {
    double worst_at_star = 0.0;
    bool shape_ok = true;
    std::size_t count = 0;
    for (const auto& [p, q] : admissible_pairs(true)) {
        const YoungTriple triple = young_r(p, q);
        const double beta_star = extremal_beta(p, q).value;
        worst_at_star =
            std::max(worst_at_star, std::fabs(equality_residual(beta_star, triple)));

        const std::vector<double> betas =
            detail::log_spaced(beta_star / 100.0, beta_star * 100.0, 41);
        std::vector<double> res;
        res.reserve(betas.size());
        for (double b : betas) res.push_back(equality_residual(b, triple));

        int changes = 0;
        bool nonzero = true;
        for (std::size_t i = 1; i + 1 < res.size(); ++i) {
            const double d0 = res[i] - res[i - 1];
            const double d1 = res[i + 1] - res[i];
            nonzero = nonzero && d0 != 0.0 && d1 != 0.0;
            if ((d0 > 0.0) != (d1 > 0.0)) ++changes;
        }
        const bool rises_first = res[1] > res[0];
        const bool falls_last = res[res.size() - 1] < res[res.size() - 2];
        shape_ok = shape_ok && nonzero && changes == 1 && rises_first && falls_last;
        ++count;
    }
    const bool pass = worst_at_star <= tolerances::residual_at_extremal && shape_ok;
    return {7, "equality_residual_unimodal", pass,
            "max |residual(beta*)|=" + num(worst_at_star) +
                " (<=1e-12), rise-then-fall with one turn on all " + std::to_string(count) +
                " pairs: " + (shape_ok ? "yes" : "no")};
}

/// Fitted decay of the matched family ratio: -1/8 for (4/3,4/3), -1/2
/// for (1,inf), 0 for (2,1), each within 1e-3.
inline CriterionResult c08_decay_slopes() {
    struct Case {
        Exponent p, q;
        double expected;
    };
    const std::vector<Case> cases = {
        {Exponent::parse("4/3"), Exponent::parse("4/3"), -0.125},
        {Exponent::finite(1.0), Exponent::infinity(), -0.5},
        {Exponent::finite(2.0), Exponent::finite(1.0), 0.0},
    };
    double worst = 0.0;
    bool verdicts = true;
    for (const Case& c : cases) {
        const ExperimentRecord rec =
            decay_slope(c.p, c.q, GaussianPowerSpec{1.0, 1.0}, 1.0, 100.0, 16);
        const double slope = param_double(rec, "slope");
        worst = std::max(worst, std::fabs(slope - c.expected));
        verdicts = verdicts && rec.verdict == Verdict::pass;
    }
    return {8, "decay_slopes", worst <= tolerances::slope && verdicts,
            "max slope error=" + num(worst) + " (<=1e-3) on (4/3,4/3)->-1/8, (1,inf)->-1/2, "
            "(2,1)->0"};
}

/// A modulus weaker by t^{0.1} fails: the witness ratio grows like
/// t^{-0.1} (slope within 1e-9) and gains the full 10^{0.6} factor from
/// t = 1 down to t = 1e-6.
inline CriterionResult c09_blowup() {
    const std::vector<std::pair<Exponent, Exponent>> pairs = {
        {Exponent::parse("4/3"), Exponent::parse("4/3")},
        {Exponent::finite(1.0), Exponent::infinity()},
    };
    double worst_slope = 0.0, worst_gain = std::numeric_limits<double>::infinity();
    for (const auto& [p, q] : pairs) {
        const double gamma = decay_exponent(q) - 0.1;
        const ExperimentRecord rec =
            blowup_ratio(p, q, DecayModulus{gamma}, detail::log_spaced(1e-6, 1.0, 13));
        worst_slope = std::max(worst_slope,
                               std::fabs(param_double(rec, "slope") - (-0.1)));
        worst_gain = std::min(worst_gain, rec.rows.front().value / rec.rows.back().value);
    }
    const double need = 0.99 * std::pow(10.0, 0.6);
    const bool pass = worst_slope <= tolerances::blowup_slope && worst_gain >= need;
    return {9, "blowup_modulus", pass,
            "slope error=" + num(worst_slope) + " (<=1e-9), min gain=" + num(worst_gain) +
                " (>=" + num(need) + ")"};
}

/// The tail witness for p = 2: I_{3/2}(L) grows with fitted exponent
/// 0.25 +- 0.05 while the tail-completed ||f||_2^2 partials agree with
/// 1/3 to 1e-6, and the evolved witness clears its pointwise lower bound
/// with every ratio at least 0.45 for x in [50, 1000].
inline CriterionResult c10_tail_witness() {
    const ExperimentRecord norms =
        counterexample_norms(Exponent::finite(2.0), Exponent::parse("3/2"),
                             detail::log_spaced(1e6, 1e12, 25));
    const double fit = param_double(norms, "fit_exponent");
    const double total = param_double(norms, "p_power_total");
    const double partial = param_double(norms, "p_power_partial");
    const double exact = 1.0 / 3.0;
    const bool fit_ok = std::fabs(fit - 0.25) <= tolerances::exponent_fit;
    const bool total_ok = std::fabs(total - exact) <= 1e-6;

    const ExperimentRecord lower = counterexample_lower_bound_check(
        Exponent::finite(2.0), 1.0,
        {50.0, 75.0, 100.0, 150.0, 200.0, 350.0, 500.0, 750.0, 1000.0});
    double min_ratio = std::numeric_limits<double>::infinity();
    for (const ExperimentRow& row : lower.rows) min_ratio = std::min(min_ratio, row.value);

    const bool pass = norms.verdict == Verdict::pass && fit_ok && total_ok &&
                      lower.verdict == Verdict::pass && min_ratio >= 0.45;
    return {10, "tail_witness", pass,
            "fit=" + num(fit) + " (0.25+-0.05), tail-completed |J-1/3|=" +
                num(std::fabs(total - exact)) + " (<=1e-6; raw partial gap " +
                num(std::fabs(partial - exact)) + "), min lower-bound ratio=" +
                num(min_ratio) + " (>=0.45)"};
}

/// u_t -> f in L^2 for a Gaussian start: differences shrink across
/// t = 1e-1..1e-4 and end below 1e-2.
inline CriterionResult c11_initial_convergence() {
    const Gaussian k = heat_kernel(1.0);
    const FunctionSpec spec = GaussianSpec{std::exp(k.log_amplitude), 0.0, 1.0};
    const ExperimentRecord rec =
        initial_convergence(spec, Exponent::finite(2.0), {1e-1, 1e-2, 1e-3, 1e-4},
                            GridSpec{-20.0, 20.0, 4001});
    const double final_diff = rec.rows.front().value;
    return {11, "initial_convergence", rec.verdict == Verdict::pass,
            "verdict=" + verdict_name(rec.verdict) + ", smallest-t diff=" + num(final_diff) +
                " (<1e-2), shrinking across 4 decades"};
}

/// The evolved Gaussian satisfies the heat equation: centered-difference
/// residual at t = 1 (h = 0.01, delta = 1e-3) below 1e-4 on [-3, 3].
inline CriterionResult c12_pde_residual() {
    const Gaussian k = heat_kernel(1.0);
    const FunctionSpec spec = GaussianSpec{std::exp(k.log_amplitude), 0.0, 1.0};
    const double res = pde_residual(spec, 1.0, -3.0, 3.0, 0.01, 1e-3);
    return {12, "pde_residual", res <= 1e-4,
            "max |u_t - u_xx|=" + num(res) + " (<=1e-4)"};
}

} // namespace selftest_detail

/// Runs every acceptance criterion; a thrown error fails that criterion
/// with the message as detail. The callback, when given, sees each result
/// as soon as its criterion finishes.
inline std::vector<CriterionResult> run_acceptance_criteria(
    const std::function<void(const CriterionResult&)>& on_result = {}) {
    using Body = CriterionResult (*)();
    struct Entry {
        int index;
        const char* name;
        Body body;
    };
    const std::vector<Entry> entries = {
        {1, "semigroup_identity", &selftest_detail::c01_semigroup},
        {2, "kernel_norms", &selftest_detail::c02_kernel_norms},
        {3, "constant_identity", &selftest_detail::c03_constant_identity},
        {4, "endpoint_constant", &selftest_detail::c04_endpoint_constant},
        {5, "extremal_ratio", &selftest_detail::c05_extremal_ratio},
        {6, "random_inputs_bounded", &selftest_detail::c06_random_inputs},
        {7, "equality_residual_unimodal", &selftest_detail::c07_equality_residual},
        {8, "decay_slopes", &selftest_detail::c08_decay_slopes},
        {9, "blowup_modulus", &selftest_detail::c09_blowup},
        {10, "tail_witness", &selftest_detail::c10_tail_witness},
        {11, "initial_convergence", &selftest_detail::c11_initial_convergence},
        {12, "pde_residual", &selftest_detail::c12_pde_residual},
    };
    std::vector<CriterionResult> out;
    out.reserve(entries.size());
    for (const Entry& e : entries) {
        try {
            out.push_back(e.body());
        } catch (const std::exception& ex) {
            out.push_back({e.index, e.name, false, std::string("exception: ") + ex.what()});
        }
        if (on_result) on_result(out.back());
    }
    return out;
}

/// One line per criterion, stable format: "PASS 01 name: detail".
inline std::string format_criterion_line(const CriterionResult& r) {
    char head[16];
    std::snprintf(head, sizeof(head), "%s %02d ", r.pass ? "PASS" : "FAIL", r.index);
    return head + r.name + ": " + r.detail;
}

} // namespace heatsharp
