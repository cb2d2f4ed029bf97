#include "frechet/cli/experiments.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "frechet/calculus.hpp"
#include "frechet/length.hpp"
#include "frechet/maps.hpp"
#include "frechet/minkowski.hpp"
#include "frechet/models.hpp"
#include "frechet/operators.hpp"
#include "frechet/probes.hpp"
#include "frechet/solver.hpp"

#ifndef FRECHET_VERSION
#define FRECHET_VERSION "0.0.0"
#endif

namespace frechet::cli {

namespace {

std::string num(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

// JSON has no inf/nan; encode them as strings.
Json jnum(double x)
{
    if (std::isfinite(x)) {
        return x;
    }
    return num(x);
}

Json certificate(const std::string& name, bool pass, double value, double bound)
{
    return Json{{"name", name}, {"status", pass ? "pass" : "fail"}, {"value", jnum(value)}, {"bound", jnum(bound)}};
}

Json point_json(const GradedPoint& p)
{
    Json d = Json::array();
    for (double x : p.data) {
        d.push_back(jnum(x));
    }
    return Json{{"model", to_string(p.kind)}, {"data", d}};
}

struct Builder {
    ExperimentReport rep;
    Json results = Json::object();
    Json certificates = Json::array();
    Json witnesses = Json::array();

    void cert(const std::string& name, bool pass, double value, double bound)
    {
        certificates.push_back(certificate(name, pass, value, bound));
        if (!pass) {
            rep.certificate_violation = true;
        }
    }
};

using Runner = std::function<void(const ExperimentConfig&, Builder&)>;

GradedSpace sequence_space(const ExperimentConfig& cfg, Flavor f = Flavor::Standard)
{
    return GradedSpace(ModelKind::Sequence, parse_weights(cfg.weights, cfg.depth), f);
}

GradedSpace periodic_space(const ExperimentConfig& cfg, Flavor f = Flavor::Standard)
{
    return GradedSpace(ModelKind::Periodic, parse_weights(cfg.weights, cfg.depth), f);
}

// ---- metrics-compare -----------------------------------------------------

void run_metrics_compare(const ExperimentConfig& cfg, Builder& b)
{
    const std::size_t n = cfg.depth;
    const std::size_t count = 1000;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    auto random_point = [&]() {
        GradedPoint p = GradedPoint::sequence(std::vector<double>(n));
        const double s = std::pow(10.0, expo(rng));
        for (double& x : p.data) {
            x = s * normal(rng);
        }
        return p;
    };
    CsvTable table{"metrics", {"pair", "flavor", "d_ab", "d_bc", "d_ac", "triangle_slack"}, {}};
    for (Flavor f : {Flavor::Standard, Flavor::Supremum}) {
        const GradedSpace space = sequence_space(cfg, f);
        const std::string name = f == Flavor::Standard ? "standard" : "supremum";
        std::size_t symmetry_fail = 0;
        std::size_t identity_fail = 0;
        double worst_triangle = std::numeric_limits<double>::infinity();
        double worst_scalar = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) {
            const GradedPoint a = random_point();
            const GradedPoint bb = random_point();
            const GradedPoint c = random_point();
            const double dab = space.distance(a, bb);
            const double dba = space.distance(bb, a);
            const double dbc = space.distance(bb, c);
            const double dac = space.distance(a, c);
            symmetry_fail += dab != dba;
            identity_fail += space.distance(a, a) != 0.0;
            const double slack = dab + dbc - dac;
            worst_triangle = std::min(worst_triangle, slack);
            for (double rho : {1.0, 2.0, 10.0}) {
                worst_scalar = std::min(worst_scalar, rho * space.norm(a) - space.norm(rho * a));
            }
            if (k < 50) {
                table.rows.push_back({std::to_string(k), name, num(dab), num(dbc), num(dac), num(slack)});
            }
        }
        b.results[name] = Json{{"pairs", count},
                               {"symmetry_failures", symmetry_fail},
                               {"identity_failures", identity_fail},
                               {"min_triangle_slack", jnum(worst_triangle)},
                               {"min_scalar_bound_slack", jnum(worst_scalar)}};
        b.cert(name + ":triangle", worst_triangle >= -1e-12, worst_triangle, -1e-12);
        b.cert(name + ":scalar-bounded-by-1", worst_scalar >= -1e-12, worst_scalar, -1e-12);
    }

    Json comp = Json::object();
    for (double r : {0.2, 0.5, 0.8}) {
        std::size_t ordered = 0;
        double worst = std::numeric_limits<double>::infinity();
        Json example;
        const std::size_t ladders = 500;
        for (std::size_t k = 0; k < ladders; ++k) {
            const SeminormLadder l = seq_ladder(random_point(), n);
            const ComparabilityTriple t = comparability_check(l, r, n);
            const double gap = std::min(t.sup_r - t.standard_r2, t.standard_r - t.sup_r);
            if (t.ordered()) {
                ++ordered;
            } else if (example.is_null()) {
                example = Json{{"ladder_index", k},
                               {"D_r2", t.standard_r2},
                               {"d_r", t.sup_r},
                               {"D_r", t.standard_r}};
            }
            worst = std::min(worst, gap);
        }
        const std::string key = "r=" + num(r);
        comp[key] = Json{{"ladders", ladders}, {"ordered", ordered}, {"min_gap", jnum(worst)}};
        if (!example.is_null()) {
            b.witnesses.push_back(Json{{"kind", "comparability-counterexample"}, {"r", r}, {"example", example}});
        }
    }
    b.results["comparability"] = comp;
    b.rep.tables.push_back(std::move(table));
}

// ---- shift-bound ---------------------------------------------------------

Json estimate_json(const RBoundEstimate& e)
{
    std::size_t index = 0;
    double scale = 0.0;
    for (std::size_t i = 0; i < e.witness.data.size(); ++i) {
        if (std::abs(e.witness.data[i]) > scale) {
            scale = std::abs(e.witness.data[i]);
            index = i;
        }
    }
    return Json{{"probe_max", jnum(e.lower_bound)},
                {"analytic_bound", e.analytic_upper ? jnum(*e.analytic_upper) : Json()},
                {"probes", e.probe_count},
                {"probes_used", e.probes_used},
                {"witness_dominant_index", index},
                {"witness_dominant_value", jnum(scale)}};
}

void run_shift_bound(const ExperimentConfig& cfg, Builder& b)
{
    const std::size_t n = cfg.depth;
    if (n < 2) {
        throw ConfigError("shift-bound needs depth >= 2");
    }
    const GradedSpace space = sequence_space(cfg);
    const auto inf = std::numeric_limits<double>::infinity();
    const LinearMap sigma = LinearMap::up_shift(n);
    const LinearMap tau = LinearMap::down_shift(n);
    const RBoundEstimate es = rbound_estimate(sigma, space, inf);
    const RBoundEstimate et = rbound_estimate(tau, space, inf);
    const GradedPoint e1 = space.basis(n, 0);
    const GradedPoint e2 = space.basis(n, 1);
    const double e2_ratio = space.norm(sigma(e2)) / space.norm(e2);

    Json up = estimate_json(es);
    up["e2_ratio"] = e2_ratio;
    up["D_e1"] = space.norm(e1);
    up["D_e2"] = space.norm(e2);
    b.results["up_shift"] = up;
    b.results["down_shift"] = estimate_json(et);
    b.cert("up-shift analytic bound", es.lower_bound <= *es.analytic_upper + 1e-12, es.lower_bound,
           *es.analytic_upper);
    b.cert("down-shift analytic bound", et.lower_bound <= *et.analytic_upper + 1e-12, et.lower_bound,
           *et.analytic_upper);
    b.witnesses.push_back(Json{{"kind", "up-shift-witness"}, {"point", point_json(e2)}, {"ratio", e2_ratio}});

    CsvTable table{"shift_ratios", {"k", "t", "sigma_ratio", "tau_ratio"}, {}};
    for (std::size_t k = 0; k < n; ++k) {
        for (double t : log_spaced(1e-3, 1e3, 7)) {
            const GradedPoint v = t * space.basis(n, k);
            const double nv = space.norm(v);
            table.rows.push_back({std::to_string(k), num(t), num(space.norm(sigma(v)) / nv),
                                  num(space.norm(tau(v)) / nv)});
        }
    }
    b.rep.tables.push_back(std::move(table));
}

// ---- fk-witness ----------------------------------------------------------

void run_fk_witness(const ExperimentConfig& cfg, Builder& b)
{
    const std::size_t B = std::max<std::size_t>(cfg.bandwidth, 36);
    const GradedSpace space = periodic_space(cfg);
    const LinearMap d = LinearMap::derivative(B);
    Json rows = Json::array();
    CsvTable table{"fk", {"K", "sup_f", "sup_df", "ratio", "K_squared", "graded_ratio"}, {}};
    std::vector<double> ratios;
    bool exact = true;
    for (int K = 1; K <= 6; ++K) {
        const GradedPoint f = make_fk(K, B);
        const double s0 = periodic_sup(f);
        const double s1 = periodic_sup(d(f));
        const double ratio = s1 / s0;
        const double graded = space.norm(d(f)) / space.norm(f);
        exact = exact && ratio == static_cast<double>(K * K);
        ratios.push_back(ratio);
        rows.push_back(Json{{"K", K}, {"sup_f", s0}, {"sup_df", s1}, {"ratio", ratio}, {"graded_ratio", graded}});
        table.rows.push_back({std::to_string(K), num(s0), num(s1), num(ratio), std::to_string(K * K), num(graded)});
    }
    b.results["bandwidth"] = B;
    b.results["witnesses"] = rows;
    b.results["sup_norm_ratios_equal_K_squared"] = exact;
    b.results["sup_norm_ratios_grow"] = monotone_growth(ratios);
    b.rep.tables.push_back(std::move(table));
}

// ---- composition-probe ---------------------------------------------------

void run_composition_probe(const ExperimentConfig& cfg, Builder& b)
{
    const GradedSpace space = periodic_space(cfg);
    const SizeFn size = [&space](const GradedPoint& p) { return space.norm(p); };
    CsvTable table{"composition", {"bandwidth", "m", "ratio"}, {}};
    Json per_band = Json::object();
    for (std::size_t B : {8u, 16u, 32u}) {
        const PointMap Cg = composition_operator(4.0, B);
        const GradedPoint w = periodic_cos(0, B, 1e-3);
        std::vector<double> ratios;
        // Past m = B/4 the harmonics of g∘p no longer fit in bandwidth B.
        for (std::size_t m = 1; m <= B / 4; ++m) {
            const GradedPoint base = periodic_sin(m, B, 0.5);
            const double r = unboundedness_probe_at(Cg, base, {w}, size).front();
            ratios.push_back(r);
            table.rows.push_back({std::to_string(B), std::to_string(m), num(r)});
        }
        Json rs = Json::array();
        for (double r : ratios) {
            rs.push_back(jnum(r));
        }
        per_band[std::to_string(B)] = Json{{"ratios", rs}, {"monotone_growth", monotone_growth(ratios)}};
    }
    b.results["g"] = "bump(y) * sin(4 y)";
    b.results["direction"] = "constant 1e-3";
    b.results["bandwidths"] = per_band;
    b.rep.tables.push_back(std::move(table));
}

// ---- neumann-invert ------------------------------------------------------

void run_neumann_invert(const ExperimentConfig& cfg, Builder& b)
{
    const std::size_t n = cfg.depth;
    const GradedSpace space = sequence_space(cfg);
    const LinearMap I = LinearMap::identity(ModelKind::Sequence, n);
    const LinearMap A = LinearMap::combination({{1.0, I}, {-0.5, LinearMap::down_shift(n)}});
    const auto inf = std::numeric_limits<double>::infinity();
    const NeumannResult res = neumann_invert(A, space, inf, cfg.tol, 10000);
    const Eigen::MatrixXd oracle = A.materialize().inverse();
    const double entry_err = (res.inverse.materialize() - oracle).cwiseAbs().maxCoeff();

    CsvTable table{"neumann_truncation", {"m", "probe_error", "bound"}, {}};
    const LinearMap exact = LinearMap::dense(ModelKind::Sequence, oracle);
    bool all_ok = true;
    double worst = inf;
    for (std::size_t m = 0; m < res.terms; ++m) {
        const LinearMap diff = LinearMap::combination({{1.0, neumann_partial_sum(A, m)}, {-1.0, exact}});
        const double probe = rbound_estimate(diff, space, inf).lower_bound;
        const double bound = std::pow(res.rho, static_cast<double>(m + 1)) / (1.0 - res.rho);
        all_ok = all_ok && probe <= bound + 1e-12;
        worst = std::min(worst, bound - probe);
        table.rows.push_back({std::to_string(m), num(probe), num(bound)});
    }
    b.results["operator"] = A.describe();
    b.results["rho"] = res.rho;
    b.results["rho_source"] = res.rho_source;
    b.results["probe_rho"] = res.probe_rho;
    b.results["terms"] = res.terms;
    b.results["error_bound"] = res.error_bound;
    b.results["inverse_bound"] = res.inverse_bound;
    b.results["max_entry_error_vs_dense"] = entry_err;
    b.cert("entrywise agreement with dense inverse", entry_err <= 1e-10, entry_err, 1e-10);
    b.cert("truncation bound at every m", all_ok, worst, 0.0);

    std::string rejection = "accepted";
    try {
        const LinearMap bad = LinearMap::combination({{1.0, I}, {-1.0, LinearMap::up_shift(n)}});
        (void)neumann_invert(bad, space, inf, cfg.tol, 10000);
    } catch (const ContractionViolation& e) {
        rejection = std::string("rejected: ") + e.what();
    }
    b.results["I_minus_sigma"] = rejection;
    b.cert("I - sigma rejected", rejection != "accepted", 0.0, 0.0);
    b.rep.tables.push_back(std::move(table));
}

// ---- ift-solve -----------------------------------------------------------

GradedPoint parse_target(const std::string& s, std::size_t n)
{
    GradedPoint y = GradedPoint::sequence(std::vector<double>(n, 0.0));
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto pos = item.rfind('e');
        if (pos == std::string::npos || pos == 0 || pos + 1 >= item.size()) {
            throw ConfigError("target terms look like <coef>e<index>, got '" + item + "'");
        }
        double coef = 0.0;
        std::size_t index = 0;
        try {
            coef = std::stod(item.substr(0, pos));
            index = std::stoul(item.substr(pos + 1));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse target term '" + item + "'");
        }
        if (index < 1 || index > n) {
            throw ConfigError("target index outside 1..depth in '" + item + "'");
        }
        y.data[index - 1] += coef;
    }
    return y;
}

GradedPoint newton_oracle(double c, const GradedPoint& y)
{
    GradedPoint x = y;
    const PointMap f = tau_sine_map(c);
    for (int it = 0; it < 100; ++it) {
        const GradedPoint r = f(x) - y;
        const Eigen::Map<const Eigen::VectorXd> rv(r.data.data(), static_cast<Eigen::Index>(r.data.size()));
        const Eigen::VectorXd dx = tau_sine_jacobian(c, x).lu().solve(rv);
        double step = 1.0;
        double r0 = rv.norm();
        for (int k = 0; k < 30; ++k) {
            GradedPoint trial = x;
            for (std::size_t i = 0; i < trial.data.size(); ++i) {
                trial.data[i] -= step * dx(static_cast<Eigen::Index>(i));
            }
            const GradedPoint rt = f(trial) - y;
            double nrm = 0.0;
            for (double v : rt.data) {
                nrm += v * v;
            }
            if (std::sqrt(nrm) <= r0 || step < 1e-8) {
                x = trial;
                break;
            }
            step *= 0.5;
        }
        if (dx.cwiseAbs().maxCoeff() < 1e-16) {
            break;
        }
    }
    return x;
}

void run_ift_solve(const ExperimentConfig& cfg, Builder& b)
{
    if (cfg.map != "tau-sine") {
        throw ConfigError("unknown map '" + cfg.map + "' (supported: tau-sine)");
    }
    const std::size_t n = cfg.depth;
    const double c = 0.1;
    const GradedSpace space = sequence_space(cfg);
    const PointMap f = tau_sine_map(c);
    const GradedPoint y = parse_target(cfg.target, n);
    const GradedPoint x0 = space.zero(n);
    const auto inf = std::numeric_limits<double>::infinity();

    const LinearMap df0 = LinearMap::dense(ModelKind::Sequence, tau_sine_jacobian(c, x0));
    const NeumannResult R0 = neumann_invert(df0, space, inf, 1e-15, 10000);
    const double R0_bound = *R0.inverse.analytic_bound(space.weights());
    // Φ_y(x1) - Φ_y(x2) = c R0 τ diag(1 - cos ξ)(x1 - x2): strictly lower triangular,
    // column sums <= 2c⟨R0⟩ < 1, so the ladder bound gives ρ = α_2/α_1.
    const double rho = reindex_ratio(space.weights(), -1);

    b.results["map"] = "x + 0.1 tau(sin x)";
    b.results["target"] = point_json(y);
    b.results["rho"] = rho;
    b.results["R0_terms"] = R0.terms;
    b.results["R0_bound"] = R0_bound;
    try {
        const RightInverseResult sol = right_inverse_solve(f, R0.inverse, R0_bound, y, x0, space, rho,
                                                           cfg.tol, 100000);
        const GradedPoint oracle = newton_oracle(c, y);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err = std::max(err, std::abs(sol.x.data[i] - oracle.data[i]));
        }
        b.results["iterations"] = sol.trace.iterations;
        b.results["planned"] = sol.trace.planned;
        b.results["residual"] = sol.residual;
        b.results["max_coordinate_error_vs_newton"] = err;
        b.results["solution"] = point_json(sol.x);
        b.results["certificate"] = Json{{"r0", sol.certificate.r0},
                                        {"target_radius", sol.certificate.target_radius},
                                        {"target_distance", sol.certificate.target_distance},
                                        {"target_inside", sol.certificate.target_inside},
                                        {"lower_lipschitz", sol.certificate.lower_lipschitz}};
        b.cert("residual below tol", sol.residual < cfg.tol, sol.residual, cfg.tol);
        b.cert("step ratios within rho", sol.trace.violations == 0, static_cast<double>(sol.trace.violations), 0.0);
        if (!sol.certificate.target_inside) {
            b.witnesses.push_back(Json{{"kind", "certificate-void"},
                                       {"reason", "target outside the certified ball"}});
        }
        CsvTable table{"trace", {"n", "residual", "step", "bound"}, {}};
        for (std::size_t k = 0; k < sol.trace.steps.size(); ++k) {
            table.rows.push_back({std::to_string(k), num(sol.trace.residuals[k]), num(sol.trace.steps[k]),
                                  num(sol.trace.bound_curve[k])});
        }
        b.rep.tables.push_back(std::move(table));
    } catch (const SolveCertificateViolation& e) {
        b.results["error"] = e.what();
        b.cert("step ratios within rho", false, static_cast<double>(e.trace.violations), 0.0);
    }
}

// ---- minkowski-tame ------------------------------------------------------

void run_minkowski_tame(const ExperimentConfig& cfg, Builder& b)
{
    const std::size_t n = cfg.depth;
    const GradedSpace space = sequence_space(cfg, Flavor::Supremum);
    const GradedPoint e1 = space.basis(n, 0);
    const double m4 = minkowski_functional(space, 4, e1, 1e-12);
    b.results["m4_e1"] = m4;

    const auto groups = tame_probe_groups(ModelKind::Sequence, n, 500 - std::min<std::size_t>(n, 500),
                                          log_spaced(1e-3, 1e3, 8), cfg.seed);
    const TameEstimate t = tame_grade_estimate(ladder_family(space), dyadic_minkowski_family(space), groups, n, 6);
    Json consts = Json::array();
    for (double c : t.constants) {
        consts.push_back(jnum(c));
    }
    b.results["tame"] = Json{{"satisfied", t.satisfied},
                             {"base", t.base},
                             {"grade", t.grade},
                             {"constants", consts},
                             {"stability_threshold", t.stability_threshold},
                             {"evidence", "empirical"}};
    if (!t.satisfied) {
        b.witnesses.push_back(Json{{"kind", "tame-falsified"}, {"level", t.witness_level},
                                   {"reason", t.reason}, {"point", point_json(t.witness)}});
    }
    CsvTable table{"tame_constants", {"n", "C_n"}, {}};
    for (std::size_t k = 0; k < t.constants.size(); ++k) {
        table.rows.push_back({std::to_string(t.base + 1 + k), num(t.constants[k])});
    }
    b.rep.tables.push_back(std::move(table));
}

// ---- lengths -------------------------------------------------------------

GradedPoint parse_direction(const std::string& token, const ExperimentConfig& cfg)
{
    try {
        if (token.rfind("sin", 0) == 0) {
            return periodic_sin(std::stoul(token.substr(3)), cfg.bandwidth);
        }
        if (token.rfind("cos", 0) == 0) {
            return periodic_cos(std::stoul(token.substr(3)), cfg.bandwidth);
        }
        if (token.rfind('e', 0) == 0) {
            const std::size_t k = std::stoul(token.substr(1));
            if (k < 1 || k > cfg.depth) {
                throw ConfigError("basis index outside 1..depth: " + token);
            }
            GradedPoint e = GradedPoint::sequence(std::vector<double>(cfg.depth, 0.0));
            e.data[k - 1] = 1.0;
            return e;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
    }
    throw ConfigError("cannot parse curve direction '" + token + "'");
}

void run_lengths(const ExperimentConfig& cfg, Builder& b)
{
    std::vector<std::string> parts;
    std::stringstream ss(cfg.curve);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    CurveSpec c;
    if (parts.size() == 2 && parts[0] == "line") {
        c = line_curve(parse_direction(parts[1], cfg));
    } else if (parts.size() == 3 && parts[0] == "affine") {
        c = affine_curve(parse_direction(parts[1], cfg), parse_direction(parts[2], cfg));
    } else {
        throw ConfigError("curve must be line:<dir> or affine:<dir>:<dir>, got '" + cfg.curve + "'");
    }
    const GradedSpace space(c.direction.kind, parse_weights(cfg.weights, cfg.depth));
    const LengthResult L0 = gromov_length(c, space, 1e-7, 40);
    const LengthResult L = smooth_length(c, space);
    const LengthResult l = metric_length(c, space);
    b.results["curve"] = cfg.curve;
    b.results["gromov"] = Json{{"value", jnum(L0.value)}, {"status", to_string(L0.status)}, {"level", L0.level}};
    b.results["smooth"] = Json{{"value", jnum(L.value)}, {"status", to_string(L.status)}};
    b.results["metric"] = Json{{"value", jnum(l.value)}, {"status", to_string(l.status)}};
    b.results["metric_le_smooth"] = l.value <= L.value + 1e-9;
    b.results["line_seminorms_bounded"] = line_b_differentiable(c.direction, 24).bounded;
    b.cert("l <= L", l.value <= L.value + 1e-9, l.value, L.value);
    CsvTable table{"gromov_history", {"level", "chord_sum"}, {}};
    for (std::size_t k = 0; k < L0.history.size(); ++k) {
        table.rows.push_back({std::to_string(k), num(L0.history[k])});
    }
    b.rep.tables.push_back(std::move(table));
}

// ---- ball-geometry -------------------------------------------------------

void run_ball_geometry(const ExperimentConfig& cfg, Builder& b)
{
    const std::size_t n = cfg.depth;
    const GradedSpace sup = sequence_space(cfg, Flavor::Supremum);
    const GradedSpace stdm = sequence_space(cfg, Flavor::Standard);
    const auto us = random_points(ModelKind::Sequence, n, 1000, cfg.seed, 1.0);
    const auto vs = random_points(ModelKind::Sequence, n, 1000, cfg.seed + 1, 1.0);
    std::mt19937_64 rng(cfg.seed + 2);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    std::size_t convex_fail = 0;
    for (std::size_t k = 0; k < us.size(); ++k) {
        const GradedPoint u = std::pow(10.0, expo(rng)) * us[k];
        const GradedPoint v = std::pow(10.0, expo(rng)) * vs[k];
        const double R = std::max(sup.norm(u), sup.norm(v));
        convex_fail += sup.norm(0.5 * (u + v)) > R;
    }
    b.results["supremum_midpoint_pairs"] = us.size();
    b.results["supremum_midpoint_failures"] = convex_fail;
    b.cert("supremum balls midpoint convex", convex_fail == 0, static_cast<double>(convex_fail), 0.0);

    const auto w = find_nonconvex_ball_witness(stdm, std::min<std::size_t>(n, 4));
    b.results["standard_nonconvex_witness_found"] = w.has_value();
    if (w) {
        b.witnesses.push_back(Json{{"kind", "standard-ball-nonconvex"},
                                   {"u", point_json(w->u)},
                                   {"v", point_json(w->v)},
                                   {"radius", w->radius},
                                   {"midpoint_norm", w->midpoint_norm}});
    }
    const double psi2 = piecewise_line_metric(0.0, 2.0);
    const double psi1 = piecewise_line_metric(0.0, 1.0);
    b.results["line_metric"] = Json{{"psi_1", psi1}, {"psi_2", psi2}, {"radius", 0.6},
                                    {"ball_contains_2", psi2 < 0.6}, {"ball_contains_1", psi1 < 0.6}};
    b.witnesses.push_back(Json{{"kind", "disconnected-ball"}, {"psi_2", psi2}, {"psi_1", psi1}});
}

const std::map<std::string, Runner>& runners()
{
    static const std::map<std::string, Runner> table = {
        {"metrics-compare", run_metrics_compare},
        {"shift-bound", run_shift_bound},
        {"fk-witness", run_fk_witness},
        {"composition-probe", run_composition_probe},
        {"neumann-invert", run_neumann_invert},
        {"ift-solve", run_ift_solve},
        {"minkowski-tame", run_minkowski_tame},
        {"lengths", run_lengths},
        {"ball-geometry", run_ball_geometry},
    };
    return table;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names = {
        "metrics-compare", "shift-bound", "fk-witness", "composition-probe", "neumann-invert",
        "ift-solve",       "minkowski-tame", "lengths", "ball-geometry"};
    return names;
}

WeightSequence parse_weights(const std::string& spec, std::size_t depth)
{
    if (depth == 0) {
        throw ConfigError("depth must be positive");
    }
    try {
        if (spec.rfind("geometric:", 0) == 0) {
            return geometric_weights(std::stod(spec.substr(10)), depth);
        }
        std::vector<double> values;
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            values.push_back(std::stod(item));
        }
        return explicit_weights(std::move(values));
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid weights: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ConfigError("invalid weights '" + spec + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("invalid weights '" + spec + "'");
    }
}

Json config_to_json(const ExperimentConfig& cfg)
{
    return Json{{"experiment", cfg.experiment}, {"depth", cfg.depth},   {"bandwidth", cfg.bandwidth},
                {"weights", cfg.weights},       {"seed", cfg.seed},     {"tol", cfg.tol},
                {"format", cfg.format},         {"curve", cfg.curve},   {"map", cfg.map},
                {"target", cfg.target},         {"modulus", "x/(1+x)"}};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg)
{
    const auto it = runners().find(cfg.experiment);
    if (it == runners().end()) {
        throw ConfigError("unknown experiment '" + cfg.experiment + "'");
    }
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "both") {
        throw ConfigError("format must be json, csv or both");
    }
    if (!(cfg.tol > 0.0)) {
        throw ConfigError("tol must be positive");
    }
    Builder b;
    try {
        it->second(cfg, b);
    } catch (const ConfigError&) {
        throw;
    } catch (const ShapeError& e) {
        throw ConfigError(e.what());
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    b.rep.report = Json{{"header", {{"version", FRECHET_VERSION}, {"timestamp", utc_timestamp()},
                                    {"config", config_to_json(cfg)}}},
                        {"results", b.results},
                        {"certificates", b.certificates},
                        {"witnesses", b.witnesses}};
    return b.rep;
}

std::string to_csv(const CsvTable& table)
{
    auto field = [](const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char ch : s) {
            q += ch;
            if (ch == '"') {
                q += '"';
            }
        }
        return q + "\"";
    };
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out += (i ? "," : "") + field(cells[i]);
        }
        out += "\r\n";
    };
    line(table.columns);
    for (const auto& r : table.rows) {
        line(r);
    }
    return out;
}

Json strip_timestamp(Json report)
{
    if (report.contains("header")) {
        report["header"].erase("timestamp");
    }
    return report;
}

}  // namespace frechet::cli
