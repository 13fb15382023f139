#pragma once

// Command-line front end: size | eval | simulate | table.
//
// Exit codes: 0 success, 1 usage or domain error, 2 criterion
// unsatisfiable, 3 numerical-accuracy failure.

#include "bssd/bssd.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bssd::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kUnsatisfiable = 2, kNumerical = 3 };

struct RunConfig {
    std::string command;
    std::string model = "normal";
    std::optional<double> sigma2, mu0, tau2, a, b;
    std::string criterion;
    std::optional<double> eps, len, alpha, theta1, theta0;
    std::string range;
    std::optional<long long> n;
    std::size_t m = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::string format = "text";
    std::string out_path;
    bool fresh_seed = false;
    std::size_t workers = 1;
    int table = 0;
};

namespace detail {

inline Model build_model(const RunConfig& cfg) {
    Model model;
    if (cfg.model == "normal") {
        model.family = NormalKnownVariance{cfg.sigma2.value_or(1.0)};
        model.prior = NormalPrior{cfg.mu0.value_or(0.0), cfg.tau2.value_or(1.0)};
    } else if (cfg.model == "poisson") {
        model.family = Poisson{};
        model.prior = GammaPrior{cfg.a.value_or(1.0), cfg.b.value_or(1.0)};
    } else if (cfg.model == "bernoulli") {
        model.family = Bernoulli{};
        model.prior = BetaPrior{cfg.a.value_or(1.0), cfg.b.value_or(1.0)};
    } else if (cfg.model == "exp") {
        model.family = ExponentialRate{};
        model.prior = BetaPrior{cfg.a.value_or(1.5), cfg.b.value_or(1.5)};
    } else {
        throw DomainError("unknown model '" + cfg.model + "'");
    }
    validate(model);
    return model;
}

inline std::string model_params(const Model& model) {
    return std::visit(Overloaded{[&](const NormalPrior& p) {
                                     return "mu0=" + format_number(p.mu0) + ";sigma2=" +
                                            format_number(std::get<NormalKnownVariance>(model.family).sigma2) +
                                            ";tau2=" + format_number(p.tau2);
                                 },
                                 [](const GammaPrior& p) { return "a=" + format_number(p.a) + ";b=" + format_number(p.b); },
                                 [](const BetaPrior& p) { return "a=" + format_number(p.a) + ";b=" + format_number(p.b); }},
                      model.prior);
}

template <class T>
T require(const std::optional<T>& v, const char* flag) {
    if (!v) throw DomainError(std::string("missing required flag ") + flag);
    return *v;
}

inline Functional build_functional(const RunConfig& cfg) {
    const double alpha = cfg.alpha.value_or(0.05);
    Functional f;
    if (cfg.criterion == "apvc") {
        f = Variance{};
    } else if (cfg.criterion == "acc") {
        f = CenteredMass{require(cfg.len, "--len")};
    } else if (cfg.criterion == "alc") {
        f = IntervalLength{alpha};
    } else if (cfg.criterion == "alc-quantile") {
        f = Quantile{alpha};
    } else if (cfg.criterion == "es") {
        f = ProbAbove{require(cfg.theta1, "--theta1")};
    } else if (cfg.criterion == "hpd") {
        f = Hpd{1.0 - alpha};
    } else {
        throw DomainError("unknown criterion '" + cfg.criterion + "'");
    }
    validate(f);
    return f;
}

inline PlanningRange parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainError("--range must look like lo:hi");
    try {
        std::size_t used = 0;
        const std::string lo_text = text.substr(0, colon);
        const std::string hi_text = text.substr(colon + 1);
        const double lo = std::stod(lo_text, &used);
        if (used != lo_text.size()) throw std::invalid_argument("lo");
        const double hi = std::stod(hi_text, &used);
        if (used != hi_text.size()) throw std::invalid_argument("hi");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw DomainError("--range must look like lo:hi");
    }
}

inline Criterion build_criterion(const RunConfig& cfg) {
    const double alpha = cfg.alpha.value_or(0.05);
    Criterion c{Apvc{0.0}, {}};
    if (cfg.criterion == "apvc") {
        c.kind = Apvc{require(cfg.eps, "--eps")};
    } else if (cfg.criterion == "acc") {
        c.kind = Acc{require(cfg.len, "--len"), alpha};
    } else if (cfg.criterion == "alc") {
        c.kind = Alc{require(cfg.len, "--len"), alpha};
    } else if (cfg.criterion == "es") {
        c.kind = EffectSize{require(cfg.theta1, "--theta1"), alpha};
    } else {
        throw DomainError("criterion '" + cfg.criterion + "' has no sample-size solver");
    }
    // Criterion parameters are checked before the range is looked at.
    bssd::detail::validate_criterion(c);
    if (cfg.range.empty()) throw DomainError("missing required flag --range");
    c.range = parse_range(cfg.range);
    return c;
}

/// Splits an interval-valued functional into lower/upper rows.
inline std::vector<TableRow> functional_rows(const TableRow& base, const Functional& f, const FunctionalValue& star,
                                             const std::optional<FunctionalValue>& exact,
                                             const std::optional<MonteCarloEstimate>& mc) {
    std::vector<TableRow> rows;
    TableRow lo = base;
    lo.g_star = star.value;
    if (exact) lo.g_exact = exact->value;
    if (mc) {
        lo.g_hat = mc->mean;
        lo.g_hat_se = mc->std_err;
    }
    if (!std::holds_alternative<Hpd>(f)) {
        rows.push_back(lo);
        return rows;
    }
    lo.criterion = "hpd-lo";
    TableRow hi = base;
    hi.criterion = "hpd-hi";
    hi.g_star = *star.upper;
    if (exact) hi.g_exact = exact->upper;
    if (mc) {
        hi.g_hat = mc->upper_mean;
        hi.g_hat_se = mc->upper_std_err;
    }
    rows.push_back(lo);
    rows.push_back(hi);
    return rows;
}

inline void require_format(const RunConfig& cfg) {
    if (cfg.format != "text" && cfg.format != "csv") throw DomainError("--format must be text or csv");
}

inline std::int64_t require_n(const RunConfig& cfg) {
    const long long n = require(cfg.n, "--n");
    if (n < 1) throw DomainError("--n must be positive");
    return n;
}

} // namespace detail

inline void cmd_size(const RunConfig& cfg, std::ostream& out) {
    const Model model = detail::build_model(cfg);
    const Criterion c = detail::build_criterion(cfg);
    const SampleSizeResult r = min_sample_size(c, model.family);
    if (cfg.format == "csv") {
        out << "criterion,model,n_min,n_real,inf_info,inf_theta\n"
            << cfg.criterion << ',' << cfg.model << ',' << r.n_min << ',' << format_number(r.n_real) << ','
            << format_number(r.inf_info) << ',' << format_number(r.inf_theta) << '\n';
        return;
    }
    out << "criterion  " << cfg.criterion << '\n'
        << "model      " << cfg.model << '\n'
        << "n_min      " << r.n_min << '\n'
        << "n_real     " << format_number(r.n_real) << '\n'
        << "inf_info   " << format_number(r.inf_info) << '\n'
        << "inf_theta  " << format_number(r.inf_theta) << '\n';
}

inline void write_rows(const RunConfig& cfg, std::ostream& out, const std::vector<TableRow>& rows) {
    if (cfg.format == "csv") {
        write_csv(out, rows);
    } else {
        write_text(out, rows);
    }
}

inline void cmd_eval(const RunConfig& cfg, std::ostream& out) {
    const Model model = detail::build_model(cfg);
    const Functional f = detail::build_functional(cfg);
    const double theta0 = detail::require(cfg.theta0, "--theta0");
    const std::int64_t n = detail::require_n(cfg);
    require_in_domain(model.family, theta0);
    const FunctionalValue star = g_star(f, model.family, theta0, static_cast<double>(n));
    std::optional<FunctionalValue> exact;
    if (auto e = exact_g(model, f, theta0, n, cfg.workers)) exact = e->value;

    TableRow base;
    base.criterion = cfg.criterion;
    base.model = cfg.model;
    base.params = detail::model_params(model);
    base.theta0 = theta0;
    base.n = n;
    const auto rows = detail::functional_rows(base, f, star, exact, std::nullopt);
    write_rows(cfg, out, rows);
    if (cfg.format == "text") {
        for (const auto& r : rows) {
            if (r.g_exact) out << r.criterion << " difference (exact - g_star) " << format_number(*r.g_exact - r.g_star) << '\n';
        }
    }
}

inline void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    const Model model = detail::build_model(cfg);
    const Functional f = detail::build_functional(cfg);
    const double theta0 = detail::require(cfg.theta0, "--theta0");
    const std::int64_t n = detail::require_n(cfg);
    require_in_domain(model.family, theta0);
    std::uint64_t seed = cfg.seed;
    if (cfg.fresh_seed) {
        std::random_device device;
        seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
    }
    const MonteCarloEstimate est = simulate_g(model, theta0, n, cfg.m, f, seed, cfg.workers);
    const FunctionalValue star = g_star(f, model.family, theta0, static_cast<double>(n));
    TableRow base;
    base.criterion = cfg.criterion;
    base.model = cfg.model;
    base.params = detail::model_params(model);
    base.theta0 = theta0;
    base.n = n;
    const auto rows = detail::functional_rows(base, f, star, std::nullopt, est);
    if (cfg.format == "csv") {
        write_csv(out, rows);
        return;
    }
    for (const auto& r : rows) {
        out << "criterion  " << r.criterion << '\n'
            << "mean       " << format_number(*r.g_hat) << '\n'
            << "std_err    " << format_number(*r.g_hat_se) << '\n'
            << "g_star     " << format_number(r.g_star) << '\n';
    }
    out << "m          " << est.m << '\n' << "seed       " << est.seed << '\n';
}

inline void cmd_table(const RunConfig& cfg, std::ostream& out) {
    std::vector<TableRow> rows;
    switch (cfg.table) {
    case 1: rows = build_table1(); break;
    case 2: rows = build_table2(); break;
    case 3: {
        Table3Options options;
        options.m = cfg.m;
        options.seed = cfg.seed;
        if (cfg.fresh_seed) {
            std::random_device device;
            options.seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
        }
        options.workers = cfg.workers;
        if (options.m < 2) throw DomainError("--m must be at least 2");
        rows = build_table3(options);
        if (cfg.format == "text") out << "seed " << options.seed << ", m " << options.m << '\n';
        break;
    }
    default: throw DomainError("unknown table " + std::to_string(cfg.table) + " (expected 1, 2 or 3)");
    }
    write_rows(cfg, out, rows);
}

/// Parses argv, runs the command and returns the process exit code. All
/// diagnostics go to `err`; `out` only receives results.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Bayesian sample size planning: minimal n, expected posterior functionals, tables"};
    app.set_config("--config", "", "Read key = value options from a file (flags override it)");
    app.require_subcommand(1);

    app.add_option("--model", cfg.model, "Likelihood: normal, poisson, bernoulli, exp")
        ->check(CLI::IsMember({"normal", "poisson", "bernoulli", "exp"}));
    app.add_option("--sigma2", cfg.sigma2, "Known variance of the normal likelihood");
    app.add_option("--mu0", cfg.mu0, "Normal prior mean");
    app.add_option("--tau2", cfg.tau2, "Normal prior variance");
    app.add_option("--a", cfg.a, "Gamma/Beta prior parameter a");
    app.add_option("--b", cfg.b, "Gamma/Beta prior parameter b");
    app.add_option("--criterion", cfg.criterion, "apvc, acc, alc, alc-quantile, es, hpd")
        ->check(CLI::IsMember({"apvc", "acc", "alc", "alc-quantile", "es", "hpd"}));
    app.add_option("--eps", cfg.eps, "APVC bound on the expected posterior variance");
    app.add_option("--len", cfg.len, "Interval length l (ACC, ALC)");
    app.add_option("--alpha", cfg.alpha, "Error level alpha (default 0.05)");
    app.add_option("--theta1", cfg.theta1, "Effect-size threshold");
    app.add_option("--theta0", cfg.theta0, "True parameter value");
    app.add_option("--range", cfg.range, "Planning range lo:hi");
    app.add_option("--n", cfg.n, "Sample size");
    app.add_option("--m", cfg.m, "Monte Carlo replicates (default 1000)");
    app.add_option("--seed", cfg.seed, "Monte Carlo seed");
    app.add_option("--format", cfg.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    app.add_option("--out", cfg.out_path, "Write output to PATH instead of stdout");
    app.add_flag("--fresh-seed", cfg.fresh_seed, "Draw a fresh seed instead of the default");
    app.add_option("--workers", cfg.workers, "Threads for replicate/quadrature evaluation (default 1)");

    auto* size = app.add_subcommand("size", "Minimal sample size for a criterion over a planning range");
    auto* eval = app.add_subcommand("eval", "Asymptotic and exact expected functional at (theta0, n)");
    auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo estimate at (theta0, n)");
    auto* table = app.add_subcommand("table", "Reproduce comparison table 1, 2 or 3");
    table->add_option("which", cfg.table, "Table index")->required();
    for (auto* sub : {size, eval, simulate, table}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    }

    std::ofstream file;
    std::ostringstream buffer;
    try {
        detail::require_format(cfg);
        if (size->parsed()) {
            cmd_size(cfg, buffer);
        } else if (eval->parsed()) {
            cmd_eval(cfg, buffer);
        } else if (simulate->parsed()) {
            cmd_simulate(cfg, buffer);
        } else {
            cmd_table(cfg, buffer);
        }
    } catch (const CriterionUnsatisfiable& e) {
        err << "error: criterion unsatisfiable: " << e.what() << " (theta=" << format_number(e.theta()) << ")\n";
        return kUnsatisfiable;
    } catch (const AccuracyError& e) {
        err << "error: numerical accuracy: " << e.what() << " (estimate " << format_number(e.estimate()) << ")\n";
        return kNumerical;
    } catch (const ReplicateError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const UnsupportedShape& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    if (cfg.out_path.empty()) {
        out << buffer.str();
    } else {
        file.open(cfg.out_path, std::ios::binary);
        if (!file) {
            err << "error: cannot open " << cfg.out_path << " for writing\n";
            return kUsage;
        }
        file << buffer.str();
    }
    return kOk;
}

} // namespace bssd::cli
