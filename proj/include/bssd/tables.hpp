#pragma once

// Comparison tables of exact, asymptotic and simulated expected functionals,
// with CSV and aligned-text rendering.

#include "bssd/criteria.hpp"
#include "bssd/errors.hpp"
#include "bssd/exact.hpp"
#include "bssd/functional.hpp"
#include "bssd/models.hpp"
#include "bssd/montecarlo.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace bssd {

struct TableRow {
    std::string criterion;
    std::string model;
    std::string params;
    double theta0 = 0.0;
    std::int64_t n = 0;
    std::optional<double> g_hat;
    std::optional<double> g_hat_se;
    std::optional<double> g_exact;
    double g_star = 0.0;

    friend bool operator==(const TableRow&, const TableRow&) = default;
};

inline constexpr std::string_view kCsvHeader = "criterion,model,params,theta0,n,g_hat,g_hat_se,g_exact,g_star";
inline constexpr std::uint64_t kDefaultSeed = 20060301;
inline constexpr std::array<std::int64_t, 4> kTableSampleSizes{10, 30, 50, 100};

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// Built-in parameter rows

struct NormalNormalRow {
    std::string label;
    double theta0, mu0, sigma2, tau2;
};

inline const std::array<NormalNormalRow, 3>& table1_parameters() {
    static const std::array<NormalNormalRow, 3> rows{{{"eta1", 0.5, 0.25, 0.20, 0.30},
                                                      {"eta2", 5.0, 3.5, 2.5, 3.0},
                                                      {"eta3", 25.0, 20.0, 18.0, 15.0}}};
    return rows;
}

struct PoissonGammaRow {
    std::string label;
    double theta0, a, b;
};

inline const std::array<PoissonGammaRow, 3>& table2_poisson_parameters() {
    static const std::array<PoissonGammaRow, 3> rows{
        {{"eta1", 0.5, 2.5, 3.5}, {"eta2", 1.6, 8.0, 7.5}, {"eta3", 1.5, 10.0, 12.0}}};
    return rows;
}

inline const std::array<double, 3>& table2_binomial_parameters() {
    static const std::array<double, 3> rows{0.20, 0.5, 0.75};
    return rows;
}

inline const std::array<double, 3>& table3_parameters() {
    static const std::array<double, 3> rows{0.25, 0.50, 0.75};
    return rows;
}

inline const BetaPrior& table3_prior() {
    static const BetaPrior prior{1.5, 1.5};
    return prior;
}

// ---------------------------------------------------------------------------
// Table builders

/// Normal-Normal, exact vs asymptotic: APVC, expected 0.05-quantile and
/// centered coverage with len = theta0 / 10.
inline std::vector<TableRow> build_table1() {
    std::vector<TableRow> rows;
    for (const auto& eta : table1_parameters()) {
        const NormalKnownVariance lik{eta.sigma2};
        const NormalPrior prior{eta.mu0, eta.tau2};
        const std::string params = eta.label + ";mu0=" + format_number(eta.mu0) +
                                   ";sigma2=" + format_number(eta.sigma2) + ";tau2=" + format_number(eta.tau2);
        const std::array<Functional, 3> functionals{Variance{}, Quantile{0.05}, CenteredMass{eta.theta0 / 10.0}};
        for (const auto n : kTableSampleSizes) {
            const double nn = static_cast<double>(n);
            for (const auto& f : functionals) {
                TableRow row;
                row.criterion = functional_name(f);
                row.model = "normal-normal";
                row.params = params;
                row.theta0 = eta.theta0;
                row.n = n;
                row.g_exact = exact_g_normal(f, lik, prior, eta.theta0, nn).value.value;
                row.g_star = g_star(f, lik, eta.theta0, nn).value;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

/// APVC for Poisson-Gamma and Binomial-Uniform.
inline std::vector<TableRow> build_table2() {
    std::vector<TableRow> rows;
    for (const auto& eta : table2_poisson_parameters()) {
        for (const auto n : kTableSampleSizes) {
            const double nn = static_cast<double>(n);
            TableRow row;
            row.criterion = "apvc";
            row.model = "poisson-gamma";
            row.params = eta.label + ";a=" + format_number(eta.a) + ";b=" + format_number(eta.b);
            row.theta0 = eta.theta0;
            row.n = n;
            row.g_exact = exact_apvc_poisson_gamma(eta.a, eta.b, eta.theta0, nn).value.value;
            row.g_star = g_star(Variance{}, Poisson{}, eta.theta0, nn).value;
            rows.push_back(std::move(row));
        }
    }
    int index = 1;
    for (const double theta0 : table2_binomial_parameters()) {
        for (const auto n : kTableSampleSizes) {
            const double nn = static_cast<double>(n);
            TableRow row;
            row.criterion = "apvc";
            row.model = "binomial-uniform";
            row.params = "eta" + std::to_string(index);
            row.theta0 = theta0;
            row.n = n;
            row.g_exact = exact_apvc_binomial_uniform(theta0, nn).value.value;
            row.g_star = g_star(Variance{}, Bernoulli{}, theta0, nn).value;
            rows.push_back(std::move(row));
        }
        ++index;
    }
    return rows;
}

struct Table3Options {
    std::size_t m = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::size_t workers = 1;
    std::size_t oracle_nodes = 2001;
};

/// Exponential likelihood with a Beta(3/2, 3/2) prior: simulated G-hat,
/// quadrature oracle and G* for APVC, the 95% HPD endpoints and the 0.05
/// ALC length. The seed of cell (theta0 index i, n index k) is
/// seed + 16 i + k.
inline std::vector<TableRow> build_table3(const Table3Options& options = {}) {
    std::vector<TableRow> rows;
    const Model model{ExponentialRate{}, table3_prior()};
    const std::array<Functional, 3> functionals{Variance{}, Hpd{0.95}, IntervalLength{0.05}};
    const std::string params = "a=" + format_number(table3_prior().a) + ";b=" + format_number(table3_prior().b);
    for (std::size_t i = 0; i < table3_parameters().size(); ++i) {
        const double theta0 = table3_parameters()[i];
        for (std::size_t k = 0; k < kTableSampleSizes.size(); ++k) {
            const std::int64_t n = kTableSampleSizes[k];
            const std::uint64_t cell_seed = options.seed + 16 * i + k;
            const auto mc = simulate_g(model, theta0, n, options.m, functionals, cell_seed, options.workers);
            const auto oracle =
                oracle_expbeta(functionals, table3_prior(), theta0, n, options.oracle_nodes, options.workers);
            auto make_row = [&](std::string criterion) {
                TableRow row;
                row.criterion = std::move(criterion);
                row.model = "exp-beta";
                row.params = params;
                row.theta0 = theta0;
                row.n = n;
                return row;
            };
            const double nn = static_cast<double>(n);
            TableRow var = make_row("apvc");
            var.g_hat = mc[0].mean;
            var.g_hat_se = mc[0].std_err;
            var.g_exact = oracle[0].value.value;
            var.g_star = g_star(Variance{}, ExponentialRate{}, theta0, nn).value;

            const FunctionalValue hpd_star = g_star(Hpd{0.95}, ExponentialRate{}, theta0, nn);
            TableRow lo = make_row("hpd-lo");
            lo.g_hat = mc[1].mean;
            lo.g_hat_se = mc[1].std_err;
            lo.g_exact = oracle[1].value.value;
            lo.g_star = hpd_star.value;
            TableRow hi = make_row("hpd-hi");
            hi.g_hat = mc[1].upper_mean;
            hi.g_hat_se = mc[1].upper_std_err;
            hi.g_exact = oracle[1].value.upper;
            hi.g_star = *hpd_star.upper;

            TableRow alc = make_row("alc");
            alc.g_hat = mc[2].mean;
            alc.g_hat_se = mc[2].std_err;
            alc.g_exact = oracle[2].value.value;
            alc.g_star = g_star(IntervalLength{0.05}, ExponentialRate{}, theta0, nn).value;

            for (auto* r : {&var, &lo, &hi, &alc}) rows.push_back(std::move(*r));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Rendering

inline void write_csv(std::ostream& out, const std::vector<TableRow>& rows) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.criterion << ',' << r.model << ',' << r.params << ',' << format_number(r.theta0) << ',' << r.n << ','
            << opt(r.g_hat) << ',' << opt(r.g_hat_se) << ',' << opt(r.g_exact) << ',' << format_number(r.g_star)
            << '\n';
    }
}

namespace detail {

inline double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigurationError("csv: malformed number '" + std::string(s) + "'");
    }
    return v;
}

inline std::optional<double> parse_optional(std::string_view s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

} // namespace detail

inline std::vector<TableRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ConfigurationError("csv: missing or unexpected header");
    }
    std::vector<TableRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> cells;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            cells.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (cells.size() != 9) {
            throw ConfigurationError("csv: expected 9 fields, got " + std::to_string(cells.size()));
        }
        TableRow r;
        r.criterion = cells[0];
        r.model = cells[1];
        r.params = cells[2];
        r.theta0 = detail::parse_double(cells[3]);
        std::int64_t n = 0;
        const auto res = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(), n);
        if (res.ec != std::errc{} || res.ptr != cells[4].data() + cells[4].size()) {
            throw ConfigurationError("csv: malformed n");
        }
        r.n = n;
        r.g_hat = detail::parse_optional(cells[5]);
        r.g_hat_se = detail::parse_optional(cells[6]);
        r.g_exact = detail::parse_optional(cells[7]);
        r.g_star = detail::parse_double(cells[8]);
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Aligned text, values to four decimals; missing cells print as "-".
inline void write_text(std::ostream& out, const std::vector<TableRow>& rows) {
    std::size_t params_width = 6;
    for (const auto& r : rows) params_width = std::max(params_width, r.params.size());
    auto cell = [](const std::optional<double>& v) {
        if (!v) return std::string("-");
        std::ostringstream s;
        s << std::fixed << std::setprecision(4) << *v;
        return s.str();
    };
    out << std::left << std::setw(13) << "criterion" << std::setw(18) << "model" << std::setw(static_cast<int>(params_width) + 2)
        << "params" << std::right << std::setw(8) << "theta0" << std::setw(6) << "n" << std::setw(12) << "g_hat"
        << std::setw(12) << "g_hat_se" << std::setw(12) << "g_exact" << std::setw(12) << "g_star" << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(13) << r.criterion << std::setw(18) << r.model
            << std::setw(static_cast<int>(params_width) + 2) << r.params << std::right << std::setw(8)
            << format_number(r.theta0) << std::setw(6) << r.n << std::setw(12) << cell(r.g_hat) << std::setw(12)
            << cell(r.g_hat_se) << std::setw(12) << cell(r.g_exact) << std::setw(12) << cell(r.g_star) << '\n';
    }
}

} // namespace bssd
