#include "schatten/equilibrium.hpp"
#include "schatten/errors.hpp"
#include "schatten/exact_volumes.hpp"
#include "schatten/expansion.hpp"
#include "schatten/numerics.hpp"
#include "schatten/parallel.hpp"
#include "schatten/partition.hpp"
#include "schatten/ullman.hpp"
#include "schatten/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace schatten;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

/// Bad input discovered after parsing; maps to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

//------------------------------------------------------------------------------
// Argument parsing
//------------------------------------------------------------------------------

double parse_p(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF") return kInf;
    std::size_t used = 0;
    double p = 0.0;
    try {
        p = std::stod(text, &used);
    } catch (const std::exception&) {
        throw UsageError("p must be a decimal number or 'inf', got '" + text + "'");
    }
    if (used != text.size() || std::isnan(p)) throw UsageError("p must be a decimal number or 'inf', got '" + text + "'");
    if (p < 1.0) {
        throw UsageError("p must be >= 1: the Schatten p-norm is a norm, and the volume theory applies, only for p >= 1");
    }
    return p;
}

std::vector<double> parse_p_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_p(item));
    if (out.empty()) throw UsageError("empty p list");
    return out;
}

int parse_int(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || used == 0) throw UsageError("bad integer in " + what + ": '" + text + "'");
    return static_cast<int>(value);
}

/// "50:400:50" (inclusive range) or "50,100,200,400".
std::vector<int> parse_grid(const std::string& text) {
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        std::vector<int> parts;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ':');) parts.push_back(parse_int(item, "--grid"));
        if (parts.size() != 3 || parts[2] <= 0) throw UsageError("--grid range must be start:stop:step with step > 0");
        for (int n = parts[0]; n <= parts[1]; n += parts[2]) out.push_back(n);
    } else {
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_int(item, "--grid"));
    }
    if (out.empty()) throw UsageError("--grid is empty");
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 1) throw UsageError("--grid entries must be >= 1");
        if (i > 0 && out[i] <= out[i - 1]) throw UsageError("--grid must be strictly increasing");
    }
    return out;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SCHATTEN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("SCHATTEN_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 20240601;
}

//------------------------------------------------------------------------------
// Output
//------------------------------------------------------------------------------

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
    Json verdicts = Json::array();
};

struct Output {
    std::string format = "csv";
    std::string path;
    int digits = 12;
};

Json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

std::string format_number(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

Json rounded(const Json& cell, int digits) {
    if (!cell.is_number_float()) return cell;
    return std::strtod(format_number(cell.get<double>(), digits).c_str(), nullptr);
}

std::string csv_field(const Json& cell, int digits) {
    if (cell.is_null()) return "";
    if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
    if (cell.is_number_float()) return format_number(cell.get<double>(), digits);
    if (cell.is_number()) return cell.dump();
    std::string s = cell.is_string() ? cell.get<std::string>() : cell.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

void emit(const Json& config, const Table& table, const Output& out) {
    std::ostringstream os;
    if (out.format == "json") {
        Json rows = Json::array();
        for (const auto& row : table.rows) {
            Json obj = Json::object();
            for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = rounded(row[c], out.digits);
            rows.push_back(std::move(obj));
        }
        Json doc;
        doc["config"] = config;
        doc["rows"] = std::move(rows);
        doc["verdicts"] = table.verdicts;
        os << doc.dump(2) << '\n';
    } else {
        os << "# config " << config.dump() << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
        os << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_field(row[c], out.digits);
            os << '\n';
        }
    }
    if (out.path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream file(out.path, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open --out path '" + out.path + "'");
        file << os.str();
    }
}

Json p_json(double p) { return std::isinf(p) ? Json("inf") : Json(p); }

void warn_large_n(int n) {
    if (n > kAdvisoryMaxN) {
        std::cerr << "warning: n = " << n << " exceeds " << kAdvisoryMaxN
                  << "; Vandermonde weights degenerate and estimates may be unreliable\n";
    }
}

void require_beta_matrix(int beta) {
    if (beta != 1 && beta != 2 && beta != 4) throw UsageError("--beta must be 1, 2 or 4 for volumes");
}

//------------------------------------------------------------------------------
// Commands
//------------------------------------------------------------------------------

Table cmd_constants(const std::vector<double>& ps) {
    Table t;
    t.columns = {"p", "v_p", "alpha_p", "A_p", "entropy", "log_energy", "I_p", "I_p_reference", "defect"};
    for (double p : ps) {
        const double reference = kLn2 + (std::isinf(p) ? 0.0 : 1.5 / p);
        if (std::isinf(p)) {
            t.rows.push_back({"inf", nullptr, nullptr, num(constant_A(p)), nullptr, nullptr, nullptr, num(reference),
                              nullptr});
            continue;
        }
        const UllmanDistribution dist(p);
        const UllmanConstants k = dist.constants();
        t.rows.push_back({p, num(k.v_p), num(k.alpha_p), num(k.A_p), num(k.entropy), num(k.log_energy), num(k.I_p),
                          num(reference), num(std::fabs(k.I_p - reference))});
    }
    return t;
}

Table cmd_density(double p, int points) {
    if (std::isinf(p)) throw UsageError("density needs finite p");
    if (points < 2) throw UsageError("--points must be >= 2");
    const UllmanDistribution dist(p);
    Table t;
    t.columns = {"x", "density", "cdf"};
    for (int i = 0; i < points; ++i) {
        const double x = -1.0 + 2.0 * i / (points - 1);
        t.rows.push_back({x, num(dist.density(x)), num(dist.cdf(x))});
    }
    return t;
}

struct MethodResult {
    double log_value = 0.0;
    double std_error = 0.0;
    double ess = std::nan("");
    std::int64_t samples = 0;
};

Proposal parse_proposal(const std::string& name) {
    if (name == "generalized-gaussian") return Proposal::generalized_gaussian;
    if (name == "ullman-mixture") return Proposal::ullman_mixture;
    throw UsageError("--proposal must be generalized-gaussian or ullman-mixture");
}

MethodResult from_mc(const McEstimate& e) { return {e.log_value, e.std_error_log, e.effective_sample_size, e.sample_count}; }

Table cmd_volume(int n, double p, int beta, const std::string& method, std::int64_t samples, std::uint64_t seed,
                 Proposal proposal) {
    require_beta_matrix(beta);
    if (n < 1) throw UsageError("--n must be >= 1");
    warn_large_n(n);
    MethodResult r;
    if (method == "exact") {
        if (p == 2.0) {
            r.log_value = log_vol_euclidean(dim({n, beta, true}));
        } else if (std::isinf(p)) {
            r.log_value = log_vol_inf_sa(n, beta);
        } else {
            throw UsageError("exact volumes are unknown for p other than 2 and inf; use --method mc-lp, mc-z or quadrature");
        }
    } else {
        if (std::isinf(p)) throw UsageError("--method " + method + " needs finite p");
        const EnsembleParams params{n, p, static_cast<double>(beta)};
        if (method == "mc-lp") {
            r = from_mc(log_vol_sa_via_lp_mc(params, samples, RandomStream(seed, 1)));
        } else if (method == "mc-z") {
            const McEstimate z = log_Z_importance(params, samples, RandomStream(seed, 2), proposal);
            r = from_mc(z);
            r.log_value = log_vol_sa_via_Z(params, z.log_value);
        } else if (method == "quadrature") {
            if (n > 3) throw UsageError("--method quadrature supports n <= 3");
            r.log_value = log_vol_sa_via_Z(params, log_Z_quadrature(params));
        } else {
            throw UsageError("--method must be exact, mc-lp, mc-z or quadrature");
        }
    }
    Table t;
    t.columns = {"n", "p", "beta", "method", "log_volume", "std_error", "ess", "samples"};
    t.rows.push_back({n, p_json(p), beta, method, num(r.log_value), num(r.std_error), num(r.ess), r.samples});
    return t;
}

Table cmd_partition(int n, double p, double beta, const std::string& method, std::int64_t samples,
                    std::uint64_t seed, Proposal proposal) {
    if (n < 1) throw UsageError("--n must be >= 1");
    if (!(beta > 0.0)) throw UsageError("--beta must be positive");
    if (std::isinf(p)) throw UsageError("the partition function needs finite p");
    warn_large_n(n);
    const EnsembleParams params{n, p, beta};
    MethodResult r;
    if (method == "exact") {
        if (p != 2.0) throw UsageError("exact partition functions are known only for p = 2");
        r.log_value = log_Z_gaussian_exact(n, beta);
    } else if (method == "mc-z") {
        r = from_mc(log_Z_importance(params, samples, RandomStream(seed, 2), proposal));
    } else if (method == "quadrature") {
        if (n > 3) throw UsageError("--method quadrature supports n <= 3");
        r.log_value = log_Z_quadrature(params);
    } else {
        throw UsageError("--method must be exact, mc-z or quadrature for the partition function");
    }
    Table t;
    t.columns = {"n", "p", "beta", "method", "log_Z", "std_error", "ess", "samples"};
    t.rows.push_back({n, p, num(beta), method, num(r.log_value), num(r.std_error), num(r.ess), r.samples});
    return t;
}

Table cmd_equilibrium(const std::vector<int>& grid, double p, bool emit_points) {
    if (std::isinf(p) || p <= 1.0) throw UsageError("the equilibrium problem needs finite p > 1");
    const UllmanDistribution dist(p);
    Table t;
    if (emit_points) {
        if (grid.size() != 1) throw UsageError("--points needs a single n");
        if (grid[0] < 2) throw UsageError("--n must be >= 2");
        const OptimizeResult r = minimize(grid[0], p);
        t.columns = {"i", "x", "ullman_cdf", "empirical_cdf"};
        for (std::size_t i = 0; i < r.config.points.size(); ++i) {
            const double x = r.config.points[i];
            t.rows.push_back({static_cast<int>(i), x, num(dist.cdf(x)), (i + 0.5) / grid[0]});
        }
        return t;
    }
    t.columns = {"n", "p", "energy", "gradient_inf_norm", "iterations", "converged", "ks_distance"};
    for (int n : grid) {
        if (n < 2) throw UsageError("--n must be >= 2");
        const OptimizeResult r = minimize(n, p);
        t.rows.push_back({n, p, num(r.energy), num(r.gradient_inf_norm), r.iterations, r.converged,
                          num(empirical_kolmogorov_distance(r.config.points, dist))});
    }
    return t;
}

Table cmd_expansion(const std::string& target, const std::vector<int>& grid, double p, double beta) {
    if (std::isinf(p)) throw UsageError("expansions need finite p");
    const bool needs_three_halves = target == "vol-main1" || target == "z-ls";
    if (needs_three_halves && p < 1.5) {
        throw UsageError("--target " + target + " requires p >= 3/2 (hypothesis of the expansion)");
    }
    const bool matrix_beta = target == "vol-main1" || target == "cn";
    const int ibeta = static_cast<int>(beta);
    if (matrix_beta && (ibeta != beta || (ibeta != 1 && ibeta != 2 && ibeta != 4))) {
        throw UsageError("--target " + target + " requires beta in {1, 2, 4}");
    }
    if (!(beta > 0.0)) throw UsageError("--beta must be positive");

    std::optional<UllmanConstants> constants;
    if (needs_three_halves) constants = UllmanDistribution(p).constants();

    std::function<ExpansionValue(int)> expansion;
    std::function<double(int)> reference;
    Order omitted = Order::constant;
    if (target == "vol-main1") {
        expansion = [&](int n) { return expansion_logvol_main1(n, p, ibeta, *constants); };
        if (p == 2.0) reference = [&](int n) { return log_vol_euclidean(dim({n, ibeta, true})); };
        omitted = Order::n;
    } else if (target == "vol-main2") {
        expansion = [&](int n) { return expansion_logvol_main2(n, p); };
        if (p == 2.0) reference = [](int n) { return log_vol_euclidean(dim({n, 2, true})); };
    } else if (target == "z-ls") {
        expansion = [&](int n) { return expansion_logZ_LS(n, p, beta, *constants); };
        if (p == 2.0) reference = [&](int n) { return log_Z_gaussian_exact(n, beta); };
        omitted = Order::n;
    } else if (target == "z-ckm") {
        expansion = [&](int n) { return expansion_logZ_CKM(n, p); };
        if (p == 2.0) reference = [](int n) { return log_Z_gaussian_exact(n, 2.0); };
    } else if (target == "cn") {
        expansion = [&](int n) { return expansion_log_cn(n, ibeta); };
        reference = [&](int n) { return log_c_n(n, ibeta); };
    } else {
        throw UsageError("--target must be vol-main1, vol-main2, z-ls, z-ckm or cn");
    }

    Table t;
    t.columns = {"n",      "n2logn",    "n2",       "nlogn",      "n_term",
                 "logn",   "partial_sum", "reference", "residual", "normalized", "difference"};
    std::optional<ResidualSeries> series;
    if (reference) {
        std::map<int, double> values;
        for (int n : grid) values[n] = reference(n);
        series = residual_series(values, expansion, omitted);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const int n = grid[i];
        const ExpansionValue v = expansion(n);
        auto term = [&](Order o) -> Json {
            const auto it = v.terms.find(o);
            return it == v.terms.end() ? Json(nullptr) : num(it->second);
        };
        std::vector<Json> row{n, term(Order::n2logn), term(Order::n2), term(Order::nlogn), term(Order::n),
                              term(Order::logn), num(v.partial_sum)};
        if (series) {
            row.push_back(num(reference(n)));
            row.push_back(num(series->residuals[i]));
            row.push_back(num(series->normalized[i]));
            row.push_back(num(series->differences[i]));
        } else {
            row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr});
        }
        t.rows.push_back(std::move(row));
    }
    Json verdict;
    verdict["name"] = "trend";
    verdict["first_omitted"] = order_label(omitted);
    if (series) {
        verdict["pass"] = series->verdict;
        verdict["threshold"] = series->threshold;
        verdict["calibration"] = "empirical threshold; a finite grid cannot certify the asymptotic order";
        if (omitted == Order::constant) {
            verdict["constant_estimate"] = num(series->constant_estimate);
            verdict["constant_spread"] = num(series->constant_spread);
        }
    } else {
        verdict["pass"] = nullptr;
        verdict["calibration"] = "no exact reference for this p";
    }
    // Trailing verdict row for CSV consumers.
    std::vector<Json> last(t.columns.size(), nullptr);
    last[0] = "verdict";
    last[t.columns.size() - 1] = series ? Json(series->verdict ? "pass" : "fail") : Json("unavailable");
    t.rows.push_back(std::move(last));
    t.verdicts.push_back(std::move(verdict));
    return t;
}

Table validation_table(const ValidationReport& report) {
    Table t;
    t.columns = {"criterion", "check", "pass", "measured", "reference", "tolerance", "gating", "note"};
    for (const auto& r : report.rows) {
        t.rows.push_back({r.criterion, r.check, r.pass, num(r.measured), num(r.reference), num(r.tolerance), r.gating,
                          r.note});
    }
    for (const auto& v : report.verdicts) {
        t.verdicts.push_back({{"criterion", v.criterion}, {"pass", v.pass}});
    }
    return t;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Volumes of Schatten-class unit balls, Ullman equilibrium measures and beta-ensemble partition functions"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Output out;
    std::string p_text = "2";
    int n = 4;
    double beta = 2.0;
    std::string method = "exact";
    std::int64_t samples = 1000000;
    std::optional<std::uint64_t> seed_flag;
    std::string grid_text;
    unsigned threads = 0;
    std::string proposal_text = "generalized-gaussian";

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", out.path, "Write output to this file instead of stdout");
        sub->add_option("--digits", out.digits, "Significant digits in printed numbers")->check(CLI::Range(1, 17));
        sub->add_option("--threads", threads, "Worker threads (0 = all cores); results do not depend on it");
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", seed_flag, "Random seed (default: $SCHATTEN_SEED or 20240601)");
        sub->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::Range(std::int64_t{1000}, std::int64_t{1} << 40));
    };

    auto* constants = app.add_subcommand("constants", "Ullman constants v_p, alpha_p, A(p), entropy, log-energy");
    constants->add_option("--p", p_text, "Comma-separated list of p values (decimal or inf)");
    add_output(constants);

    int points = 201;
    auto* density = app.add_subcommand("density", "Ullman density and CDF on a uniform grid of [-1, 1]");
    density->add_option("--p", p_text, "p >= 1");
    density->add_option("--points", points, "Number of grid points");
    add_output(density);

    auto* volume = app.add_subcommand("volume", "ln vol of the self-adjoint Schatten p-ball");
    volume->add_option("--n", n, "Matrix size");
    volume->add_option("--p", p_text, "p >= 1 or inf");
    volume->add_option("--beta", beta, "1 (real), 2 (complex) or 4 (quaternion)");
    volume->add_option("--method", method, "exact, mc-lp, mc-z or quadrature")
        ->check(CLI::IsMember({"exact", "mc-lp", "mc-z", "quadrature"}));
    volume->add_option("--proposal", proposal_text, "Importance proposal for mc-z");
    add_seed(volume);
    add_output(volume);

    auto* partition = app.add_subcommand("partition", "ln Z of the beta-ensemble with potential v_p |x|^p");
    partition->add_option("--n", n, "Number of particles");
    partition->add_option("--p", p_text, "p >= 1");
    partition->add_option("--beta", beta, "Inverse temperature > 0");
    partition->add_option("--method", method, "exact (p = 2), mc-z or quadrature (n <= 3)")
        ->check(CLI::IsMember({"exact", "mc-lp", "mc-z", "quadrature"}));
    partition->add_option("--proposal", proposal_text, "Importance proposal for mc-z");
    add_seed(partition);
    add_output(partition);

    bool emit_points = false;
    auto* equilibrium = app.add_subcommand("equilibrium", "Weighted Fekete points and their distance to the Ullman law");
    equilibrium->add_option("--n", n, "Number of particles");
    equilibrium->add_option("--grid", grid_text, "List or range of n, e.g. 25,50,100 or 50:400:50");
    equilibrium->add_option("--p", p_text, "p > 1");
    equilibrium->add_flag("--points", emit_points, "Emit the particle positions for a single n");
    add_output(equilibrium);

    std::string target;
    auto* expansion = app.add_subcommand("expansion", "Large-n expansions against exact references");
    expansion->add_option("--target", target, "vol-main1, vol-main2, z-ls, z-ckm or cn")
        ->required()
        ->check(CLI::IsMember({"vol-main1", "vol-main2", "z-ls", "z-ckm", "cn"}));
    expansion->add_option("--grid", grid_text, "List or range of n (default 50:400:50)");
    expansion->add_option("--p", p_text, "p");
    expansion->add_option("--beta", beta, "beta");
    add_output(expansion);

    std::string level = "fast";
    double tamper = 1.0;
    auto* validate = app.add_subcommand("validate", "Run the acceptance checks and report pass/fail");
    validate->add_option("--level", level, "fast (deterministic identities) or full (adds Monte Carlo)")
        ->check(CLI::IsMember({"fast", "full"}));
    add_seed(validate);
    add_output(validate);
    // Fault injection for testing the validator itself.
    validate->add_option("--tamper-v-p", tamper)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : kExitUsage;
    }

    try {
        set_max_threads(threads);
        const std::uint64_t seed = seed_flag ? *seed_flag : default_seed();
        CLI::App* sub = app.get_subcommands().front();
        Json config;
        config["command"] = sub->get_name();
        Table table;

        if (sub == constants) {
            const auto ps = parse_p_list(p_text);
            Json plist = Json::array();
            for (double p : ps) plist.push_back(p_json(p));
            config["p"] = plist;
            table = cmd_constants(ps);
        } else if (sub == density) {
            const double p = parse_p(p_text);
            config["p"] = p_json(p);
            config["points"] = points;
            table = cmd_density(p, points);
        } else if (sub == volume || sub == partition) {
            const double p = parse_p(p_text);
            const Proposal proposal = parse_proposal(proposal_text);
            config["n"] = n;
            config["p"] = p_json(p);
            config["beta"] = beta;
            config["method"] = method;
            if (method == "mc-lp" || method == "mc-z") {
                config["samples"] = samples;
                config["seed"] = seed;
            }
            if (method == "mc-z") config["proposal"] = proposal_text;
            if (sub == volume) {
                if (beta != 1.0 && beta != 2.0 && beta != 4.0) throw UsageError("--beta must be 1, 2 or 4 for volumes");
                table = cmd_volume(n, p, static_cast<int>(beta), method, samples, seed, proposal);
            } else {
                table = cmd_partition(n, p, beta, method, samples, seed, proposal);
            }
        } else if (sub == equilibrium) {
            const double p = parse_p(p_text);
            const std::vector<int> grid = grid_text.empty() ? std::vector<int>{n} : parse_grid(grid_text);
            config["p"] = p_json(p);
            config["grid"] = grid;
            config["points"] = emit_points;
            table = cmd_equilibrium(grid, p, emit_points);
        } else if (sub == expansion) {
            const double p = parse_p(p_text);
            const std::vector<int> grid = parse_grid(grid_text.empty() ? "50:400:50" : grid_text);
            config["target"] = target;
            config["p"] = p_json(p);
            config["beta"] = beta;
            config["grid"] = grid;
            table = cmd_expansion(target, grid, p, beta);
        } else if (sub == validate) {
            ValidationOptions opt;
            opt.level = level == "full" ? ValidationLevel::full : ValidationLevel::fast;
            opt.seed = seed;
            opt.samples = samples;
            opt.v_p_scale = tamper;
            const ValidationReport report = run_validation(opt);
            table = validation_table(report);
            emit(report.to_json()["config"], table, out);
            if (!report.all_pass()) {
                std::cerr << "validation failed:";
                for (const auto& name : report.failed_checks()) std::cerr << ' ' << name;
                std::cerr << '\n';
                return kExitFailure;
            }
            return kExitOk;
        }
        emit(config, table, out);
        return kExitOk;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
