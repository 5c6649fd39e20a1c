// Command-line front end for the regime-switching quadratic term structure
// pricer. Subcommands: price, curve, simulate, validate, echo. All state
// comes from the config file and flags (no environment variables), and fixed
// seeds give byte-identical output across runs.
//
// Exit codes: 0 success, 1 failed validation reports, 2 config/usage errors,
// 3 divergent expectation, 4 path budget exceeded.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rsqtsm/config.hpp"
#include "rsqtsm/oracle.hpp"
#include "rsqtsm/pricing.hpp"
#include "rsqtsm/rng.hpp"

namespace {

using nlohmann::ordered_json;
using namespace rsqtsm;

std::string sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

enum class OutputFormat { table, csv, json };

OutputFormat parse_format(const std::string& s) {
    if (s == "table") return OutputFormat::table;
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw CLI::ValidationError("--output must be one of table|csv|json");
}

struct CommonFlags {
    std::string config_path;
    std::string output = "table";
    std::optional<int> k;
    std::optional<double> s0;
    std::optional<int> regime;  // 1-based
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_paths;
    std::optional<std::uint64_t> mc_sims;
    std::optional<int> threads;
    std::string mode = "exact";
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_pricing_flags) {
    cmd->add_option("--config", f.config_path, "model config file (JSON)")->required();
    cmd->add_option("--output", f.output, "output format: table|csv|json");
    cmd->add_option("--seed", f.seed, "override engine.seed");
    cmd->add_option("--threads", f.threads, "worker threads for the engine");
    if (with_pricing_flags) {
        cmd->add_option("--k", f.k, "valuation time (default: initial.time)");
        cmd->add_option("--s0", f.s0, "asset level at k (default: initial.asset)");
        cmd->add_option("--regime", f.regime, "regime at k, 1-based (default: initial.regime)");
        cmd->add_option("--mode", f.mode, "pricing mode: exact|mc");
        cmd->add_option("--max-paths", f.max_paths, "override engine.max_paths");
        cmd->add_option("--mc-sims", f.mc_sims, "override engine.mc_sims");
    }
}

struct Resolved {
    ModelConfig config;
    MarketState state;
    PricingOptions options;
};

Resolved resolve(const CommonFlags& f) {
    ModelConfig config = load_config(f.config_path);
    MarketState state = config.initial;
    if (f.k) state.time = *f.k;
    if (f.s0) state.asset = *f.s0;
    if (f.regime) {
        if (*f.regime < 1 || *f.regime > config.params.num_regimes())
            throw ValidationError("--regime must lie in [1, num_regimes]");
        state.regime = *f.regime - 1;
    }
    if (state.time < 0) throw ValidationError("--k must be >= 0");

    PricingOptions options = config.pricing_options();
    if (f.seed) options.seed = *f.seed;
    if (f.max_paths) options.max_paths = *f.max_paths;
    if (f.mc_sims) options.mc_paths = *f.mc_sims;
    if (f.threads) options.threads = *f.threads;
    if (f.mode == "mc")
        options.mode = PriceMode::chain_monte_carlo;
    else if (f.mode != "exact")
        throw ValidationError("--mode must be exact or mc");
    if (f.seed) config.engine.seed = *f.seed;
    if (f.mc_sims) config.engine.mc_sims = *f.mc_sims;
    if (f.threads) config.engine.threads = *f.threads;
    return Resolved{std::move(config), state, options};
}

double yield_of(const PriceResult& r) {
    if (r.maturity == r.valuation_time) return 0.0;
    return -std::log(r.price) / static_cast<double>(r.maturity - r.valuation_time);
}

void print_price(const PriceResult& r, OutputFormat format) {
    switch (format) {
        case OutputFormat::csv:
            std::cout << "k,T,price,yield\n"
                      << r.valuation_time << "," << r.maturity << "," << sig12(r.price) << ","
                      << sig12(yield_of(r)) << "\n";
            break;
        case OutputFormat::json: {
            ordered_json j;
            j["k"] = r.valuation_time;
            j["T"] = r.maturity;
            j["price"] = sig12(r.price);
            j["yield"] = sig12(yield_of(r));
            j["mode"] = to_string(r.mode);
            j["num_paths_used"] = r.num_paths_used;
            if (r.mode == PriceMode::chain_monte_carlo)
                j["standard_error"] = sig12(r.standard_error);
            std::cout << j.dump(2) << "\n";
            break;
        }
        case OutputFormat::table:
            std::cout << "zero-coupon bond price\n"
                      << "  k      " << r.valuation_time << "\n"
                      << "  T      " << r.maturity << "\n"
                      << "  price  " << sig12(r.price) << "\n"
                      << "  yield  " << sig12(yield_of(r)) << "\n"
                      << "  mode   " << to_string(r.mode) << "\n"
                      << "  paths  " << r.num_paths_used << "\n";
            if (r.mode == PriceMode::chain_monte_carlo)
                std::cout << "  se     " << sig12(r.standard_error) << "\n";
            break;
    }
}

int cmd_price(const CommonFlags& flags, std::optional<int> maturity) {
    const Resolved r = resolve(flags);
    const int T = maturity.value_or(r.config.horizon);
    const PriceResult result =
        price_with_options(r.config.schedule, r.config.params, r.state, T, r.options);
    print_price(result, parse_format(flags.output));
    return 0;
}

int cmd_curve(const CommonFlags& flags, std::vector<int> maturities) {
    const Resolved r = resolve(flags);
    if (maturities.empty())
        for (int t = r.state.time + 1; t <= r.config.horizon; ++t) maturities.push_back(t);
    const YieldCurve curve =
        yield_curve(r.config.schedule, r.config.params, r.state, maturities, r.options);
    const OutputFormat format = parse_format(flags.output);
    switch (format) {
        case OutputFormat::csv:
            std::cout << "k,T,price,yield\n";
            for (const auto& p : curve.points)
                std::cout << curve.valuation_time << "," << p.maturity << "," << sig12(p.price)
                          << "," << sig12(p.yield) << "\n";
            break;
        case OutputFormat::json: {
            ordered_json j;
            j["k"] = curve.valuation_time;
            ordered_json pts = ordered_json::array();
            for (const auto& p : curve.points) {
                ordered_json jp;
                jp["T"] = p.maturity;
                jp["price"] = sig12(p.price);
                jp["yield"] = sig12(p.yield);
                pts.push_back(jp);
            }
            j["points"] = pts;
            std::cout << j.dump(2) << "\n";
            break;
        }
        case OutputFormat::table:
            std::cout << "yield curve at k = " << curve.valuation_time << "\n";
            std::cout << "  T      price            yield\n";
            for (const auto& p : curve.points) {
                char line[96];
                std::snprintf(line, sizeof(line), "  %-6d %-16s %s\n", p.maturity,
                              sig12(p.price).c_str(), sig12(p.yield).c_str());
                std::cout << line;
            }
            break;
    }
    return 0;
}

int cmd_simulate(const CommonFlags& flags, std::optional<int> horizon) {
    const Resolved r = resolve(flags);
    const int T = horizon.value_or(r.config.horizon);
    const std::uint64_t seed = flags.seed.value_or(r.config.engine.seed);
    const ChainPath chain =
        simulate_chain(r.config.schedule, r.state.time, r.state.regime, T, seed);
    const std::vector<PathPoint> points =
        simulate_asset_path(r.config.params, chain, r.state.asset, seed);
    const OutputFormat format = parse_format(flags.output);
    switch (format) {
        case OutputFormat::csv:
            std::cout << "k,regime,S,r\n";
            for (std::size_t j = 0; j < points.size(); ++j)
                std::cout << points[j].time << "," << chain.states[j] + 1 << ","
                          << sig12(points[j].asset) << "," << sig12(points[j].rate) << "\n";
            break;
        case OutputFormat::json: {
            ordered_json rows = ordered_json::array();
            for (std::size_t j = 0; j < points.size(); ++j) {
                ordered_json jp;
                jp["k"] = points[j].time;
                jp["regime"] = chain.states[j] + 1;
                jp["S"] = sig12(points[j].asset);
                jp["r"] = sig12(points[j].rate);
                rows.push_back(jp);
            }
            std::cout << rows.dump(2) << "\n";
            break;
        }
        case OutputFormat::table:
            std::cout << "simulated path (seed " << seed << ")\n";
            std::cout << "  k      regime S                r\n";
            for (std::size_t j = 0; j < points.size(); ++j) {
                char line[112];
                std::snprintf(line, sizeof(line), "  %-6d %-6d %-16s %s\n", points[j].time,
                              chain.states[j] + 1, sig12(points[j].asset).c_str(),
                              sig12(points[j].rate).c_str());
                std::cout << line;
            }
            break;
    }
    return 0;
}

int cmd_validate(const CommonFlags& flags) {
    const Resolved r = resolve(flags);
    SuiteOptions suite = r.config.suite_options();
    if (flags.seed) suite.seed = *flags.seed;
    if (flags.mc_sims) suite.mc_sims = *flags.mc_sims;
    if (flags.threads) suite.threads = *flags.threads;
    const std::vector<OracleReport> reports = validation_suite(
        r.config.schedule, r.config.params, r.state, r.config.horizon, suite);

    const OutputFormat format = parse_format(flags.output);
    std::size_t passed = 0;
    for (const auto& rep : reports) passed += rep.pass ? 1 : 0;

    if (format == OutputFormat::csv) {
        std::cout << "target,label,closed_form,oracle_value,standard_error,tolerance,pass\n";
        for (const auto& rep : reports)
            std::cout << to_string(rep.target) << "," << rep.label << ","
                      << sig12(rep.closed_form) << "," << sig12(rep.oracle_value) << ","
                      << sig12(rep.standard_error) << "," << sig12(rep.tolerance_used) << ","
                      << (rep.pass ? "1" : "0") << "\n";
    } else if (format == OutputFormat::json) {
        ordered_json rows = ordered_json::array();
        for (const auto& rep : reports) {
            ordered_json j;
            j["target"] = to_string(rep.target);
            j["label"] = rep.label;
            j["closed_form"] = sig12(rep.closed_form);
            j["oracle_value"] = sig12(rep.oracle_value);
            j["standard_error"] = sig12(rep.standard_error);
            j["tolerance"] = sig12(rep.tolerance_used);
            j["pass"] = rep.pass;
            rows.push_back(j);
        }
        ordered_json out;
        out["reports"] = rows;
        out["passed"] = passed;
        out["total"] = reports.size();
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& rep : reports) {
            char line[192];
            std::snprintf(line, sizeof(line), "  [%s] %-36s closed=%-16s oracle=%-16s se=%s\n",
                          rep.pass ? "PASS" : "FAIL", rep.label.c_str(),
                          sig12(rep.closed_form).c_str(), sig12(rep.oracle_value).c_str(),
                          sig12(rep.standard_error).c_str());
            std::cout << line;
        }
        std::cout << "validation: " << passed << "/" << reports.size() << " reports passed\n";
    }
    return passed == reports.size() ? 0 : 1;
}

int cmd_echo(const CommonFlags& flags) {
    const ModelConfig config = load_config(flags.config_path);
    std::cout << echo_config(config);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"regime-switching quadratic term structure bond pricer"};
    app.require_subcommand(1);

    CommonFlags price_flags, curve_flags, sim_flags, val_flags, echo_flags;
    std::optional<int> price_maturity;
    std::vector<int> curve_maturities;
    std::optional<int> sim_horizon;

    CLI::App* price = app.add_subcommand("price", "price a zero-coupon bond");
    add_common(price, price_flags, true);
    price->add_option("--maturity", price_maturity, "maturity T (default: horizon)");

    CLI::App* curve = app.add_subcommand("curve", "prices and yields across maturities");
    add_common(curve, curve_flags, true);
    curve->add_option("--maturity", curve_maturities,
                      "maturity (repeatable; default: every period to horizon)");

    CLI::App* simulate = app.add_subcommand("simulate", "simulate one regime/asset/rate path");
    add_common(simulate, sim_flags, true);
    simulate->add_option("--horizon", sim_horizon, "simulation end time (default: horizon)");

    CLI::App* validate = app.add_subcommand("validate", "run the oracle validation suite");
    add_common(validate, val_flags, true);

    CLI::App* echo = app.add_subcommand("echo", "print the normalized config with defaults");
    echo->add_option("--config", echo_flags.config_path, "model config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (price->parsed()) return cmd_price(price_flags, price_maturity);
        if (curve->parsed()) return cmd_curve(curve_flags, curve_maturities);
        if (simulate->parsed()) return cmd_simulate(sim_flags, sim_horizon);
        if (validate->parsed()) return cmd_validate(val_flags);
        if (echo->parsed()) return cmd_echo(echo_flags);
    } catch (const DivergentExpectation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const QuadratureDiverged& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const PathBudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
