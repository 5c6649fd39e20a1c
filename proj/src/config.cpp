#include "rsqtsm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rsqtsm {

namespace {

using nlohmann::ordered_json;

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& origin,
                            const std::string& context) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(origin, 0, "missing field '" + context + key + "'");
    return obj.at(key);
}

double require_number(const ordered_json& obj, const char* key, const std::string& origin,
                      const std::string& context) {
    const auto& v = require(obj, key, origin, context);
    if (!v.is_number())
        throw ParseError(origin, 0, "field '" + context + key + "' must be a number");
    return v.get<double>();
}

std::int64_t require_integer(const ordered_json& obj, const char* key, const std::string& origin,
                             const std::string& context) {
    const auto& v = require(obj, key, origin, context);
    if (!v.is_number_integer())
        throw ParseError(origin, 0, "field '" + context + key + "' must be an integer");
    return v.get<std::int64_t>();
}

TransitionMatrix read_matrix(const ordered_json& node, const std::string& origin,
                             const std::string& context) {
    if (!node.is_array())
        throw ParseError(origin, 0, "'" + context + "' must be an array of rows");
    TransitionMatrix m;
    for (const auto& row : node) {
        if (!row.is_array())
            throw ParseError(origin, 0, "'" + context + "' rows must be arrays");
        std::vector<double> r;
        for (const auto& v : row) {
            if (!v.is_number())
                throw ParseError(origin, 0, "'" + context + "' entries must be numbers");
            r.push_back(v.get<double>());
        }
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

ModelConfig parse_config(const std::string& json_text, const std::string& origin) {
    ordered_json root;
    try {
        root = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin, line_of_byte(json_text, e.byte), e.what());
    }

    const auto& model = require(root, "model", origin, "");
    const int num_regimes =
        static_cast<int>(require_integer(model, "num_regimes", origin, "model."));
    const int horizon = static_cast<int>(require_integer(model, "horizon", origin, "model."));
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    if (num_regimes < 1) throw ValidationError("num_regimes must be >= 1");

    const auto& regimes = require(model, "regimes", origin, "model.");
    if (!regimes.is_array() || regimes.size() != static_cast<std::size_t>(num_regimes))
        throw ParseError(origin, 0, "'model.regimes' must list exactly num_regimes entries");
    std::vector<RegimeParams::Regime> regime_list;
    regime_list.reserve(regimes.size());
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        const std::string ctx = "model.regimes[" + std::to_string(i) + "].";
        RegimeParams::Regime r;
        r.kappa = require_number(regimes[i], "kappa", origin, ctx);
        r.mu = require_number(regimes[i], "mu", origin, ctx);
        r.sigma = require_number(regimes[i], "sigma", origin, ctx);
        r.a0 = require_number(regimes[i], "a0", origin, ctx);
        r.a1 = require_number(regimes[i], "a1", origin, ctx);
        r.a2 = require_number(regimes[i], "a2", origin, ctx);
        regime_list.push_back(r);
    }

    const bool has_constant = model.contains("transition");
    const bool has_per_step = model.contains("transition_per_step");
    if (has_constant == has_per_step)
        throw ParseError(origin, 0,
                         "specify exactly one of 'model.transition' (constant matrix) and "
                         "'model.transition_per_step' (list of matrices)");
    std::vector<TransitionMatrix> steps;
    if (has_constant) {
        const TransitionMatrix m = read_matrix(model.at("transition"), origin, "model.transition");
        steps.assign(static_cast<std::size_t>(std::max(horizon - 1, 1)), m);
    } else {
        const auto& list = model.at("transition_per_step");
        if (!list.is_array())
            throw ParseError(origin, 0, "'model.transition_per_step' must be an array");
        for (std::size_t k = 0; k < list.size(); ++k)
            steps.push_back(read_matrix(list[k], origin,
                                        "model.transition_per_step[" + std::to_string(k) + "]"));
        if (steps.size() < static_cast<std::size_t>(horizon - 1))
            throw ValidationError("transition_per_step has " + std::to_string(steps.size()) +
                                  " matrices; pricing to horizon " + std::to_string(horizon) +
                                  " requires at least " + std::to_string(horizon - 1));
    }

    const auto& initial = require(root, "initial", origin, "");
    MarketState state;
    state.time = static_cast<int>(require_integer(initial, "time", origin, "initial."));
    state.asset = require_number(initial, "asset", origin, "initial.");
    const int regime_1based =
        static_cast<int>(require_integer(initial, "regime", origin, "initial."));
    if (state.time < 0 || state.time > horizon)
        throw ValidationError("initial.time must lie in [0, horizon]");
    if (!std::isfinite(state.asset)) throw ValidationError("initial.asset must be finite");
    if (regime_1based < 1 || regime_1based > num_regimes)
        throw ValidationError("initial.regime must lie in [1, num_regimes]");
    state.regime = regime_1based - 1;

    EngineSettings engine;
    if (root.contains("engine")) {
        const auto& e = root.at("engine");
        if (!e.is_object()) throw ParseError(origin, 0, "'engine' must be an object");
        if (e.contains("max_paths"))
            engine.max_paths = static_cast<std::uint64_t>(
                require_integer(e, "max_paths", origin, "engine."));
        if (e.contains("mc_sims"))
            engine.mc_sims =
                static_cast<std::uint64_t>(require_integer(e, "mc_sims", origin, "engine."));
        if (e.contains("seed"))
            engine.seed =
                static_cast<std::uint64_t>(require_integer(e, "seed", origin, "engine."));
        if (e.contains("quad_tolerance"))
            engine.quad_tolerance = require_number(e, "quad_tolerance", origin, "engine.");
        if (e.contains("exact_tolerance"))
            engine.exact_tolerance = require_number(e, "exact_tolerance", origin, "engine.");
        if (e.contains("mc_fallback")) {
            const auto& v = e.at("mc_fallback");
            if (!v.is_boolean())
                throw ParseError(origin, 0, "field 'engine.mc_fallback' must be a boolean");
            engine.mc_fallback = v.get<bool>();
        }
        if (e.contains("threads"))
            engine.threads = static_cast<int>(require_integer(e, "threads", origin, "engine."));
    }
    if (engine.threads < 1) throw ValidationError("engine.threads must be >= 1");
    if (engine.mc_sims < 1) throw ValidationError("engine.mc_sims must be >= 1");
    if (!(engine.quad_tolerance > 0.0) || !(engine.exact_tolerance > 0.0))
        throw ValidationError("engine tolerances must be positive");

    try {
        RegimeParams params(regime_list);
        TransitionSchedule schedule(num_regimes, steps);
        return ModelConfig{horizon,
                           std::move(params),
                           std::move(schedule),
                           has_constant,
                           state,
                           engine};
    } catch (const Error& e) {
        throw ValidationError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string echo_config(const ModelConfig& config) {
    ordered_json root;
    ordered_json model;
    model["num_regimes"] = config.params.num_regimes();
    model["horizon"] = config.horizon;
    ordered_json regimes = ordered_json::array();
    for (int i = 0; i < config.params.num_regimes(); ++i) {
        const auto& r = config.params.regime(i);
        ordered_json jr;
        jr["kappa"] = r.kappa;
        jr["mu"] = r.mu;
        jr["sigma"] = r.sigma;
        jr["a0"] = r.a0;
        jr["a1"] = r.a1;
        jr["a2"] = r.a2;
        regimes.push_back(jr);
    }
    model["regimes"] = regimes;

    const int n = config.schedule.num_regimes();
    const auto matrix_json = [n](const std::vector<double>& flat) {
        ordered_json rows = ordered_json::array();
        for (int i = 0; i < n; ++i) {
            ordered_json row = ordered_json::array();
            for (int j = 0; j < n; ++j) row.push_back(flat[static_cast<std::size_t>(i) * n + j]);
            rows.push_back(row);
        }
        return rows;
    };
    if (config.constant_transition) {
        model["transition"] = matrix_json(config.schedule.matrix(0));
    } else {
        ordered_json list = ordered_json::array();
        for (std::size_t k = 0; k < config.schedule.num_steps(); ++k)
            list.push_back(matrix_json(config.schedule.matrix(static_cast<int>(k))));
        model["transition_per_step"] = list;
    }
    root["model"] = model;

    ordered_json initial;
    initial["time"] = config.initial.time;
    initial["asset"] = config.initial.asset;
    initial["regime"] = config.initial.regime + 1;
    root["initial"] = initial;

    ordered_json engine;
    engine["max_paths"] = config.engine.max_paths;
    engine["mc_sims"] = config.engine.mc_sims;
    engine["seed"] = config.engine.seed;
    engine["quad_tolerance"] = config.engine.quad_tolerance;
    engine["exact_tolerance"] = config.engine.exact_tolerance;
    engine["mc_fallback"] = config.engine.mc_fallback;
    engine["threads"] = config.engine.threads;
    root["engine"] = engine;

    return root.dump(2) + "\n";
}

}  // namespace rsqtsm
