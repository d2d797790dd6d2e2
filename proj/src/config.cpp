/// @file config.cpp
/// @brief JSON experiment configuration loading.

#include "poros/errors.hpp"
#include "poros/harness.hpp"

#include <json.hpp>

#include <fstream>

namespace poros {

using json = nlohmann::json;

ChannelGeometry ExperimentConfig::channel(double eps) const {
    ChannelGeometry ch;
    ch.L = L;
    ch.h = h;
    ch.H = H;
    ch.eps = eps;
    ch.cell = cell;
    return ch;
}

StripGeometry ExperimentConfig::strip() const {
    StripGeometry s;
    s.cell = cell;
    s.interface_offset = interface_offset;
    s.L_top = L_top;
    s.L_bot = L_bot;
    return s;
}

namespace {

std::vector<ForcingTerm> parse_terms(const json& arr) {
    std::vector<ForcingTerm> terms;
    for (const json& t : arr) {
        ForcingTerm term;
        term.coef = t.at("coef").get<double>();
        term.ypow = t.value("ypow", 0);
        term.k = t.value("k", 1);
        const std::string mode = t.value("mode", "const");
        if (mode == "const") term.mode = ForcingTerm::Mode::Const;
        else if (mode == "sin") term.mode = ForcingTerm::Mode::Sin;
        else if (mode == "cos") term.mode = ForcingTerm::Mode::Cos;
        else throw ConfigError("unknown forcing mode '" + mode + "'");
        if (term.ypow < 0) throw ConfigError("forcing powers must be nonnegative");
        terms.push_back(term);
    }
    return terms;
}

Forcing parse_forcing(const json& jf, double period) {
    if (jf.contains("constant")) {
        const auto& c = jf.at("constant");
        if (!c.is_array() || c.size() != 2)
            throw ConfigError("forcing.constant must be a two-vector");
        std::vector<ForcingTerm> t1, t2;
        if (c[0].get<double>() != 0.0)
            t1.push_back({c[0].get<double>(), 0, ForcingTerm::Mode::Const, 0});
        if (c[1].get<double>() != 0.0)
            t2.push_back({c[1].get<double>(), 0, ForcingTerm::Mode::Const, 0});
        return Forcing(std::move(t1), std::move(t2), period);
    }
    std::vector<ForcingTerm> t1, t2;
    if (jf.contains("f1")) t1 = parse_terms(jf.at("f1"));
    if (jf.contains("f2")) t2 = parse_terms(jf.at("f2"));
    return Forcing(std::move(t1), std::move(t2), period);
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed config JSON: " + std::string(e.what()));
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("geometry")) {
            const json& g = j.at("geometry");
            if (g.contains("cell")) {
                const json& c = g.at("cell");
                cfg.cell.inclusions.clear();
                for (const json& r : c.value("inclusions", json::array())) {
                    if (!r.is_array() || r.size() != 4)
                        throw ConfigError("inclusion must be [x0,y0,x1,y1]");
                    cfg.cell.inclusions.push_back(
                        Rect{r[0].get<double>(), r[1].get<double>(),
                             r[2].get<double>(), r[3].get<double>()});
                }
                cfg.cell.margin = c.value("margin", cfg.cell.margin);
            }
            if (g.contains("channel")) {
                const json& c = g.at("channel");
                cfg.L = c.value("L", cfg.L);
                cfg.h = c.value("h", cfg.h);
                cfg.H = c.value("H", cfg.H);
            }
            if (g.contains("strip")) {
                const json& s = g.at("strip");
                cfg.L_top = s.value("L_top", cfg.L_top);
                cfg.L_bot = s.value("L_bot", cfg.L_bot);
                cfg.interface_offset = s.value("interface_offset", cfg.interface_offset);
            }
        }
        if (j.contains("forcing")) {
            cfg.forcing = parse_forcing(j.at("forcing"), cfg.L);
        } else {
            cfg.forcing = Forcing::constant(1.0, 0.0);
        }
        if (j.contains("epsilons")) {
            cfg.epsilons = j.at("epsilons").get<std::vector<double>>();
        }
        if (j.contains("solver")) {
            const json& s = j.at("solver");
            cfg.solver.residual_tol = s.value("residual_tol", cfg.solver.residual_tol);
            cfg.solver.div_tol = s.value("div_tol", cfg.solver.div_tol);
            cfg.solver.lambda_tol = s.value("lambda_tol", cfg.solver.lambda_tol);
            cfg.solver.max_unknowns = s.value("max_unknowns", cfg.solver.max_unknowns);
            cfg.bl_resolution = s.value("bl_resolution", cfg.bl_resolution);
            cfg.cell_resolution = s.value("cell_resolution", cfg.cell_resolution);
            cfg.micro_pts_per_eps = s.value("micro_pts_per_eps", cfg.micro_pts_per_eps);
            if (s.contains("shift_offsets"))
                cfg.shift_offsets = s.at("shift_offsets").get<std::vector<double>>();
            cfg.robustness_a = s.value("robustness_a", cfg.robustness_a);
        }
        if (j.contains("output")) {
            cfg.output_dir = j.at("output").value("dir", cfg.output_dir);
        }
    } catch (const json::exception& e) {
        throw ConfigError("config field error: " + std::string(e.what()));
    }

    if (cfg.epsilons.empty()) throw ConfigError("epsilon list must not be empty");
    for (size_t k = 0; k < cfg.epsilons.size(); ++k) {
        if (!(cfg.epsilons[k] > 0.0))
            throw ConfigError("epsilons must be positive");
        if (k > 0 && !(cfg.epsilons[k] < cfg.epsilons[k - 1]))
            throw ConfigError("epsilon list must be strictly decreasing");
    }
    return cfg;
}

ExperimentConfig sample_config() {
    ExperimentConfig cfg;
    cfg.cell.inclusions = {Rect{0.0625, 0.6875, 0.5625, 0.9375},
                           Rect{0.625, 0.3125, 0.8125, 0.6875}};
    cfg.cell.margin = 0.05;
    cfg.robustness_a = -0.0625;
    // Horizontal lines that avoid the solid parts of this cell; both sit
    // below the first obstacle row, where the shift law no longer applies,
    // so the posted defects stay large on purpose.
    cfg.shift_offsets = {-0.75, -0.875};
    cfg.cell.validate();
    return cfg;
}

ExperimentConfig symmetric_sample_config() {
    ExperimentConfig cfg;
    cfg.cell.inclusions = {Rect{0.3125, 0.3125, 0.6875, 0.6875}};
    cfg.cell.margin = 0.05;
    cfg.cell.validate();
    return cfg;
}

ExperimentConfig clear_gap_sample_config() {
    ExperimentConfig cfg;
    cfg.cell.inclusions = {Rect{0.125, 0.0625, 0.4375, 0.1875},
                           Rect{0.5625, 0.0625, 0.875, 0.1875}};
    cfg.cell.margin = 0.05;
    cfg.shift_offsets = {-0.25, -0.75};
    cfg.cell.validate();
    return cfg;
}

} // namespace poros
