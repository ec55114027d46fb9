#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nonlocal/error.hpp"
#include "nonlocal/evolution_solver.hpp"
#include "nonlocal/kernel_catalog.hpp"
#include "nonlocal/nonlinearity.hpp"
#include "nonlocal/time_mesh.hpp"

namespace nonlocal {

/// Bad scenario file. line is 0 when the problem is not tied to a line.
struct ConfigError : UsageError {
    ConfigError(const std::string& what, std::size_t line_ = 0) : UsageError(what), line(line_) {}
    std::size_t line;
};

enum class Tristate { Off, On, Auto };

struct ScenarioConfig {
    std::string source;

    KernelPair pair;

    std::string operator_type = "dirichlet_laplacian";
    double theta = 1.0;
    double gamma_pow = 1.0;
    std::size_t modes = 8;
    std::vector<double> eigenvalues;

    std::string nonlinearity_type = "zero";
    double kappa_const = 0.0;
    std::vector<double> offset;
    EnergyNonlinearitySpec energy;
    std::size_t grid_points = 0;

    std::vector<double> u0;

    double T = 1.0;
    std::size_t steps = 1024;
    Grading grading;

    SolverConfig solver;

    bool envelope = true;
    std::optional<double> theta_margin;
    double envelope_tol = 5e-2;
    std::optional<double> decay_ratio_max;
    bool residual = true;
    double residual_tol = 5e-2;
    bool holder = true;
    double holder_delta = 0.0;
    double holder_min = 0.5;
    Tristate oracle = Tristate::Auto;
    double oracle_tol = 2e-3;
    double oracle_t_min = 0.01;
    std::uint64_t seed = 42;
    std::optional<double> eta;
    std::size_t lipschitz_samples = 64;

    std::string output_directory = "out";
    int precision = 17;
};

namespace config_detail {

using boost::property_tree::ptree;

// key -> line, recovered from the raw text because ptree drops positions.
inline std::map<std::string, std::size_t> key_lines(const std::string& path) {
    std::map<std::string, std::size_t> out;
    std::ifstream in(path);
    std::string line, section;
    std::size_t no = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r\n";
        s.erase(0, s.find_first_not_of(ws));
        s.erase(s.find_last_not_of(ws) + 1);
        return s;
    };
    while (std::getline(in, line)) {
        ++no;
        std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            out.emplace(section, no);
            continue;
        }
        auto eq = t.find('=');
        if (eq != std::string::npos) out.emplace(section + "." + trim(t.substr(0, eq)), no);
    }
    return out;
}

class Section {
public:
    Section(std::string name, const ptree* tree, const std::map<std::string, std::size_t>& lines)
        : name_(std::move(name)), tree_(tree), lines_(lines) {}

    bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::string tree_value(const std::string& key) const { return tree_->get<std::string>(key); }

    std::optional<std::string> raw(const std::string& key) {
        if (!has(key)) return std::nullopt;
        used_.insert(key);
        return tree_->get<std::string>(key);
    }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        std::string where = key.empty() ? name_ : name_ + "." + key;
        throw ConfigError("[" + name_ + "] " + (key.empty() ? "" : key + ": ") + msg, line_of(where));
    }

    std::size_t line_of(const std::string& where) const {
        auto it = lines_.find(where);
        if (it == lines_.end()) it = lines_.find(name_);
        return it == lines_.end() ? 0 : it->second;
    }

    double number(const std::string& key, const std::string& text) const {
        double v = 0.0;
        const char* b = text.data();
        const char* e = b + text.size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e || !std::isfinite(v)) fail(key, "expected a finite number, got '" + text + "'");
        return v;
    }

    std::optional<double> real(const std::string& key) {
        auto r = raw(key);
        if (!r) return std::nullopt;
        return number(key, *r);
    }
    double real(const std::string& key, double def) { return real(key).value_or(def); }
    double required_real(const std::string& key) {
        auto v = real(key);
        if (!v) fail(key, "required key is missing");
        return *v;
    }

    std::optional<std::uint64_t> count(const std::string& key) {
        auto r = raw(key);
        if (!r) return std::nullopt;
        std::uint64_t v = 0;
        const char* b = r->data();
        const char* e = b + r->size();
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec != std::errc() || p != e) fail(key, "expected a nonnegative integer, got '" + *r + "'");
        return v;
    }

    std::optional<std::vector<double>> list(const std::string& key) {
        auto r = raw(key);
        if (!r) return std::nullopt;
        std::vector<double> out;
        std::stringstream ss(*r);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            out.push_back(number(key, item));
        }
        if (out.empty()) fail(key, "expected a comma-separated list of numbers");
        return out;
    }

    std::optional<Tristate> tristate(const std::string& key, bool allow_auto) {
        auto r = raw(key);
        if (!r) return std::nullopt;
        std::string s = *r;
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
        if (s == "on" || s == "true" || s == "yes" || s == "1") return Tristate::On;
        if (s == "off" || s == "false" || s == "no" || s == "0") return Tristate::Off;
        if (allow_auto && s == "auto") return Tristate::Auto;
        fail(key, "expected on/off" + std::string(allow_auto ? "/auto" : "") + ", got '" + *r + "'");
    }
    bool flag(const std::string& key, bool def) {
        auto t = tristate(key, false);
        return t ? *t == Tristate::On : def;
    }

    void finish(const std::string& context = "") const {
        if (!tree_) return;
        for (const auto& kv : *tree_) {
            if (used_.count(kv.first)) continue;
            fail(kv.first, "unknown key" + (context.empty() ? std::string() : " for " + context));
        }
    }

private:
    std::string name_;
    const ptree* tree_;
    const std::map<std::string, std::size_t>& lines_;
    std::set<std::string> used_;
};

}  // namespace config_detail

/// Parses a scenario file: flat INI sections, unknown sections or keys are rejected.
inline ScenarioConfig parse_scenario(const std::string& path) {
    using config_detail::ptree;
    using config_detail::Section;
    {
        std::ifstream probe(path);
        if (!probe) throw ConfigError("cannot open config file '" + path + "'");
    }
    ptree root;
    try {
        boost::property_tree::ini_parser::read_ini(path, root);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.message(), e.line());
    }
    const auto lines = config_detail::key_lines(path);
    const std::set<std::string> known{"kernel", "operator", "nonlinearity", "initial_data", "time", "solver", "analysis", "output"};
    for (const auto& kv : root) {
        auto it = lines.find(kv.first);
        std::size_t line = it == lines.end() ? 0 : it->second;
        if (!known.count(kv.first)) throw ConfigError("unknown section or top-level key '" + kv.first + "'", line);
        if (kv.second.empty() && !kv.second.data().empty())
            throw ConfigError("key '" + kv.first + "' outside any section", line);
    }
    auto section = [&](const std::string& name) {
        auto it = root.find(name);
        return Section(name, it == root.not_found() ? nullptr : &it->second, lines);
    };

    ScenarioConfig cfg;
    cfg.source = path;

    // [kernel]
    {
        Section s = section("kernel");
        auto fam = s.raw("family");
        if (!fam) s.fail("family", "required key is missing");
        KernelFamily family;
        try {
            family = parse_family(*fam);
        } catch (const UsageError& e) {
            s.fail("family", e.what());
        }
        try {
            switch (family) {
                case KernelFamily::Fractional: cfg.pair = make_fractional(s.required_real("alpha")); break;
                case KernelFamily::DistributedOrder: cfg.pair = make_distributed_order(); break;
                case KernelFamily::TemperedFractional:
                    cfg.pair = make_tempered(s.required_real("alpha"), s.required_real("gamma"));
                    break;
                case KernelFamily::TwoTerm:
                    cfg.pair = make_two_term(s.required_real("alpha"), s.required_real("beta"), s.required_real("mu"));
                    break;
            }
        } catch (const DomainError& e) {
            s.fail("", e.what());
        }
        s.finish("family " + family_name(family));
    }

    // [operator]
    {
        Section s = section("operator");
        cfg.operator_type = s.raw("type").value_or("dirichlet_laplacian");
        auto modes = s.count("modes");
        if (cfg.operator_type == "dirichlet_laplacian") {
            cfg.theta = s.real("theta", 1.0);
            cfg.gamma_pow = s.real("gamma_pow", 1.0);
            if (!(cfg.theta > 0.0)) s.fail("theta", "must be > 0");
            if (!(cfg.gamma_pow > 0.0)) s.fail("gamma_pow", "must be > 0");
            cfg.modes = modes.value_or(8);
        } else if (cfg.operator_type == "diagonal") {
            auto ev = s.list("eigenvalues");
            if (!ev) s.fail("eigenvalues", "required for type diagonal");
            cfg.eigenvalues = *ev;
            for (std::size_t n = 0; n < ev->size(); ++n) {
                if (!((*ev)[n] > 0.0)) s.fail("eigenvalues", "eigenvalues must be positive");
                if (n > 0 && (*ev)[n] < (*ev)[n - 1]) s.fail("eigenvalues", "eigenvalues must be nondecreasing");
            }
            if (modes && *modes != ev->size()) s.fail("modes", "does not match the number of eigenvalues");
            cfg.modes = ev->size();
        } else {
            s.fail("type", "expected dirichlet_laplacian or diagonal, got '" + cfg.operator_type + "'");
        }
        if (cfg.modes < 1) s.fail("modes", "must be >= 1");
        s.finish("type " + cfg.operator_type);
    }

    // [nonlinearity]
    {
        Section s = section("nonlinearity");
        cfg.nonlinearity_type = s.raw("type").value_or("zero");
        const std::string& t = cfg.nonlinearity_type;
        if (t == "zero") {
        } else if (t == "global_lipschitz") {
            cfg.kappa_const = s.required_real("kappa_const");
            if (!(cfg.kappa_const >= 0.0)) s.fail("kappa_const", "must be >= 0");
            cfg.offset = s.list("offset").value_or(std::vector<double>{});
            if (cfg.offset.size() > cfg.modes) s.fail("offset", "has more entries than modes");
            cfg.offset.resize(cfg.modes, 0.0);
        } else if (t == "energy") {
            cfg.energy.a = s.required_real("a");
            cfg.energy.b = s.required_real("b");
            cfg.energy.nu = s.required_real("nu");
            cfg.energy.h_sup = s.required_real("h_sup");
            if (cfg.energy.a < 0.0 || cfg.energy.b < 0.0 || cfg.energy.h_sup < 0.0 || cfg.energy.nu < 0.0)
                s.fail("", "a, b, nu and h_sup must be >= 0");
            if (cfg.energy.nu > 0.0 && cfg.energy.nu < 1.0) s.fail("nu", "values in (0,1) are not supported (F must be C1)");
            if (cfg.operator_type != "dirichlet_laplacian") s.fail("type", "energy nonlinearity needs a dirichlet_laplacian operator");
            cfg.grid_points = s.count("grid_points").value_or(std::max<std::size_t>(64, 4 * cfg.modes));
            if (cfg.grid_points < 2 * cfg.modes) s.fail("grid_points", "needs at least 2 * modes points");
        } else {
            s.fail("type", "expected zero, global_lipschitz or energy, got '" + t + "'");
        }
        s.finish("type " + t);
    }

    // [initial_data]
    {
        Section s = section("initial_data");
        auto coeffs = s.list("coefficients");
        auto first = s.real("first_mode");
        if (coeffs && first) s.fail("", "give either coefficients or first_mode, not both");
        if (!coeffs && !first) s.fail("", "need coefficients or first_mode");
        if (coeffs) {
            if (coeffs->size() > cfg.modes) s.fail("coefficients", "has more entries than modes");
            cfg.u0 = *coeffs;
        } else {
            cfg.u0 = {*first};
        }
        cfg.u0.resize(cfg.modes, 0.0);
        s.finish();
    }

    // [time]
    {
        Section s = section("time");
        cfg.T = s.required_real("T");
        if (!(cfg.T > 0.0)) s.fail("T", "must be > 0");
        auto steps = s.count("steps");
        cfg.steps = steps.value_or(1024);
        if (cfg.steps < 16) s.fail("steps", "need at least 16 steps");
        std::string grading = s.raw("grading").value_or("uniform");
        if (grading == "uniform") {
            cfg.grading = Grading::uniform();
        } else if (grading == "graded") {
            double rho = s.required_real("rho");
            if (!(rho >= 1.0)) s.fail("rho", "must be >= 1");
            cfg.grading = Grading::graded(rho);
        } else {
            s.fail("grading", "expected uniform or graded, got '" + grading + "'");
        }
        s.finish("grading " + grading);
    }

    // [solver]
    {
        Section s = section("solver");
        cfg.solver.picard_tol = s.real("picard_tol", cfg.solver.picard_tol);
        if (!(cfg.solver.picard_tol > 0.0)) s.fail("picard_tol", "must be > 0");
        if (auto it = s.count("picard_max_iters")) {
            if (*it < 1 || *it > 100000) s.fail("picard_max_iters", "must lie in [1, 100000]");
            cfg.solver.picard_max_iters = int(*it);
        }
        if (s.has("near_cells") && s.tree_value("near_cells") == "auto") {
            s.raw("near_cells");
        } else if (auto nc = s.count("near_cells")) {
            if (*nc < 1) s.fail("near_cells", "must be >= 1 or auto");
            cfg.solver.near_cells = *nc;
        }
        cfg.solver.mode_parallelism = s.flag("mode_parallelism", false);
        s.finish();
    }

    // [analysis]
    {
        Section s = section("analysis");
        cfg.envelope = s.flag("envelope", true);
        cfg.theta_margin = s.real("theta_margin");
        if (cfg.theta_margin && !(*cfg.theta_margin >= 0.0)) s.fail("theta_margin", "must be >= 0");
        cfg.envelope_tol = s.real("envelope_tol", cfg.envelope_tol);
        cfg.decay_ratio_max = s.real("decay_ratio_max");
        cfg.residual = s.flag("residual", true);
        cfg.residual_tol = s.real("residual_tol", cfg.residual_tol);
        cfg.holder = s.flag("holder", true);
        cfg.holder_delta = s.real("holder_delta", 0.25 * cfg.T);
        if (!(cfg.holder_delta > 0.0 && cfg.holder_delta < cfg.T)) s.fail("holder_delta", "must lie in (0, T)");
        cfg.holder_min = s.real("holder_min", cfg.holder_min);
        cfg.oracle = s.tristate("oracle", true).value_or(Tristate::Auto);
        cfg.oracle_tol = s.real("oracle_tol", cfg.oracle_tol);
        cfg.oracle_t_min = s.real("oracle_t_min", cfg.oracle_t_min);
        cfg.seed = s.count("seed").value_or(42);
        cfg.eta = s.real("eta");
        if (cfg.eta && !(*cfg.eta > 0.0)) s.fail("eta", "must be > 0");
        cfg.lipschitz_samples = s.count("lipschitz_samples").value_or(64);
        for (const char* k : {"envelope_tol", "residual_tol", "oracle_tol"})
            if (s.has(k) && !(s.real(k, 1.0) > 0.0)) s.fail(k, "must be > 0");
        s.finish();
    }

    // [output]
    {
        Section s = section("output");
        cfg.output_directory = s.raw("directory").value_or("out");
        if (cfg.output_directory.empty()) s.fail("directory", "must not be empty");
        if (auto p = s.count("precision")) {
            if (*p < 1 || *p > 17) s.fail("precision", "must lie in [1, 17]");
            cfg.precision = int(*p);
        }
        s.finish();
    }
    return cfg;
}

inline SpectralOperator build_operator(const ScenarioConfig& cfg) {
    if (cfg.operator_type == "diagonal") return diagonal(cfg.eigenvalues);
    return dirichlet_laplacian_1d(cfg.theta, cfg.gamma_pow, cfg.modes);
}

inline std::optional<Nonlinearity> build_nonlinearity(const ScenarioConfig& cfg, const SpectralOperator& op) {
    if (cfg.nonlinearity_type == "global_lipschitz") return make_global_lipschitz(cfg.kappa_const, StateVector(cfg.offset));
    if (cfg.nonlinearity_type == "energy") return make_energy_nonlinearity(cfg.energy, op, midpoint_grid(cfg.grid_points));
    return std::nullopt;
}

}  // namespace nonlocal
