#include "seirim/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "seirim/errors.hpp"
#include "seirim/io.hpp"
#include "seirim/sensitivity.hpp"

namespace seirim {

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// section -> key -> raw value, with duplicates rejected.
using Sections = std::map<std::string, std::map<std::string, std::string>>;

Sections tokenize(const std::string& text)
{
    Sections sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';')
            continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": malformed section header");
            current = trim(t.substr(1, t.size() - 2));
            if (current.empty())
                throw ValidationError("config line " + std::to_string(lineno) +
                                      ": empty section name");
            if (sections.count(current))
                throw ValidationError("config: duplicate section [" + current + "]");
            sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        if (current.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": key outside any section");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": empty key or value");
        if (!sections[current].emplace(key, value).second)
            throw ValidationError("config: duplicate key '" + key + "' in [" + current + "]");
    }
    return sections;
}

class SectionReader {
public:
    SectionReader(const std::string& name, const std::map<std::string, std::string>& kv)
        : name_(name), kv_(kv)
    {
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key)
    {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            throw ValidationError("config: [" + name_ + "] is missing key '" + key + "'");
        used_.insert(key);
        return it->second;
    }

    double get_double(const std::string& key)
    {
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size())
                throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config: [" + name_ + "] " + key + " = '" + raw +
                                  "' is not a number");
        }
    }

    double get_double(const std::string& key, double fallback)
    {
        return has(key) ? get_double(key) : fallback;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback)
    {
        if (!has(key))
            return fallback;
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const std::int64_t v = std::stoll(raw, &pos);
            if (pos != raw.size())
                throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config: [" + name_ + "] " + key + " = '" + raw +
                                  "' is not an integer");
        }
    }

    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback)
    {
        if (!has(key))
            return fallback;
        const std::string raw = get_string(key);
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(raw, &pos);
            if (pos != raw.size())
                throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config: [" + name_ + "] " + key + " = '" + raw +
                                  "' is not an unsigned integer");
        }
    }

    bool get_bool(const std::string& key, bool fallback)
    {
        if (!has(key))
            return fallback;
        const std::string raw = get_string(key);
        if (raw == "true")
            return true;
        if (raw == "false")
            return false;
        throw ValidationError("config: [" + name_ + "] " + key + " must be true or false");
    }

    void reject_unknown() const
    {
        for (const auto& [key, value] : kv_)
            if (!used_.count(key))
                throw ValidationError("config: unknown key '" + key + "' in [" + name_ + "]");
    }

private:
    std::string name_;
    const std::map<std::string, std::string>& kv_;
    std::set<std::string> used_;
};

EfficacyCombination read_efficacies(SectionReader& r)
{
    EfficacyCombination eff;
    eff.eps11 = r.get_double("eps11", 0.0);
    eff.eps12 = r.get_double("eps12", 0.0);
    eff.eps21 = r.get_double("eps21", 0.0);
    eff.eps22 = r.get_double("eps22", 0.0);
    eff.eps31 = r.get_double("eps31", 0.0);
    eff.eps32 = r.get_double("eps32", 0.0);
    return eff;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    const Sections sections = tokenize(text);

    static const std::set<std::string> known = {"model",  "incidence", "initial",
                                                "integration", "run", "sweep",
                                                "grid",   "r0",        "effectiveness"};
    for (const auto& [name, kv] : sections)
        if (!known.count(name))
            throw ValidationError("config: unknown section [" + name + "]");
    for (const char* required : {"model", "incidence", "initial", "integration"})
        if (!sections.count(required))
            throw ValidationError("config: missing required section [" + std::string(required) +
                                  "]");

    RunConfig cfg;

    {
        SectionReader r("model", sections.at("model"));
        cfg.params.b1 = r.get_double("b1");
        cfg.params.beta = r.get_double("beta");
        cfg.params.mu_c = r.get_double("mu_c");
        cfg.params.gamma = r.get_double("gamma");
        cfg.params.d1 = r.get_double("d1");
        cfg.params.k = r.get_double("k");
        cfg.params.m = r.get_double("m");
        cfg.params.p = r.get_double("p"); // mandatory: nothing fixes it elsewhere
        r.reject_unknown();
    }
    {
        SectionReader r("incidence", sections.at("incidence"));
        const std::string mode = r.get_string("mode");
        if (mode == "dynamic") {
            cfg.mode = IncidenceMode::dynamic();
        } else if (mode == "fixed") {
            cfg.mode = IncidenceMode::fixed(r.get_double("n"));
        } else {
            throw ValidationError("config: incidence mode must be dynamic or fixed");
        }
        r.reject_unknown();
    }
    {
        SectionReader r("initial", sections.at("initial"));
        for (int i = 0; i < kCompartments; ++i)
            cfg.init[i] = r.get_double(compartment_label(i));
        r.reject_unknown();
    }
    {
        SectionReader r("integration", sections.at("integration"));
        cfg.integration.t0 = r.get_double("t0");
        cfg.integration.t_end = r.get_double("t_end");
        cfg.integration.record_every = r.get_double("record_every");
        const std::string method = r.get_string("method");
        if (method == "rk4") {
            cfg.integration.method = Rk4Fixed{r.get_double("step")};
        } else if (method == "rk45") {
            Rk45Adaptive rk45;
            rk45.abs_tol = r.get_double("abs_tol");
            rk45.rel_tol = r.get_double("rel_tol");
            rk45.max_step = r.get_double("max_step");
            cfg.integration.method = rk45;
        } else {
            throw ValidationError("config: integration method must be rk4 or rk45");
        }
        r.reject_unknown();
    }
    if (sections.count("run")) {
        SectionReader r("run", sections.at("run"));
        cfg.seed = r.get_uint("seed", 42);
        cfg.threads = static_cast<int>(r.get_int("threads", 0));
        r.reject_unknown();
    }
    if (sections.count("sweep")) {
        SectionReader r("sweep", sections.at("sweep"));
        SweepConfig sweep;
        sweep.parameter = r.get_string("parameter");
        sweep.lo = r.get_double("lo");
        sweep.hi = r.get_double("hi");
        sweep.step = r.get_double("step");
        sweep.peak_threshold = r.get_double("peak_threshold", kDefaultPeakThreshold);
        sweep.tail_threshold = r.get_double("tail_threshold", kDefaultTailThreshold);
        cfg.sweep = sweep;
        r.reject_unknown();
    }
    if (sections.count("grid")) {
        SectionReader r("grid", sections.at("grid"));
        GridConfig grid;
        grid.x.parameter = r.get_string("x_parameter");
        grid.x.lo = r.get_double("x_lo");
        grid.x.hi = r.get_double("x_hi");
        grid.x.count = static_cast<int>(r.get_int("x_count", 101));
        grid.y.parameter = r.get_string("y_parameter");
        grid.y.lo = r.get_double("y_lo");
        grid.y.hi = r.get_double("y_hi");
        grid.y.count = static_cast<int>(r.get_int("y_count", 101));
        const std::string weights = r.get_string("weights");
        if (weights == "dfe") {
            grid.weights = WeightsConvention::DfeFractions;
        } else if (weights == "explicit") {
            grid.weights = WeightsConvention::Explicit;
            grid.explicit_weights.p1 = r.get_double("p1");
            grid.explicit_weights.p2 = r.get_double("p2");
        } else {
            throw ValidationError("config: grid weights must be dfe or explicit");
        }
        cfg.grid = grid;
        r.reject_unknown();
    }
    if (sections.count("r0")) {
        SectionReader r("r0", sections.at("r0"));
        cfg.r0_efficacies = read_efficacies(r);
        r.reject_unknown();
    }
    if (sections.count("effectiveness")) {
        SectionReader r("effectiveness", sections.at("effectiveness"));
        EffectivenessConfig eff;
        eff.combo = read_efficacies(r);
        eff.apply_to_dynamics = r.get_bool("apply_to_dynamics", false);
        if (r.has("combos_file"))
            eff.combos_file = r.get_string("combos_file");
        cfg.effectiveness = eff;
        r.reject_unknown();
    }

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const
{
    params.validate();
    mode.validate();
    integration.validate();
    if (!init.all_finite())
        throw ValidationError("config: initial state has non-finite components");
    if (init.min_component() < 0.0)
        throw ValidationError("config: initial state has negative components");
    if (threads < 0)
        throw ValidationError("config: threads must be >= 0");
    if (sweep) {
        if (!(sweep->lo < sweep->hi))
            throw ValidationError("config: sweep interval must satisfy lo < hi");
        if (!(sweep->step > 0.0))
            throw ValidationError("config: sweep step must be > 0");
        if (!(sweep->peak_threshold >= 0.0 && sweep->tail_threshold >= 0.0))
            throw ValidationError("config: sweep thresholds must be >= 0");
        with_parameter(params, sweep->parameter, sweep->lo);
    }
    if (grid) {
        GridSpec spec;
        spec.x = grid->x;
        spec.y = grid->y;
        spec.base = params;
        spec.weights = grid->weights;
        spec.explicit_weights = grid->explicit_weights;
        spec.validate();
    }
    if (r0_efficacies)
        r0_efficacies->validate();
    if (effectiveness)
        effectiveness->combo.validate();
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

void emit_efficacies(std::ostringstream& out, const EfficacyCombination& eff)
{
    out << "eps11 = " << fmt_full(eff.eps11) << "\n";
    out << "eps12 = " << fmt_full(eff.eps12) << "\n";
    out << "eps21 = " << fmt_full(eff.eps21) << "\n";
    out << "eps22 = " << fmt_full(eff.eps22) << "\n";
    out << "eps31 = " << fmt_full(eff.eps31) << "\n";
    out << "eps32 = " << fmt_full(eff.eps32) << "\n";
}

} // namespace

std::string serialize_config(const RunConfig& cfg)
{
    std::ostringstream out;
    out << "[model]\n";
    out << "b1 = " << fmt_full(cfg.params.b1) << "\n";
    out << "beta = " << fmt_full(cfg.params.beta) << "\n";
    out << "mu_c = " << fmt_full(cfg.params.mu_c) << "\n";
    out << "gamma = " << fmt_full(cfg.params.gamma) << "\n";
    out << "d1 = " << fmt_full(cfg.params.d1) << "\n";
    out << "k = " << fmt_full(cfg.params.k) << "\n";
    out << "m = " << fmt_full(cfg.params.m) << "\n";
    out << "p = " << fmt_full(cfg.params.p) << "\n";

    out << "\n[incidence]\n";
    if (cfg.mode.kind == IncidenceMode::Kind::DynamicN) {
        out << "mode = dynamic\n";
    } else {
        out << "mode = fixed\n";
        out << "n = " << fmt_full(cfg.mode.n_value) << "\n";
    }

    out << "\n[initial]\n";
    for (int i = 0; i < kCompartments; ++i)
        out << compartment_label(i) << " = " << fmt_full(cfg.init[i]) << "\n";

    out << "\n[integration]\n";
    out << "t0 = " << fmt_full(cfg.integration.t0) << "\n";
    out << "t_end = " << fmt_full(cfg.integration.t_end) << "\n";
    if (const auto* rk4 = std::get_if<Rk4Fixed>(&cfg.integration.method)) {
        out << "method = rk4\n";
        out << "step = " << fmt_full(rk4->step) << "\n";
    } else {
        const auto& rk45 = std::get<Rk45Adaptive>(cfg.integration.method);
        out << "method = rk45\n";
        out << "abs_tol = " << fmt_full(rk45.abs_tol) << "\n";
        out << "rel_tol = " << fmt_full(rk45.rel_tol) << "\n";
        out << "max_step = " << fmt_full(rk45.max_step) << "\n";
    }
    out << "record_every = " << fmt_full(cfg.integration.record_every) << "\n";

    out << "\n[run]\n";
    out << "seed = " << cfg.seed << "\n";
    out << "threads = " << cfg.threads << "\n";

    if (cfg.sweep) {
        out << "\n[sweep]\n";
        out << "parameter = " << cfg.sweep->parameter << "\n";
        out << "lo = " << fmt_full(cfg.sweep->lo) << "\n";
        out << "hi = " << fmt_full(cfg.sweep->hi) << "\n";
        out << "step = " << fmt_full(cfg.sweep->step) << "\n";
        out << "peak_threshold = " << fmt_full(cfg.sweep->peak_threshold) << "\n";
        out << "tail_threshold = " << fmt_full(cfg.sweep->tail_threshold) << "\n";
    }
    if (cfg.grid) {
        out << "\n[grid]\n";
        out << "x_parameter = " << cfg.grid->x.parameter << "\n";
        out << "x_lo = " << fmt_full(cfg.grid->x.lo) << "\n";
        out << "x_hi = " << fmt_full(cfg.grid->x.hi) << "\n";
        out << "x_count = " << cfg.grid->x.count << "\n";
        out << "y_parameter = " << cfg.grid->y.parameter << "\n";
        out << "y_lo = " << fmt_full(cfg.grid->y.lo) << "\n";
        out << "y_hi = " << fmt_full(cfg.grid->y.hi) << "\n";
        out << "y_count = " << cfg.grid->y.count << "\n";
        if (cfg.grid->weights == WeightsConvention::DfeFractions) {
            out << "weights = dfe\n";
        } else {
            out << "weights = explicit\n";
            out << "p1 = " << fmt_full(cfg.grid->explicit_weights.p1) << "\n";
            out << "p2 = " << fmt_full(cfg.grid->explicit_weights.p2) << "\n";
        }
    }
    if (cfg.r0_efficacies) {
        out << "\n[r0]\n";
        emit_efficacies(out, *cfg.r0_efficacies);
    }
    if (cfg.effectiveness) {
        out << "\n[effectiveness]\n";
        emit_efficacies(out, cfg.effectiveness->combo);
        out << "apply_to_dynamics = " << (cfg.effectiveness->apply_to_dynamics ? "true" : "false")
            << "\n";
        if (!cfg.effectiveness->combos_file.empty())
            out << "combos_file = " << cfg.effectiveness->combos_file << "\n";
    }
    return out.str();
}

} // namespace seirim
