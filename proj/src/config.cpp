#include "kssim/config.hpp"

#include "kssim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace kssim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

// Removes a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_str = !in_str;
        if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

double parse_number(const std::string& text, int line) {
    std::string t;
    for (char c : text) {
        if (c != '_') t.push_back(c);
    }
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::logic_error&) {
        fail_at(line, "not a number: '" + text + "'");
    }
    if (pos != t.size()) fail_at(line, "not a number: '" + text + "'");
    return v;
}

std::string unquote(const std::string& text, int line) {
    if (text.size() < 2 || text.front() != '"' || text.back() != '"') fail_at(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        if (text[i] == '\\' && i + 2 < text.size()) {
            const char n = text[++i];
            out.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : n);
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

ConfigValue parse_value(const std::string& raw, int line) {
    const std::string text = trim(raw);
    if (text.empty()) fail_at(line, "missing value");
    if (text == "true") return true;
    if (text == "false") return false;
    if (text.front() == '"') return unquote(text, line);
    if (text.front() == '[') {
        if (text.back() != ']') fail_at(line, "arrays must close on the same line");
        std::vector<double> out;
        std::stringstream ss(text.substr(1, text.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            out.push_back(parse_number(item, line));
        }
        return out;
    }
    return parse_number(text, line);
}

std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

std::string format_array(const std::vector<double>& xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += format_number(xs[i]);
    }
    return s + "]";
}

// Typed access to one section, tracking which keys were consumed.
class SectionReader {
public:
    SectionReader(const ConfigDocument::Section& s) : s_(s) {}

    const ConfigDocument::Entry* entry(const std::string& key) {
        for (const auto& e : s_.entries) {
            if (e.key == key) {
                used_.insert(key);
                return &e;
            }
        }
        return nullptr;
    }

    std::optional<double> number(const std::string& key) {
        const auto* e = entry(key);
        if (!e) return std::nullopt;
        if (const auto* d = std::get_if<double>(&e->value)) return *d;
        fail_at(e->line, s_.name + "." + key + " must be a number");
    }
    std::optional<std::string> string(const std::string& key) {
        const auto* e = entry(key);
        if (!e) return std::nullopt;
        if (const auto* d = std::get_if<std::string>(&e->value)) return *d;
        fail_at(e->line, s_.name + "." + key + " must be a string");
    }
    std::optional<bool> boolean(const std::string& key) {
        const auto* e = entry(key);
        if (!e) return std::nullopt;
        if (const auto* d = std::get_if<bool>(&e->value)) return *d;
        fail_at(e->line, s_.name + "." + key + " must be true or false");
    }
    std::optional<std::vector<double>> array(const std::string& key) {
        const auto* e = entry(key);
        if (!e) return std::nullopt;
        if (const auto* d = std::get_if<std::vector<double>>(&e->value)) return *d;
        if (const auto* d = std::get_if<double>(&e->value)) return std::vector<double>{*d};
        fail_at(e->line, s_.name + "." + key + " must be an array of numbers");
    }
    std::optional<long> integer(const std::string& key) {
        const auto v = number(key);
        if (!v) return std::nullopt;
        if (*v != std::floor(*v) || std::abs(*v) > 9e15) {
            throw ConfigError(s_.name + "." + key + " must be an integer");
        }
        return long(*v);
    }

    void finish() const {
        for (const auto& e : s_.entries) {
            if (!used_.count(e.key)) fail_at(e.line, "unknown key '" + e.key + "' in [" + s_.name + "]");
        }
    }

private:
    const ConfigDocument::Section& s_;
    std::set<std::string> used_;
};

MotilitySpec::Kind motility_kind(const std::string& s) {
    using K = MotilitySpec::Kind;
    if (s == "exp_decay") return K::ExpDecay;
    if (s == "power_decay") return K::PowerDecay;
    if (s == "log_growth") return K::LogGrowth;
    if (s == "affine_osc") return K::AffineOsc;
    if (s == "constant") return K::Constant;
    throw ConfigError("motility.kind: unknown kind '" + s + "'");
}

SourceSpec::Kind source_kind(const std::string& s) {
    using K = SourceSpec::Kind;
    if (s == "log_power") return K::LogPower;
    if (s == "zero") return K::Zero;
    if (s == "logistic") return K::Logistic;
    throw ConfigError("source.kind: unknown kind '" + s + "'");
}

InitialConditionSpec::Kind initial_kind(const std::string& s) {
    using K = InitialConditionSpec::Kind;
    if (s == "constant") return K::Constant;
    if (s == "gaussian") return K::GaussianBump;
    if (s == "perturbed") return K::PerturbedConstant;
    throw ConfigError("initial.kind: unknown kind '" + s + "'");
}

// Parameter names per motility kind, in (p1, p2) order.
std::vector<std::string> motility_params(MotilitySpec::Kind k) {
    using K = MotilitySpec::Kind;
    switch (k) {
        case K::ExpDecay: return {"chi"};
        case K::PowerDecay: return {"k"};
        case K::LogGrowth: return {"c"};
        case K::AffineOsc: return {"a", "b"};
        case K::Constant: return {"c"};
    }
    return {};
}

std::string positivity_name(PositivityMode m) {
    return m == PositivityMode::FullyExplicit ? "fully_explicit" : "implicit_degradation";
}

struct PresetDef {
    const char* name;
    const char* description;
    std::function<RunConfig()> make;
};

RunConfig base_1d(const char* name) {
    RunConfig c;
    c.name = name;
    c.grid = Grid::line(8.0, 256);
    c.horizon = 50.0;
    c.step.diagnostics_stride = 50;
    return c;
}

RunConfig base_2d(const char* name) {
    RunConfig c;
    c.name = name;
    c.grid = Grid::rect(16.0, 16.0, 128, 128);
    c.motility = MotilitySpec::exp_decay(1.0);
    // Corner bump: a quarter Gaussian of mass 5π. In the pilot sweep
    // (tools/pilot_blowup2d.toml, masses 2π..5π) this is the first mass whose
    // source-free run classifies Growing by t = 50; 4π peaks at 14 from 8.
    c.initial = InitialConditionSpec::gaussian({0.0, 0.0}, 1.0, 10.0, 0.0);
    c.horizon = 50.0;
    c.step.diagnostics_stride = 100;
    return c;
}

const std::vector<PresetDef>& presets() {
    static const std::vector<PresetDef> defs = {
        {"blowup2d", "exp(-v) motility, no source, concentrated corner Gaussian on a 128x128 grid",
         [] {
             RunConfig c = base_2d("blowup2d");
             c.source = SourceSpec::zero();
             return c;
         }},
        {"suppress2d", "as blowup2d with degradation f(u) = log(1+u)",
         [] {
             RunConfig c = base_2d("suppress2d");
             c.source = SourceSpec::log_power(1.0, 1.0, 0.0);
             return c;
         }},
        {"suppress1d", "exp(-v) motility, f(u) = log(1+u), Gaussian bump on [0, 8]",
         [] {
             RunConfig c = base_1d("suppress1d");
             c.motility = MotilitySpec::exp_decay(1.0);
             c.source = SourceSpec::log_power(1.0, 1.0, 0.0);
             c.initial = InitialConditionSpec::gaussian({4.0, 0.0}, 0.5, 5.0, 0.0);
             return c;
         }},
        {"concave1d", "motility 1 + log(1+v), f(u) = log(1+u), Gaussian of peak 10",
         [] {
             RunConfig c = base_1d("concave1d");
             c.motility = MotilitySpec::log_growth(1.0);
             c.source = SourceSpec::log_power(1.0, 1.0, 0.0);
             c.initial = InitialConditionSpec::gaussian({4.0, 0.0}, 0.5, 10.0, 0.0);
             return c;
         }},
        {"boundedgamma1d", "exp(-v) motility (bounded branch), f(u) = 3 log(1+u) - 3 log 3, equilibrium 2",
         [] {
             RunConfig c = base_1d("boundedgamma1d");
             c.motility = MotilitySpec::exp_decay(1.0);
             c.source = SourceSpec::log_power(3.0, 1.0, 3.0 * std::log(3.0));
             c.initial = InitialConditionSpec::gaussian({4.0, 0.0}, 0.5, 4.0, 0.2);
             return c;
         }},
        {"nonmono1d", "non-monotone motility 3 + v + 2 sin v, f(u) = 2 log(1+u) - 2 log 3, equilibrium 2",
         [] {
             RunConfig c = base_1d("nonmono1d");
             c.motility = MotilitySpec::affine_osc(3.0, 2.0);
             c.source = SourceSpec::log_power(2.0, 1.0, 2.0 * std::log(3.0));
             c.initial = InitialConditionSpec::gaussian({4.0, 0.0}, 0.5, 6.0, 0.5);
             return c;
         }},
    };
    return defs;
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::istream& is) {
    ConfigDocument doc;
    doc.sections.push_back({"", {}});
    std::string raw;
    int line = 0;
    std::set<std::string> seen_sections{""};
    while (std::getline(is, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3) fail_at(line, "malformed section header");
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (!seen_sections.insert(name).second) fail_at(line, "duplicate section [" + name + "]");
            doc.sections.push_back({name, {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail_at(line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (!key.empty() && key.front() == '"') key = unquote(key, line);
        if (key.empty()) fail_at(line, "empty key");
        auto& entries = doc.sections.back().entries;
        for (const auto& e : entries) {
            if (e.key == key) fail_at(line, "duplicate key '" + key + "'");
        }
        entries.push_back({key, parse_value(s.substr(eq + 1), line), line});
    }
    return doc;
}

ConfigDocument ConfigDocument::parse_string(const std::string& text) {
    std::istringstream is(text);
    return parse(is);
}

ConfigDocument ConfigDocument::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'");
    return parse(is);
}

const ConfigDocument::Section* ConfigDocument::find(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

void RunConfig::validate() const {
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("grid: ") + e.what());
    }
    try {
        motility.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("motility: ") + e.what());
    }
    try {
        source.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("source: ") + e.what());
    }
    step.validate();
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("run.horizon must be finite and >= 0");
    if (max_steps < 0) throw ConfigError("run.max_steps must be >= 0");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (!(snapshot_times[i] >= 0.0) || (i && !(snapshot_times[i] > snapshot_times[i - 1]))) {
            throw ConfigError("run.snapshot_times must be nonnegative and strictly increasing");
        }
    }
    if (initial_mass && !(*initial_mass > 0.0)) throw ConfigError("initial.mass must be positive");
    if (!(initial.width > 0.0)) throw ConfigError("initial.width must be positive");
    if (!(classifier.plateau_tol > 0.0)) throw ConfigError("classifier.plateau_tol must be positive");
    if (!(classifier.growth_factor > 1.0)) throw ConfigError("classifier.growth_factor must exceed 1");
    if (!(classifier.cap > 0.0)) throw ConfigError("classifier.cap must be positive");
    if (!(classifier.min_time >= 0.0)) throw ConfigError("classifier.min_time must be >= 0");
    if (!(bound_tol >= 0.0)) throw ConfigError("bounds.tol must be >= 0");
    if (!(domination_tol >= 0.0)) throw ConfigError("bounds.domination_tol must be >= 0");
    if (max_runs < 1) throw ConfigError("sweep.max_runs must be >= 1");
    std::size_t total = 1;
    for (const auto& ax : sweep) {
        if (ax.values.empty()) throw ConfigError("sweep axis '" + ax.name + "' has no values");
        RunConfig probe = *this;
        apply_axis(probe, ax.name, ax.values.front());
        total *= ax.values.size();
        if (total > std::size_t(max_runs)) {
            throw ConfigError("sweep has more than sweep.max_runs = " + std::to_string(max_runs) + " runs");
        }
    }
    try {
        (void)init_field(resolved_initial(), grid);
    } catch (const ConstructionError& e) {
        throw ConfigError(std::string("initial: ") + e.what());
    }
}

InitialConditionSpec RunConfig::resolved_initial() const {
    InitialConditionSpec ic = initial;
    ic.seed = seed;
    if (!initial_mass) return ic;
    if (ic.kind == InitialConditionSpec::Kind::GaussianBump) {
        InitialConditionSpec unit = ic;
        unit.amplitude = 1.0;
        unit.level = 0.0;
        const double bump = integrate(init_field(unit, grid));
        ic.amplitude = (*initial_mass - ic.level * grid.measure()) / bump;
        if (!(ic.amplitude >= 0.0)) throw ConfigError("initial.mass is below the floor's own mass");
    } else {
        InitialConditionSpec flat = ic;
        flat.amplitude = 0.0;
        flat.noise = 0.0;
        flat.level = 1.0;
        const double unit = integrate(init_field(flat, grid));
        ic.level = *initial_mass / unit;
    }
    return ic;
}

RunConfig config_from_document(const ConfigDocument& doc) {
    RunConfig cfg;
    if (const auto* s = doc.find("preset")) {
        SectionReader r(*s);
        if (auto n = r.string("name")) cfg = preset(*n);
        r.finish();
    }
    static const std::set<std::string> known = {"",     "preset", "grid",       "motility", "source", "initial",
                                                "step", "run",    "classifier", "bounds",   "sweep"};
    for (const auto& s : doc.sections) {
        if (!known.count(s.name)) throw ConfigError("unknown section [" + s.name + "]");
    }
    if (const auto* s = doc.find("")) {
        SectionReader r(*s);
        if (auto n = r.string("name")) cfg.name = *n;
        r.finish();
    }
    if (const auto* s = doc.find("grid")) {
        SectionReader r(*s);
        const long dim = r.integer("dim").value_or(cfg.grid.dim);
        auto extent = r.array("extent");
        auto cells = r.array("cells");
        if (dim != 1 && dim != 2) throw ConfigError("grid.dim must be 1 or 2");
        std::vector<double> ext = extent.value_or(std::vector<double>{cfg.grid.extent[0], cfg.grid.extent[1]});
        std::vector<double> n = cells.value_or(std::vector<double>{double(cfg.grid.cells[0]), double(cfg.grid.cells[1])});
        if (ext.size() < std::size_t(dim) || n.size() < std::size_t(dim)) {
            throw ConfigError("grid.extent and grid.cells need one entry per dimension");
        }
        for (double c : n) {
            if (c != std::floor(c) || c < 1 || c > 1e7) throw ConfigError("grid.cells must be positive integers");
        }
        try {
            cfg.grid = dim == 1 ? Grid::line(ext[0], int(n[0])) : Grid::rect(ext[0], ext[1], int(n[0]), int(n[1]));
        } catch (const ConstructionError& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
        r.finish();
    }
    if (const auto* s = doc.find("motility")) {
        SectionReader r(*s);
        if (auto k = r.string("kind")) {
            const auto kind = motility_kind(*k);
            if (kind != cfg.motility.kind) {
                cfg.motility = MotilitySpec{};
                cfg.motility.kind = kind;
                cfg.motility.p2 = 0.0;
            }
        }
        const auto names = motility_params(cfg.motility.kind);
        if (auto v = r.number(names[0])) cfg.motility.p1 = *v;
        if (names.size() > 1) {
            if (auto v = r.number(names[1])) cfg.motility.p2 = *v;
        }
        r.finish();
    }
    if (const auto* s = doc.find("source")) {
        SectionReader r(*s);
        if (auto k = r.string("kind")) cfg.source.kind = source_kind(*k);
        if (auto v = r.number("lambda")) cfg.source.lambda = *v;
        if (auto v = r.number("alpha")) cfg.source.alpha = *v;
        if (auto v = r.number("mu")) cfg.source.mu = *v;
        r.finish();
    }
    if (const auto* s = doc.find("initial")) {
        SectionReader r(*s);
        if (auto k = r.string("kind")) cfg.initial.kind = initial_kind(*k);
        if (auto v = r.number("level")) cfg.initial.level = *v;
        if (auto v = r.number("floor")) cfg.initial.level = *v;
        if (auto v = r.number("amplitude")) cfg.initial.amplitude = *v;
        if (auto v = r.number("width")) cfg.initial.width = *v;
        if (auto v = r.number("noise")) cfg.initial.noise = *v;
        if (auto v = r.number("mass")) cfg.initial_mass = *v;
        if (auto c = r.array("center")) {
            cfg.initial.center = {c->at(0), c->size() > 1 ? (*c)[1] : 0.0};
        }
        if (auto w = r.array("wave")) {
            for (double x : *w) {
                if (x != std::floor(x)) throw ConfigError("initial.wave must hold integers");
            }
            cfg.initial.wave = {int(w->at(0)), w->size() > 1 ? int((*w)[1]) : 0};
        }
        r.finish();
    }
    if (const auto* s = doc.find("step")) {
        SectionReader r(*s);
        if (auto v = r.number("cfl_safety")) cfg.step.cfl_safety = *v;
        if (auto v = r.number("dt_max")) cfg.step.dt_max = *v;
        if (auto v = r.integer("diagnostics_stride")) cfg.step.diagnostics_stride = int(*v);
        if (auto m = r.string("positivity_mode")) {
            if (*m == "implicit_degradation") {
                cfg.step.positivity_mode = PositivityMode::ImplicitDegradation;
            } else if (*m == "fully_explicit") {
                cfg.step.positivity_mode = PositivityMode::FullyExplicit;
            } else {
                throw ConfigError("step.positivity_mode: unknown mode '" + *m + "'");
            }
        }
        r.finish();
    }
    if (const auto* s = doc.find("run")) {
        SectionReader r(*s);
        if (auto v = r.number("horizon")) cfg.horizon = *v;
        if (auto v = r.integer("seed")) {
            if (*v < 0) throw ConfigError("run.seed must be >= 0");
            cfg.seed = std::uint64_t(*v);
        }
        if (auto v = r.array("snapshot_times")) cfg.snapshot_times = *v;
        if (auto v = r.boolean("comparison")) cfg.comparison = *v;
        if (auto v = r.integer("max_steps")) cfg.max_steps = *v;
        r.finish();
    }
    if (const auto* s = doc.find("classifier")) {
        SectionReader r(*s);
        if (auto v = r.number("min_time")) cfg.classifier.min_time = *v;
        if (auto v = r.number("plateau_tol")) cfg.classifier.plateau_tol = *v;
        if (auto v = r.number("growth_factor")) cfg.classifier.growth_factor = *v;
        if (auto v = r.number("cap")) cfg.classifier.cap = *v;
        r.finish();
    }
    if (const auto* s = doc.find("bounds")) {
        SectionReader r(*s);
        if (auto v = r.number("tol")) cfg.bound_tol = *v;
        if (auto v = r.number("domination_tol")) cfg.domination_tol = *v;
        r.finish();
    }
    if (const auto* s = doc.find("sweep")) {
        cfg.sweep.clear();
        for (const auto& e : s->entries) {
            if (e.key == "max_runs") {
                const auto* d = std::get_if<double>(&e.value);
                if (!d || *d != std::floor(*d)) fail_at(e.line, "sweep.max_runs must be an integer");
                cfg.max_runs = int(*d);
                continue;
            }
            SweepAxis ax;
            ax.name = e.key;
            if (const auto* a = std::get_if<std::vector<double>>(&e.value)) {
                ax.values = *a;
            } else if (const auto* d = std::get_if<double>(&e.value)) {
                ax.values = {*d};
            } else {
                fail_at(e.line, "sweep axis '" + e.key + "' must be a number or an array of numbers");
            }
            cfg.sweep.push_back(std::move(ax));
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) { return config_from_document(ConfigDocument::load(path)); }

void write_config(const RunConfig& c, std::ostream& os) {
    auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << "\n"; };
    auto str = [](const std::string& s) { return "\"" + s + "\""; };
    const InitialConditionSpec ic = c.resolved_initial();

    kv("name", str(c.name));
    os << "\n[grid]\n";
    kv("dim", std::to_string(c.grid.dim));
    if (c.grid.dim == 1) {
        kv("extent", format_array({c.grid.extent[0]}));
        kv("cells", "[" + std::to_string(c.grid.cells[0]) + "]");
    } else {
        kv("extent", format_array({c.grid.extent[0], c.grid.extent[1]}));
        kv("cells", "[" + std::to_string(c.grid.cells[0]) + ", " + std::to_string(c.grid.cells[1]) + "]");
    }
    os << "\n[motility]\n";
    kv("kind", str(c.motility.kind_name()));
    const auto names = motility_params(c.motility.kind);
    kv(names[0].c_str(), format_number(c.motility.p1));
    if (names.size() > 1) kv(names[1].c_str(), format_number(c.motility.p2));

    os << "\n[source]\n";
    kv("kind", str(c.source.kind_name()));
    kv("lambda", format_number(c.source.lambda));
    kv("alpha", format_number(c.source.alpha));
    kv("mu", format_number(c.source.mu));

    // The echo carries the resolved amplitude/level, so `mass` is not repeated.
    os << "\n[initial]\n";
    kv("kind", str(ic.kind_name()));
    kv("level", format_number(ic.level));
    kv("amplitude", format_number(ic.amplitude));
    kv("width", format_number(ic.width));
    kv("center", format_array({ic.center[0], ic.center[1]}));
    kv("wave", "[" + std::to_string(ic.wave[0]) + ", " + std::to_string(ic.wave[1]) + "]");
    kv("noise", format_number(ic.noise));

    os << "\n[step]\n";
    kv("cfl_safety", format_number(c.step.cfl_safety));
    kv("dt_max", format_number(c.step.dt_max));
    kv("positivity_mode", str(positivity_name(c.step.positivity_mode)));
    kv("diagnostics_stride", std::to_string(c.step.diagnostics_stride));

    os << "\n[run]\n";
    kv("horizon", format_number(c.horizon));
    kv("seed", std::to_string(c.seed));
    kv("snapshot_times", format_array(c.snapshot_times));
    kv("comparison", c.comparison ? "true" : "false");
    kv("max_steps", std::to_string(c.max_steps));

    os << "\n[classifier]\n";
    kv("min_time", format_number(c.classifier.min_time));
    kv("plateau_tol", format_number(c.classifier.plateau_tol));
    kv("growth_factor", format_number(c.classifier.growth_factor));
    kv("cap", format_number(c.classifier.cap));

    os << "\n[bounds]\n";
    kv("tol", format_number(c.bound_tol));
    kv("domination_tol", format_number(c.domination_tol));

    if (!c.sweep.empty()) {
        os << "\n[sweep]\n";
        kv("max_runs", std::to_string(c.max_runs));
        for (const auto& ax : c.sweep) kv(str(ax.name).c_str(), format_array(ax.values));
    }
}

std::string config_to_string(const RunConfig& cfg) {
    std::ostringstream os;
    write_config(cfg, os);
    return os.str();
}

void apply_axis(RunConfig& cfg, const std::string& name, double value) {
    if (name == "source.lambda") {
        // λ = 0 is read as the source-free model.
        if (value == 0.0) {
            cfg.source = SourceSpec::zero();
        } else {
            if (cfg.source.kind == SourceSpec::Kind::Zero) cfg.source = SourceSpec::log_power(value, 1.0, 0.0);
            cfg.source.lambda = value;
        }
    } else if (name == "source.alpha") {
        cfg.source.alpha = value;
    } else if (name == "source.mu") {
        cfg.source.mu = value;
    } else if (name == "initial.mass") {
        cfg.initial_mass = value;
    } else if (name == "initial.amplitude") {
        cfg.initial.amplitude = value;
        cfg.initial_mass.reset();
    } else if (name == "initial.width") {
        cfg.initial.width = value;
    } else if (name.rfind("motility.", 0) == 0) {
        const std::string key = name.substr(9);
        const auto names = motility_params(cfg.motility.kind);
        if (key == names[0]) {
            cfg.motility.p1 = value;
        } else if (names.size() > 1 && key == names[1]) {
            cfg.motility.p2 = value;
        } else {
            throw ConfigError("sweep axis '" + name + "' is not a parameter of motility kind " +
                              cfg.motility.kind_name());
        }
    } else {
        throw ConfigError("unknown sweep axis '" + name + "'");
    }
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& p : presets()) out.push_back(p.name);
    return out;
}

RunConfig preset(const std::string& name) {
    for (const auto& p : presets()) {
        if (name == p.name) return p.make();
    }
    throw ConfigError("unknown preset '" + name + "'");
}

std::string preset_description(const std::string& name) {
    for (const auto& p : presets()) {
        if (name == p.name) return p.description;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace kssim
