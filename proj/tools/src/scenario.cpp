#include "hsplab_cli/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hsplab/errors.hpp"
#include "hsplab/functionals.hpp"
#include "hsplab/grid.hpp"
#include "hsplab/spectral.hpp"
#include "hsplab/theory.hpp"

namespace hsplab::cli {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Strict view of one JSON object: every key must be consumed.
class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ValidationError(label(), "expected an object");
    }

    /// A null value counts as absent (the canonical form writes unset optionals as null).
    bool has(const std::string& key) {
        const auto it = obj_.find(key);
        if (it == obj_.end()) return false;
        if (it->is_null()) {
            seen_.insert(key);
            return false;
        }
        return true;
    }

    std::string child(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return obj_.at(key);
    }

    void number(const std::string& key, double& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number()) throw ValidationError(child(key), "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) throw ValidationError(child(key), "must be finite");
    }

    void integer(const std::string& key, long long& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ValidationError(child(key), "expected an integer");
        out = v.get<long long>();
    }

    void count(const std::string& key, std::size_t& out) {
        long long v = static_cast<long long>(out);
        integer(key, v);
        if (v < 0) throw ValidationError(child(key), "must be nonnegative");
        out = static_cast<std::size_t>(v);
    }

    void boolean(const std::string& key, bool& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ValidationError(child(key), "expected true or false");
        out = v.get<bool>();
    }

    void string(const std::string& key, std::string& out) {
        if (!has(key)) return;
        const json& v = raw(key);
        if (!v.is_string()) throw ValidationError(child(key), "expected a string");
        out = v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ValidationError(child(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                throw ValidationError(child(key) + "[" + std::to_string(i) + "]",
                                      "expected a finite number");
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::pair<double, double> interval(const std::string& key) {
        auto v = numbers(key);
        if (v.size() != 2) throw ValidationError(child(key), "expected [lo, hi]");
        if (!(v[0] >= 0.0 && v[0] < v[1])) throw ValidationError(child(key), "need 0 <= lo < hi");
        return {v[0], v[1]};
    }

    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) throw ValidationError(child(key), "unknown key");
        }
    }

private:
    std::string label() const { return path_.empty() ? "scenario" : path_; }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

DataDescriptor parse_data(const json& doc) {
    Reader r(doc, "data");
    std::string kind;
    r.string("kind", kind);
    DataDescriptor out;
    if (kind == "gaussian") {
        Gaussian g;
        r.number("amplitude", g.amplitude);
        r.number("width", g.width);
        out = g;
    } else if (kind == "ground_state") {
        ScaledGroundState w;
        r.number("lambda", w.lambda);
        out = w;
    } else if (kind == "frequency_profile") {
        FrequencyProfile f;
        r.number("s", f.s);
        r.number("cutoff", f.cutoff);
        r.number("amplitude", f.amplitude);
        out = f;
    } else {
        throw ValidationError("data.kind",
                              "expected gaussian, ground_state or frequency_profile, got '" +
                                  kind + "'");
    }
    r.finish();
    return out;
}

OuterBoundary parse_boundary(const std::string& name) {
    if (name == "dirichlet") return OuterBoundary::dirichlet;
    if (name == "harmonic") return OuterBoundary::harmonic;
    throw ValidationError("solver.boundary", "expected dirichlet or harmonic, got '" + name + "'");
}

const char* boundary_name(OuterBoundary b) {
    return b == OuterBoundary::harmonic ? "harmonic" : "dirichlet";
}

void parse_solver(const json& doc, Scenario& s) {
    Reader r(doc, "solver");
    SolverConfig& c = s.solver;
    r.number("dt_init", c.dt_init);
    r.number("dt_min", c.dt_min);
    r.number("dt_max", c.dt_max);
    r.number("t_end", c.t_end);
    r.number("blowup_threshold", c.blowup_threshold);
    r.number("dissipation_threshold", c.dissipation_threshold);
    r.count("record_stride", c.record_stride);
    r.number("safety", c.safety);
    r.number("tolerance", c.tolerance);
    r.boolean("adaptive", c.adaptive);
    r.boolean("nonlinear", c.nonlinear);
    r.boolean("stop_on_dissipation", c.stop_on_dissipation);
    std::string boundary = boundary_name(c.boundary);
    r.string("boundary", boundary);
    c.boundary = parse_boundary(boundary);
    r.count("snapshots", s.snapshots);
    r.count("max_steps", c.max_steps);
    r.finish();
}

Analysis parse_analysis(const json& doc, const std::string& path) {
    Reader r(doc, path);
    Analysis a;
    if (r.has("fit_window")) a.fit_window = r.interval("fit_window");
    if (r.has("splitting_m")) {
        double m = 0.0;
        r.number("splitting_m", m);
        a.splitting_m = m;
    }
    if (r.has("kato_q")) {
        double q = 0.0;
        r.number("kato_q", q);
        a.kato_q = q;
    }
    if (r.has("decay_character_window")) {
        a.decay_character_window = r.interval("decay_character_window");
    }
    r.finish();
    return a;
}

void parse_inequalities(const json& doc, InequalityOptions& o) {
    Reader r(doc, "inequalities");
    r.count("corpus_size", o.corpus_size);
    r.boolean("include_ground_state", o.include_ground_state);
    r.boolean("rellich", o.rellich);
    if (r.has("smoothing_times")) o.smoothing_times = r.numbers("smoothing_times");
    r.finish();
}

Sweep parse_sweep(const json& doc) {
    Reader r(doc, "sweep");
    Sweep sw;
    r.string("axis", sw.axis);
    if (r.has("values")) sw.values = r.numbers("values");
    r.finish();
    return sw;
}

template <class F>
auto with_prefix(const std::string& prefix, F&& f) {
    try {
        return f();
    } catch (const ValidationError& e) {
        if (e.field().rfind(prefix, 0) == 0) throw;
        const std::string what = e.what();
        const std::string msg = what.substr(e.field().size() + 2);
        throw ValidationError(prefix + e.field(), msg);
    }
}

}  // namespace

Scenario parse_scenario(const nlohmann::json& doc) {
    Reader top(doc, "");
    long long version = -1;
    if (!top.has("schema_version")) throw ValidationError("schema_version", "missing");
    top.integer("schema_version", version);
    if (version != kSchemaVersion) {
        throw ValidationError("schema_version", "unsupported version " + std::to_string(version) +
                                                    ", expected " + std::to_string(kSchemaVersion));
    }
    Scenario s;
    if (top.has("params")) {
        Reader r(top.raw("params"), "params");
        long long d = s.d;
        r.integer("d", d);
        s.d = static_cast<int>(d);
        r.number("gamma", s.gamma);
        r.finish();
    }
    if (top.has("grid")) {
        Reader r(top.raw("grid"), "grid");
        r.count("n", s.n);
        r.number("r_max", s.r_max);
        r.finish();
    }
    if (top.has("data")) s.data = parse_data(top.raw("data"));
    if (top.has("solver")) parse_solver(top.raw("solver"), s);
    if (top.has("analyses")) {
        const json& list = top.raw("analyses");
        if (!list.is_array()) throw ValidationError("analyses", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            s.analyses.push_back(parse_analysis(list[i], "analyses[" + std::to_string(i) + "]"));
        }
    }
    if (top.has("q_star")) {
        double q = 0.0;
        top.number("q_star", q);
        s.q_star = q;
    }
    if (top.has("inequalities")) parse_inequalities(top.raw("inequalities"), s.inequalities);
    if (top.has("sweep")) s.sweep = parse_sweep(top.raw("sweep"));
    if (top.has("seed")) {
        long long seed = 0;
        top.integer("seed", seed);
        if (seed < 0) throw ValidationError("seed", "must be nonnegative");
        s.seed = static_cast<std::uint64_t>(seed);
    }
    top.string("output_dir", s.output_dir);
    top.finish();
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config", "cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

ProblemParams scenario_params(const Scenario& s) {
    return with_prefix("params.", [&] { return make_params(s.d, s.gamma); });
}

void validate_scenario(const Scenario& s) {
    const ProblemParams params = scenario_params(s);
    make_grid(params, s.n, s.r_max);
    validate(s.data, params);
    SolverConfig c = s.solver;
    c.snapshot_times = snapshot_schedule(c.t_end, s.snapshots);
    c.validate();
    if (s.snapshots > kMaxSnapshots - 1) {
        throw ValidationError("solver.snapshots",
                              "at most " + std::to_string(kMaxSnapshots - 1) + " snapshots");
    }
    for (std::size_t i = 0; i < s.analyses.size(); ++i) {
        const Analysis& a = s.analyses[i];
        const std::string path = "analyses[" + std::to_string(i) + "]";
        if (a.fit_window && a.fit_window->second > c.t_end) {
            throw ValidationError(path + ".fit_window", "window ends after solver.t_end");
        }
        if (a.splitting_m && !(*a.splitting_m > 0.0)) {
            throw ValidationError(path + ".splitting_m", "must be positive");
        }
        if (a.kato_q && !(*a.kato_q > 1.0)) {
            throw ValidationError(path + ".kato_q", "need q > 1");
        }
    }
    if (s.inequalities.corpus_size == 0) {
        throw ValidationError("inequalities.corpus_size", "must be at least 1");
    }
    for (double t : s.inequalities.smoothing_times) {
        if (!(t > 0.0)) throw ValidationError("inequalities.smoothing_times", "times must be positive");
    }
    if (s.sweep) {
        const std::string& axis = s.sweep->axis;
        if (axis != "lambda" && axis != "gamma" && axis != "d" && axis != "q_star") {
            throw ValidationError("sweep.axis",
                                  "expected lambda, gamma, d or q_star, got '" + axis + "'");
        }
        if (s.sweep->values.empty()) throw ValidationError("sweep.values", "axis list is empty");
        if (axis == "d") {
            for (double v : s.sweep->values) {
                if (v != std::floor(v)) throw ValidationError("sweep.values", "d must be an integer");
            }
        }
    }
    if (s.output_dir.empty()) throw ValidationError("output_dir", "must not be empty");
}

nlohmann::ordered_json Scenario::to_json() const {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["params"] = {{"d", d}, {"gamma", gamma}};
    j["grid"] = {{"n", n}, {"r_max", r_max}};
    std::visit(overloaded{
                   [&](const Gaussian& g) {
                       j["data"] = {{"kind", "gaussian"},
                                    {"amplitude", g.amplitude},
                                    {"width", g.width}};
                   },
                   [&](const ScaledGroundState& w) {
                       j["data"] = {{"kind", "ground_state"}, {"lambda", w.lambda}};
                   },
                   [&](const FrequencyProfile& f) {
                       j["data"] = {{"kind", "frequency_profile"},
                                    {"s", f.s},
                                    {"cutoff", f.cutoff},
                                    {"amplitude", f.amplitude}};
                   },
               },
               data);
    const SolverConfig& c = solver;
    j["solver"] = {{"dt_init", c.dt_init},
                   {"dt_min", c.dt_min},
                   {"dt_max", c.dt_max},
                   {"t_end", c.t_end},
                   {"blowup_threshold", c.blowup_threshold},
                   {"dissipation_threshold", c.dissipation_threshold},
                   {"record_stride", c.record_stride},
                   {"safety", c.safety},
                   {"tolerance", c.tolerance},
                   {"adaptive", c.adaptive},
                   {"nonlinear", c.nonlinear},
                   {"stop_on_dissipation", c.stop_on_dissipation},
                   {"boundary", boundary_name(c.boundary)},
                   {"snapshots", snapshots},
                   {"max_steps", c.max_steps}};
    j["analyses"] = nlohmann::ordered_json::array();
    for (const Analysis& a : analyses) {
        nlohmann::ordered_json aj;
        aj["fit_window"] = a.fit_window ? nlohmann::ordered_json{a.fit_window->first,
                                                                 a.fit_window->second}
                                        : nlohmann::ordered_json();
        aj["splitting_m"] = a.splitting_m ? nlohmann::ordered_json(*a.splitting_m)
                                          : nlohmann::ordered_json();
        aj["kato_q"] = a.kato_q ? nlohmann::ordered_json(*a.kato_q) : nlohmann::ordered_json();
        aj["decay_character_window"] = {a.decay_character_window.first,
                                        a.decay_character_window.second};
        j["analyses"].push_back(aj);
    }
    j["q_star"] = q_star ? nlohmann::ordered_json(*q_star) : nlohmann::ordered_json();
    j["inequalities"] = {{"corpus_size", inequalities.corpus_size},
                         {"include_ground_state", inequalities.include_ground_state},
                         {"rellich", inequalities.rellich},
                         {"smoothing_times", inequalities.smoothing_times}};
    j["sweep"] = sweep ? nlohmann::ordered_json{{"axis", sweep->axis}, {"values", sweep->values}}
                       : nlohmann::ordered_json();
    j["seed"] = seed;
    return j;
}

std::string scenario_hash(const Scenario& s) {
    const std::string text = s.to_json().dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<double> snapshot_schedule(double t_end, std::size_t count) {
    std::vector<double> out;
    if (count == 0) return out;
    out.push_back(0.0);
    const double lo = 2e-4 * t_end;
    if (count == 1) {
        out.push_back(t_end);
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        out.push_back(i + 1 == count ? t_end : lo * std::pow(t_end / lo, f));
    }
    return out;
}

double derived_q_star(const DataDescriptor& data) {
    return std::visit(overloaded{
                          [](const Gaussian&) { return 1.0; },
                          [](const ScaledGroundState&) { return -1.0; },
                          [](const FrequencyProfile& f) { return f.s + 1.0; },
                      },
                      data);
}

double effective_q_star(const Scenario& s) {
    return s.q_star ? *s.q_star : derived_q_star(s.data);
}

}  // namespace hsplab::cli
