#include "hsplab_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "hsplab/corpus.hpp"
#include "hsplab/errors.hpp"
#include "hsplab/functionals.hpp"
#include "hsplab/initial_data.hpp"

namespace hsplab::cli {

namespace fs = std::filesystem;

namespace {

Json number(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

bool needs_snapshots(const Scenario& s) {
    return std::any_of(s.analyses.begin(), s.analyses.end(),
                       [](const Analysis& a) { return a.splitting_m || a.kato_q; });
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

void write_json(const fs::path& path, const Json& j) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

fs::path prepare_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

Json kato_json(const KatoSeries& k) {
    return Json{{"q", k.q},
                {"admissible", k.admissible},
                {"samples", k.values.size()},
                {"final_value", k.values.empty() ? Json(nullptr) : number(k.values.back())},
                {"decreasing_final_decade", k.decreasing_final_decade}};
}

Json lyapunov_json(const LyapunovReport& l) {
    return Json{{"start_time", number(l.start_time)},
                {"checked", l.checked},
                {"increases", l.increases},
                {"max_increase", number(l.max_increase)}};
}

/// Value of h at the first recorded time inside the window, with its index.
std::optional<std::size_t> first_in_window(const Trajectory& traj, std::pair<double, double> w) {
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] >= w.first && traj.times[i] <= w.second) return i;
    }
    return std::nullopt;
}

void write_envelope(const fs::path& dir, const SimulationResult& r) {
    const Trajectory& traj = r.trajectory;
    double scale = traj.reports.empty() ? 0.0 : traj.reports.front().h1_sq;
    if (r.prediction && !r.analyses.empty() && r.analyses.front().decay) {
        if (auto i = first_in_window(traj, r.analyses.front().window)) {
            scale = traj.reports[*i].h1_sq / r.prediction->envelope(traj.times[*i]);
        }
    }
    auto os = open_out(dir / "envelope.dat");
    os << "# t h1_sq predicted_envelope\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double env =
            r.prediction ? scale * r.prediction->envelope(traj.times[i]) : std::nan("");
        os << format_number(traj.times[i]) << ' ' << format_number(traj.reports[i].h1_sq) << ' '
           << format_number(env) << '\n';
    }

    auto gp = open_out(dir / "plot.gp");
    gp << "set terminal pngcairo size 900,600\n"
          "set output 'decay.png'\n"
          "set logscale xy\n"
          "set xlabel 't'\n"
          "set ylabel 'h1_sq'\n"
          "set key top right\n"
          "plot 'envelope.dat' using 1:2 with lines title 'h1_sq', \\\n"
          "     'envelope.dat' using 1:3 with lines dashtype 2 title 'predicted envelope'\n";
}

void set_amplitude(DataDescriptor& data, double value) {
    if (auto* g = std::get_if<Gaussian>(&data)) g->amplitude = value;
    if (auto* w = std::get_if<ScaledGroundState>(&data)) w->lambda = value;
    if (auto* f = std::get_if<FrequencyProfile>(&data)) f->amplitude = value;
}

}  // namespace

bool AnalysisResult::passed() const {
    if (decay && !decay->bound_satisfied) return false;
    if (splitting && !splitting->holds) return false;
    return true;
}

Json AnalysisResult::to_json() const {
    Json j;
    j["fit_window"] = Json::array({window.first, window.second});
    j["decay_report"] = decay ? hsplab::to_json(*decay) : Json(nullptr);
    j["log_envelope_ratio"] = number(log_envelope_ratio);
    j["preliminary_decay_holds"] = preliminary_decay_holds;
    j["splitting"] = splitting ? hsplab::to_json(*splitting) : Json(nullptr);
    j["kato"] = kato ? kato_json(*kato) : Json(nullptr);
    j["errors"] = errors;
    return j;
}

bool SimulationResult::analyses_passed() const {
    return std::all_of(analyses.begin(), analyses.end(),
                       [](const AnalysisResult& a) { return a.passed(); });
}

SolverConfig solver_config(const Scenario& s) {
    SolverConfig c = s.solver;
    std::size_t count = s.snapshots;
    if (count == 0 && needs_snapshots(s)) count = kDefaultSnapshots;
    c.snapshot_times = snapshot_schedule(c.t_end, count);
    return c;
}

void validate_analyses(const Scenario& s) {
    if (s.analyses.empty()) return;
    const ProblemParams params = scenario_params(s);
    const double q_star = effective_q_star(s);
    try {
        rate_predictor(params, q_star);
    } catch (const ValidationError& e) {
        throw ValidationError("analyses", std::string("decay analyses need a rate prediction: ") +
                                              e.what());
    }
    for (std::size_t i = 0; i < s.analyses.size(); ++i) {
        const Analysis& a = s.analyses[i];
        if (!a.splitting_m) continue;
        const double floor = std::max(0.5 * params.d + q_star, 1.0);
        if (!(*a.splitting_m > floor)) {
            std::ostringstream os;
            os << "need m > max(d/2 + q*, 1) = " << floor;
            throw ValidationError("analyses[" + std::to_string(i) + "].splitting_m", os.str());
        }
    }
}

SimulationResult simulate(const Scenario& s) {
    const ProblemParams params = scenario_params(s);
    const GridPtr grid = make_grid(params, s.n, s.r_max);
    const RadialField u0 = sample_initial_data(s.data, params, grid);

    SimulationResult r;
    r.hash = scenario_hash(s);
    r.trajectory = run(u0, params, solver_config(s));
    const Trajectory& traj = r.trajectory;
    const double q_star = effective_q_star(s);
    try {
        r.prediction = rate_predictor(params, q_star);
    } catch (const ValidationError& e) {
        r.prediction_error = e.what();
    }
    r.lyapunov = lyapunov_check(traj);

    for (const Analysis& a : s.analyses) {
        AnalysisResult ar;
        ar.analysis = a;
        ar.window = a.fit_window ? *a.fit_window : default_fit_window(traj);
        auto attempt = [&](const char* what, auto&& f) {
            try {
                f();
            } catch (const std::exception& e) {
                ar.errors.push_back(std::string(what) + ": " + e.what());
            }
        };
        if (r.prediction) {
            attempt("fit", [&] { ar.decay = fit_decay_exponent(traj, ar.window, *r.prediction); });
        }
        if (traj.outcome != Outcome::blowup) {
            attempt("log_envelope", [&] {
                ar.log_envelope_ratio = log_envelope_ratio(traj, ar.window);
                ar.preliminary_decay_holds = preliminary_decay_holds(traj, ar.window);
            });
        }
        if (a.splitting_m) {
            attempt("splitting",
                    [&] { ar.splitting = fourier_splitting_check(traj, *a.splitting_m, q_star); });
        }
        if (a.kato_q) {
            attempt("kato", [&] { ar.kato = kato_weighted_norm(traj, *a.kato_q); });
        }
        r.analyses.push_back(std::move(ar));
    }
    return r;
}

CharacterReport decay_character(const Scenario& s) {
    const ProblemParams params = scenario_params(s);
    const GridPtr grid = make_grid(params, s.n, s.r_max);
    const RadialField u0 = sample_initial_data(s.data, params, grid);
    const auto window =
        s.analyses.empty() ? Analysis{}.decay_character_window : s.analyses.front().decay_character_window;
    const FrequencyPtr freqs = low_frequencies(params.d, window.second, 64);
    const double lo = window.first > 0.0 ? window.first : 4.0 * freqs->d_rho;
    const SpectralField spectrum = hankel_transform(u0, freqs);
    CharacterReport out;
    out.u0 = estimate_decay_character(spectrum, lo, window.second);
    out.lambda_u0 = estimate_decay_character(spectrum.weighted(1.0), lo, window.second);
    return out;
}

SuiteReport run_inequality_suite(const Scenario& s) {
    const ProblemParams params = scenario_params(s);
    const InequalityOptions& opt = s.inequalities;
    if (opt.rellich && params.d < 5) {
        throw ValidationError("inequalities.rellich", "Rellich check requires d >= 5, got d = " +
                                                          std::to_string(params.d));
    }
    const GridPtr grid = make_grid(params, s.n, s.r_max);
    const LorentzIndex pair{2.0, 2.0};
    if (!smoothing_admissible(params.d, pair, pair, params.gamma)) {
        throw ValidationError("params.gamma", "weighted smoothing (2,2) -> (2,2) is not admissible");
    }

    struct Member {
        std::string label;
        RadialField field;
        bool ground_state = false;
    };
    std::vector<Member> members;
    auto corpus = random_corpus(grid, opt.corpus_size, s.seed);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        members.push_back({"corpus[" + std::to_string(i) + "] " + corpus[i].describe(),
                           std::move(corpus[i].field)});
    }
    if (opt.include_ground_state) {
        members.push_back({"ground_state", ground_state_field(params, grid), true});
    }

    SuiteReport rep;
    rep.hardy_sobolev_sharp = hardy_sobolev_constant(params);
    auto named = [](const char* name) {
        CheckSummary c;
        c.name = name;
        return c;
    };
    CheckSummary hs = named("hardy_sobolev"), rellich = named("rellich"),
                 holder = named("lorentz_holder"), embedding = named("critical_embedding"),
                 smoothing = named("weighted_smoothing");
    auto record = [](CheckSummary& c, const std::string& label, double ratio, bool holds) {
        ++c.evaluated;
        if (c.evaluated == 1 || ratio > c.worst_ratio) {
            c.worst_ratio = ratio;
            c.worst_sample = label;
        }
        if (!holds && c.holds) {
            c.holds = false;
            c.failing_sample = label;
        }
    };

    // |x|^{-gamma} against L^{d/gamma, inf}; gamma = 0 is the bounded weight 1.
    const RadialField weight =
        RadialField::sample(grid, [&](double r) { return std::pow(r, -params.gamma); });
    HolderIndices weighted;
    weighted.q1 = weighted.r1 = 2.0;
    weighted.r2 = std::numeric_limits<double>::infinity();
    weighted.q2 = params.gamma > 0.0 ? params.d / params.gamma : weighted.r2;
    weighted.q = 1.0 / (0.5 + params.gamma / params.d);
    weighted.r = 2.0;

    const double smoothing_constant = smoothing_l2_constant(grid, params.gamma);
    rep.smoothing_sharp = smoothing_constant;

    for (std::size_t i = 0; i < members.size(); ++i) {
        const Member& m = members[i];
        const double hs_ratio = check_hardy_sobolev(m.field, params) / rep.hardy_sobolev_sharp;
        if (m.ground_state) rep.ground_state_hs_ratio = hs_ratio * rep.hardy_sobolev_sharp;
        record(hs, m.label, hs_ratio, hs_ratio <= 1.0 + 1e-3);

        if (opt.rellich) {
            const Verdict v = check_rellich(m.field, params);
            record(rellich, m.label, v.ratio, v.holds);
        }

        const Member& partner = members[(i + 1) % members.size()];
        const Verdict vp = check_lorentz_holder(m.field, partner.field, HolderIndices{});
        record(holder, m.label + " x " + partner.label, vp.ratio, vp.holds);
        const Verdict vw = check_lorentz_holder(m.field, weight, weighted);
        record(holder, m.label + " x |x|^-gamma", vw.ratio, vw.holds);

        const Verdict ve = check_critical_embedding(m.field, params);
        record(embedding, m.label, ve.ratio, ve.holds);

        const SmoothingVerdict vs =
            check_weighted_smoothing(m.field, opt.smoothing_times, pair, pair,
                                     params.gamma, smoothing_constant);
        const double worst = *std::max_element(vs.ratios.begin(), vs.ratios.end());
        record(smoothing, m.label, worst / smoothing_constant, vs.holds);
    }

    rep.checks = {hs};
    if (opt.rellich) rep.checks.push_back(rellich);
    rep.checks.push_back(holder);
    rep.checks.push_back(embedding);
    rep.checks.push_back(smoothing);
    rep.hs_attained_at_ground_state = opt.include_ground_state &&
                                      hs.worst_sample == "ground_state" &&
                                      std::abs(hs.worst_ratio - 1.0) <= 1e-3;
    rep.all_pass = std::all_of(rep.checks.begin(), rep.checks.end(),
                               [](const CheckSummary& c) { return c.holds; });
    return rep;
}

Json to_json(const SuiteReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) {
        checks.push_back(Json{{"name", c.name},
                              {"evaluated", c.evaluated},
                              {"worst_ratio", number(c.worst_ratio)},
                              {"worst_sample", c.worst_sample},
                              {"holds", c.holds},
                              {"failing_sample", c.failing_sample.empty()
                                                     ? Json(nullptr)
                                                     : Json(c.failing_sample)}});
    }
    return Json{{"checks", checks},
                {"hardy_sobolev_sharp", number(r.hardy_sobolev_sharp)},
                {"ground_state_hs_ratio", number(r.ground_state_hs_ratio)},
                {"smoothing_sharp", number(r.smoothing_sharp)},
                {"hs_attained_at_ground_state", r.hs_attained_at_ground_state},
                {"all_pass", r.all_pass}};
}

Json to_json(const CharacterReport& r) {
    return Json{{"u0", to_json(r.u0)}, {"lambda_u0", to_json(r.lambda_u0)}};
}

Scenario sweep_member(const Scenario& s, double value) {
    Scenario m = s;
    m.sweep.reset();
    const std::string& axis = s.sweep->axis;
    if (axis == "lambda") {
        set_amplitude(m.data, value);
    } else if (axis == "gamma") {
        m.gamma = value;
    } else if (axis == "d") {
        m.d = static_cast<int>(value);
    } else if (axis == "q_star") {
        m.q_star = value;
    }
    if (m.analyses.empty()) m.analyses.push_back(Analysis{});
    return m;
}

std::vector<SweepRow> run_sweep(const Scenario& s, unsigned threads) {
    const auto& values = s.sweep->values;
    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = values[i];
            try {
                const Scenario m = sweep_member(s, values[i]);
                validate_scenario(m);
                const SimulationResult r = simulate(m);
                row.outcome = to_string(r.trajectory.outcome);
                std::vector<std::string> notes;
                if (r.prediction) {
                    row.predicted_exponent = r.prediction->exponent;
                    row.regime = to_string(r.prediction->regime);
                } else {
                    notes.push_back(r.prediction_error);
                }
                const AnalysisResult& a = r.analyses.front();
                if (a.decay) {
                    row.fitted_exponent = a.decay->fitted_exponent;
                    row.bound_satisfied = a.decay->bound_satisfied;
                }
                for (const auto& e : a.errors) {
                    if (e.rfind("fit", 0) == 0 && r.trajectory.outcome != Outcome::blowup) {
                        notes.push_back(e);
                    }
                }
                for (std::size_t k = 0; k < notes.size(); ++k) {
                    row.error += (k ? "; " : "") + notes[k];
                }
                row.report = run_report(r.hash, r.trajectory, a.decay ? &*a.decay : nullptr,
                                        r.prediction ? &*r.prediction : nullptr);
            } catch (const std::exception& e) {
                row.outcome = "error";
                row.error = e.what();
                row.report = nullptr;
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(values.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return a.value < b.value; });
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepHeader << '\n';
    for (const auto& r : rows) {
        os << format_number(r.value) << ',' << r.outcome << ','
           << (std::isnan(r.fitted_exponent) ? "" : format_number(r.fitted_exponent)) << ','
           << (std::isnan(r.predicted_exponent) ? "" : format_number(r.predicted_exponent)) << ','
           << (r.bound_satisfied ? (*r.bound_satisfied ? "true" : "false") : "") << ','
           << r.regime << ',' << csv_quote(r.error) << '\n';
    }
}

int cmd_simulate(const Scenario& s, const std::string& out_dir, std::ostream& log) {
    validate_analyses(s);
    const SimulationResult r = simulate(s);
    const Trajectory& traj = r.trajectory;

    const fs::path dir = prepare_dir(out_dir);
    {
        auto os = open_out(dir / "trajectory.csv");
        write_trajectory_csv(os, traj);
    }
    const DecayReport* decay =
        r.analyses.empty() || !r.analyses.front().decay ? nullptr : &*r.analyses.front().decay;
    write_json(dir / "run_report.json",
               run_report(r.hash, traj, decay, r.prediction ? &*r.prediction : nullptr));

    Json dj;
    dj["scenario_hash"] = r.hash;
    dj["outcome"] = to_string(traj.outcome);
    dj["prediction"] = r.prediction ? to_json(*r.prediction) : Json(nullptr);
    dj["lyapunov"] = lyapunov_json(r.lyapunov);
    dj["analyses"] = Json::array();
    for (std::size_t i = 0; i < r.analyses.size(); ++i) {
        dj["analyses"].push_back(r.analyses[i].to_json());
        if (r.analyses[i].splitting) {
            auto os = open_out(dir / ("splitting_" + std::to_string(i) + ".csv"));
            write_splitting_csv(os, *r.analyses[i].splitting);
        }
    }
    write_json(dir / "decay_report.json", dj);
    write_envelope(dir, r);

    log << "outcome " << to_string(traj.outcome);
    if (traj.outcome == Outcome::blowup) log << " at t = " << format_number(traj.t_detect);
    log << ", " << traj.stats.accepted << " steps accepted, " << traj.stats.rejected
        << " rejected\n";
    for (std::size_t i = 0; i < r.analyses.size(); ++i) {
        const auto& a = r.analyses[i];
        log << "analysis " << i << ":";
        if (a.decay) {
            log << " fitted " << format_number(a.decay->fitted_exponent) << ", bound "
                << (a.decay->bound_satisfied ? "satisfied" : "violated");
        }
        if (a.splitting) log << ", splitting " << (a.splitting->holds ? "holds" : "fails");
        for (const auto& e : a.errors) log << "\n  " << e;
        log << '\n';
    }
    log << "artifacts in " << dir.string() << '\n';

    if (!r.analyses_passed()) return kExitFailure;
    if (traj.outcome == Outcome::undecided) return kExitUndecided;
    return kExitOk;
}

int cmd_decay_character(const Scenario& s, const std::string& out_dir, std::ostream& log) {
    const CharacterReport r = decay_character(s);
    Json j = to_json(r);
    j["scenario_hash"] = scenario_hash(s);
    const fs::path dir = prepare_dir(out_dir);
    write_json(dir / "decay_character.json", j);
    log << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_check_inequalities(const Scenario& s, const std::string& out_dir, std::ostream& log) {
    const SuiteReport r = run_inequality_suite(s);
    Json j = to_json(r);
    j["scenario_hash"] = scenario_hash(s);
    j["seed"] = s.seed;
    const fs::path dir = prepare_dir(out_dir);
    write_json(dir / "inequalities.json", j);
    for (const auto& c : r.checks) {
        log << std::left << std::setw(20) << c.name << (c.holds ? "pass" : "FAIL")
            << "  worst " << format_number(c.worst_ratio) << " (" << c.worst_sample << ")\n";
        if (!c.holds) log << "  failing sample: " << c.failing_sample << '\n';
    }
    return r.all_pass ? kExitOk : kExitFailure;
}

int cmd_predict(const Scenario& s, const std::string& out_dir, std::ostream& log) {
    const RatePrediction p = rate_predictor(scenario_params(s), effective_q_star(s));
    const Json j = to_json(p);
    const fs::path dir = prepare_dir(out_dir);
    write_json(dir / "prediction.json", j);
    log << j.dump(2) << '\n';
    return kExitOk;
}

int cmd_sweep(const Scenario& s, const std::string& out_dir, unsigned threads, std::ostream& log) {
    if (!s.sweep) throw ValidationError("sweep", "scenario has no sweep section");
    const std::vector<SweepRow> rows = run_sweep(s, threads);
    const fs::path dir = prepare_dir(out_dir);
    {
        auto os = open_out(dir / "sweep.csv");
        write_sweep_csv(os, rows);
    }
    fs::create_directories(dir / "runs");
    bool violated = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::ostringstream name;
        name << std::setw(3) << std::setfill('0') << i << "_run_report.json";
        write_json(dir / "runs" / name.str(), rows[i].report);
        if (rows[i].bound_satisfied && !*rows[i].bound_satisfied) violated = true;
    }
    write_sweep_csv(log, rows);
    return violated ? kExitFailure : kExitOk;
}

}  // namespace hsplab::cli
