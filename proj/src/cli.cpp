#include "multirail/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "multirail/dilation.hpp"
#include "multirail/discrimination.hpp"
#include "multirail/mesh.hpp"
#include "multirail/scenario.hpp"
#include "multirail/simulator.hpp"
#include "multirail/states.hpp"

namespace multirail {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double value, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    return buf;
}

std::string fmt_percent(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f%%", 100.0 * value);
    return buf;
}

std::string fmt_complex(const Complex& c) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%+.6f%+.6fi", c.real(), c.imag());
    return buf;
}

std::string fmt_sci(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2e", value);
    return buf;
}

ordered_json json_vector(const Vector& v) {
    ordered_json out = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

ordered_json json_matrix(const Matrix& m) {
    ordered_json out = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        out.push_back(row);
    }
    return out;
}

ordered_json json_real_matrix(const RealMatrix& m) {
    ordered_json out = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(row);
    }
    return out;
}

struct CommonOptions {
    std::string scenario_path;
    std::string builtin_name;
    double builtin_a = 0.5;
    bool a_given = false;
    std::string task = "";
    bool json = false;
    std::string out_path;
};

ScenarioConfig resolve_config(const CommonOptions& opts) {
    if (!opts.scenario_path.empty() && !opts.builtin_name.empty()) {
        throw ScenarioError("flags: --scenario and --builtin are mutually exclusive");
    }
    ScenarioConfig config;
    if (!opts.scenario_path.empty()) {
        config = load_scenario_file(opts.scenario_path);
    } else if (!opts.builtin_name.empty()) {
        BuiltinSpec spec;
        spec.name = opts.builtin_name;
        if (spec.name == "filter_family") {
            if (!opts.a_given) {
                throw ScenarioError("flags: --builtin filter_family requires --a");
            }
            spec.a = opts.builtin_a;
            config.task = TaskKind::filter;
        } else if (spec.name == "sd_paper") {
            if (opts.a_given) {
                throw ScenarioError("flags: --a is only valid with filter_family");
            }
            config.task = TaskKind::ud;
        } else {
            throw ScenarioError(
                "flags: --builtin must be 'sd_paper' or 'filter_family'");
        }
        config.builtin = spec;
    } else {
        throw ScenarioError("flags: one of --scenario or --builtin is required");
    }
    if (!opts.task.empty()) {
        if (opts.task == "ud") {
            config.task = TaskKind::ud;
        } else if (opts.task == "filter") {
            config.task = TaskKind::filter;
        } else {
            throw ScenarioError("flags: --task must be 'ud' or 'filter'");
        }
    }
    return config;
}

void emit(const CommonOptions& opts, const std::string& text, std::ostream& out) {
    if (opts.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(opts.out_path);
    if (!file) throw IoError("cannot open output file: " + opts.out_path);
    file << text;
    if (!file) throw IoError("cannot write output file: " + opts.out_path);
}

// Everything the simulate pipeline produces along the way.
struct Pipeline {
    explicit Pipeline(StateEnsemble e) : ensemble(std::move(e)) {}

    StateEnsemble ensemble;
    int target0 = -1;  // 0-based filter target; -1 for UD
    std::optional<UDSolution> ud;
    std::optional<FilteringSolution> filtering;
    DilatedStates dilated;
    Matrix unitary;
    MeshPlan plan;
    OutcomeMap outcomes;
};

Pipeline run_pipeline(const ScenarioConfig& config) {
    StateEnsemble ensemble = ensemble_from_scenario(config);
    Pipeline p{std::move(ensemble)};
    if (config.task == TaskKind::ud) {
        p.ud = optimize_ud(p.ensemble);
        p.dilated = build_outputs_ud(p.ensemble, *p.ud);
        p.unitary = build_unitary(p.ensemble, p.dilated);
        p.outcomes = ud_outcome_map(p.dilated, p.ensemble);
    } else {
        const int n = static_cast<int>(p.ensemble.size());
        if (config.filter_target < 1 || config.filter_target > n) {
            throw ScenarioError("scenario.filter_target: must be between 1 and " +
                                std::to_string(n));
        }
        p.target0 = config.filter_target - 1;
        p.filtering = optimize_filtering(p.ensemble, p.target0);
        p.dilated = build_outputs_filtering(p.ensemble, p.target0, *p.filtering);
        p.unitary = build_unitary(p.ensemble, p.dilated);
        p.outcomes = filtering_outcome_map(p.dilated, p.ensemble, p.target0);
    }
    p.plan = decompose(p.unitary);
    return p;
}

double gram_residual(const StateEnsemble& ensemble, const DilatedStates& dilated) {
    double worst = 0.0;
    const Matrix g = gram(ensemble);
    for (std::size_t i = 0; i < dilated.outputs.size(); ++i) {
        for (std::size_t j = 0; j < dilated.outputs.size(); ++j) {
            const Complex gout = dilated.outputs[i].dot(dilated.outputs[j]);
            worst = std::max(worst,
                             std::abs(gout - g(static_cast<int>(i),
                                               static_cast<int>(j))));
        }
    }
    return worst;
}

int cmd_optimize(const CommonOptions& opts, const ScenarioConfig& config,
                 std::ostream& out) {
    const StateEnsemble ensemble = ensemble_from_scenario(config);
    std::ostringstream text;
    ordered_json j;

    if (config.task == TaskKind::ud) {
        const UDSolution sol = optimize_ud(ensemble);
        const PVMOutcome pvm = optimal_pvm_ud(ensemble);
        Eigen::SelfAdjointEigenSolver<Matrix> es(sol.failure_gram,
                                                 Eigen::EigenvaluesOnly);
        if (opts.json) {
            j["task"] = "ud";
            j["status"] = to_string(sol.status);
            j["povm_success"] = sol.average_success;
            j["pvm_success"] = pvm.success;
            j["pvm_best_state"] = ensemble.label(pvm.best_index);
            j["success_probs"] = sol.success_probs;
            ordered_json eigs = ordered_json::array();
            for (int i = 0; i < es.eigenvalues().size(); ++i) {
                eigs.push_back(es.eigenvalues()(i));
            }
            j["failure_gram_eigenvalues"] = eigs;
        } else {
            text << "task                 unambiguous discrimination\n";
            text << "states               " << ensemble.size() << " states in dimension "
                 << ensemble.dim() << "\n";
            text << "status               " << to_string(sol.status) << "\n";
            text << "average success      " << fmt(sol.average_success) << "  ("
                 << fmt_percent(sol.average_success) << ")\n";
            text << "projective baseline  " << fmt(pvm.success) << "  ("
                 << fmt_percent(pvm.success) << ")  best single outcome: "
                 << ensemble.label(pvm.best_index) << "\n";
            text << "per-state success\n";
            for (std::size_t i = 0; i < sol.success_probs.size(); ++i) {
                text << "  " << ensemble.label(static_cast<int>(i)) << "  "
                     << fmt(sol.success_probs[i]) << "\n";
            }
            text << "failure Gram eigenvalues ";
            for (int i = 0; i < es.eigenvalues().size(); ++i) {
                text << " " << fmt(es.eigenvalues()(i));
            }
            text << "\n";
        }
    } else {
        const int n = static_cast<int>(ensemble.size());
        if (config.filter_target < 1 || config.filter_target > n) {
            throw ScenarioError("scenario.filter_target: must be between 1 and " +
                                std::to_string(n));
        }
        const int target0 = config.filter_target - 1;
        const FilteringSolution sol = optimize_filtering(ensemble, target0);
        const PVMFilterResult pvm = optimal_pvm_filtering(ensemble, target0);
        if (opts.json) {
            j["task"] = "filter";
            j["target"] = ensemble.label(target0);
            j["povm_success"] = sol.average_success;
            j["pvm_success"] = pvm.success;
            j["target_success"] = sol.success_target;
            j["subset_success"] = sol.success_subset;
            j["q1"] = sol.q1;
        } else {
            text << "task                 unambiguous filtering (target "
                 << ensemble.label(target0) << ")\n";
            text << "states               " << ensemble.size() << " states in dimension "
                 << ensemble.dim() << "\n";
            text << "average success      " << fmt(sol.average_success) << "  ("
                 << fmt_percent(sol.average_success) << ")\n";
            text << "projective baseline  " << fmt(pvm.success) << "  ("
                 << fmt_percent(pvm.success) << ")\n";
            text << "target success       " << fmt(sol.success_target) << "\n";
            text << "subset success      ";
            for (double p : sol.success_subset) text << " " << fmt(p);
            text << "\n";
            text << "target failure q1    " << fmt(sol.q1) << "\n";
        }
    }
    emit(opts, opts.json ? j.dump(2) + "\n" : text.str(), out);
    return 0;
}

int cmd_dilate(const CommonOptions& opts, const ScenarioConfig& config,
               std::ostream& out) {
    const Pipeline p = run_pipeline(config);
    const double g_res = gram_residual(p.ensemble, p.dilated);
    const double u_res = unitarity_residual(p.unitary);

    if (opts.json) {
        ordered_json j;
        j["task"] = config.task == TaskKind::ud ? "ud" : "filter";
        j["system_dim"] = p.dilated.system_dim;
        j["ancilla_rank"] = p.dilated.ancilla_rank;
        ordered_json outputs = ordered_json::array();
        for (const auto& v : p.dilated.outputs) outputs.push_back(json_vector(v));
        j["outputs"] = outputs;
        j["unitary"] = json_matrix(p.unitary);
        j["gram_residual"] = g_res;
        j["unitarity_residual"] = u_res;
        emit(opts, j.dump(2) + "\n", out);
        return 0;
    }

    std::ostringstream text;
    text << "system rails         1.." << p.dilated.system_dim << "\n";
    text << "ancilla rails        ";
    if (p.dilated.ancilla_rank == 0) {
        text << "none\n";
    } else {
        text << p.dilated.system_dim + 1 << ".." << p.dilated.total_dim() << "\n";
    }
    text << "output states\n";
    for (std::size_t i = 0; i < p.dilated.outputs.size(); ++i) {
        text << "  " << p.ensemble.label(static_cast<int>(i)) << " ";
        for (int k = 0; k < p.dilated.outputs[i].size(); ++k) {
            text << " " << fmt_complex(p.dilated.outputs[i](k));
        }
        text << "\n";
    }
    text << "unitary\n";
    for (int r = 0; r < p.unitary.rows(); ++r) {
        text << "  ";
        for (int c = 0; c < p.unitary.cols(); ++c) {
            text << " " << fmt_complex(p.unitary(r, c));
        }
        text << "\n";
    }
    text << "gram residual        " << fmt_sci(g_res) << "\n";
    text << "unitarity residual   " << fmt_sci(u_res) << "\n";
    emit(opts, text.str(), out);
    return 0;
}

Matrix load_unitary_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open unitary file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buffer.str());
    } catch (const std::exception& e) {
        throw ScenarioError(std::string("unitary: invalid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("unitary")) j = j["unitary"];
    if (!j.is_array() || j.empty()) {
        throw ScenarioError("unitary: expected a square matrix of [re, im] pairs");
    }
    const int n = static_cast<int>(j.size());
    Matrix u(n, n);
    for (int r = 0; r < n; ++r) {
        if (!j[r].is_array() || static_cast<int>(j[r].size()) != n) {
            throw ScenarioError("unitary: row " + std::to_string(r + 1) +
                                " is not length " + std::to_string(n));
        }
        for (int c = 0; c < n; ++c) {
            const auto& e = j[r][c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
                !e[1].is_number()) {
                throw ScenarioError("unitary: entries must be [re, im] pairs");
            }
            u(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return u;
}

int cmd_decompose(const CommonOptions& opts, const std::string& unitary_path,
                  std::ostream& out) {
    Matrix u;
    if (!unitary_path.empty()) {
        u = load_unitary_file(unitary_path);
        if (unitarity_residual(u) > kUnitarityTol) {
            throw ScenarioError("unitary: matrix is not unitary (residual " +
                                fmt_sci(unitarity_residual(u)) + ")");
        }
    } else {
        const ScenarioConfig config = resolve_config(opts);
        u = run_pipeline(config).unitary;
    }
    const MeshPlan plan = decompose(u);
    const double residual = (recompose(plan) - u).cwiseAbs().maxCoeff();

    if (opts.json) {
        ordered_json j;
        ordered_json stages = ordered_json::array();
        for (const auto& s : plan.stages) {
            const VBSAngles angles = vbs_angles(s);
            ordered_json stage;
            stage["rails"] = {s.rail_j, s.rail_k};
            stage["t"] = s.transmission;
            stage["phi_radians"] = s.phase;
            stage["hwp_angles_degrees"] = angles.hwp_angles;
            stage["phase_tilt_degrees"] = phase_to_tilt(s.phase);
            stages.push_back(stage);
        }
        j["stages"] = stages;
        j["output_phases_radians"] = plan.output_phases;
        ordered_json tilts = ordered_json::array();
        for (double phase : plan.output_phases) tilts.push_back(phase_to_tilt(phase));
        j["output_phase_tilts_degrees"] = tilts;
        j["round_trip_residual"] = residual;
        emit(opts, j.dump(2) + "\n", out);
        return 0;
    }

    std::ostringstream text;
    text << "stages (applied in order)\n";
    text << "  #   rails    t         phi(rad)   hwp(deg)            tilt(deg)\n";
    for (std::size_t s = 0; s < plan.stages.size(); ++s) {
        const auto& stage = plan.stages[s];
        const VBSAngles angles = vbs_angles(stage);
        char line[160];
        std::snprintf(line, sizeof(line),
                      "  %-3zu (%d,%d)    %.6f  %+.6f  %.2f/%.4f/%.2f  %+.6f\n",
                      s + 1, stage.rail_j, stage.rail_k, stage.transmission,
                      stage.phase, angles.hwp_angles[0], angles.hwp_angles[1],
                      angles.hwp_angles[2], phase_to_tilt(stage.phase));
        text << line;
    }
    if (plan.stages.empty()) text << "  (none)\n";
    text << "output phases (rad) ";
    for (double phase : plan.output_phases) text << " " << fmt(phase);
    text << "\n";
    text << "round-trip residual  " << fmt_sci(residual) << "\n";
    emit(opts, text.str(), out);
    return 0;
}

int cmd_simulate(const CommonOptions& opts, const ScenarioConfig& config,
                 std::uint64_t seed, long long trials, std::ostream& out) {
    const Pipeline p = run_pipeline(config);
    NoiseModel noise = config.noise.value_or(NoiseModel{});
    noise.seed = seed;
    if (trials > 0) noise.trials = trials;

    const DetectionReport report = run_ensemble(p.plan, p.ensemble, noise);
    const OutcomeSummary summary =
        summarize(report, p.outcomes, p.ensemble.priors());

    if (opts.json) {
        ordered_json j;
        j["task"] = config.task == TaskKind::ud ? "ud" : "filter";
        j["rails"] = p.plan.dim();
        j["matrix"] = json_real_matrix(report.matrix);
        j["normalization"] = report.normalization;
        j["success_rate"] = summary.success_rate;
        j["error_rate"] = summary.error_rate;
        j["inconclusive_rate"] = summary.inconclusive_rate;
        j["seed"] = noise.seed;
        j["trials"] = noise.trials;
        emit(opts, j.dump(2) + "\n", out);
        return 0;
    }

    std::ostringstream text;
    text << "detection probabilities (rows: states, columns: rails 1.."
         << p.plan.dim() << ")\n";
    for (int i = 0; i < report.matrix.rows(); ++i) {
        text << "  " << p.ensemble.label(i) << " ";
        for (int c = 0; c < report.matrix.cols(); ++c) {
            text << " " << fmt(report.matrix(i, c), 4);
        }
        text << "\n";
    }
    text << "normalization        " << report.normalization << "\n";
    text << "success rate         " << fmt(summary.success_rate) << "  ("
         << fmt_percent(summary.success_rate) << ")\n";
    text << "error rate           " << fmt(summary.error_rate) << "  ("
         << fmt_percent(summary.error_rate) << ")\n";
    text << "inconclusive rate    " << fmt(summary.inconclusive_rate) << "  ("
         << fmt_percent(summary.inconclusive_rate) << ")\n";
    emit(opts, text.str(), out);
    return 0;
}

struct Table1Column {
    std::string heading;
    double povm_theory;
    double pvm_theory;
    double simulated_success;
    double simulated_error;
};

Table1Column table1_column(const ScenarioConfig& config, const std::string& heading) {
    const Pipeline p = run_pipeline(config);
    Table1Column col;
    col.heading = heading;
    if (p.ud) {
        col.povm_theory = p.ud->average_success;
        col.pvm_theory = optimal_pvm_ud(p.ensemble).success;
    } else {
        col.povm_theory = p.filtering->average_success;
        col.pvm_theory = optimal_pvm_filtering(p.ensemble, p.target0).success;
    }
    const NoiseModel noise = documented_experiment_noise();
    const DetectionReport report = run_ensemble(p.plan, p.ensemble, noise);
    const OutcomeSummary summary =
        summarize(report, p.outcomes, p.ensemble.priors());
    col.simulated_success = summary.success_rate;
    col.simulated_error = summary.error_rate;
    return col;
}

int cmd_table1(const CommonOptions& opts, std::ostream& out) {
    ScenarioConfig filter25;
    filter25.task = TaskKind::filter;
    filter25.builtin = BuiltinSpec{"filter_family", 0.25};
    ScenarioConfig filter50;
    filter50.task = TaskKind::filter;
    filter50.builtin = BuiltinSpec{"filter_family", 0.5};
    ScenarioConfig sd;
    sd.task = TaskKind::ud;
    sd.builtin = BuiltinSpec{"sd_paper", 0.0};

    const std::vector<Table1Column> cols = {
        table1_column(filter25, "filter a=0.25"),
        table1_column(filter50, "filter a=0.50"),
        table1_column(sd, "discrimination"),
    };
    const NoiseModel noise = documented_experiment_noise();

    if (opts.json) {
        ordered_json j;
        ordered_json columns = ordered_json::array();
        for (const auto& col : cols) {
            ordered_json c;
            c["name"] = col.heading;
            c["povm_theory"] = col.povm_theory;
            c["pvm_theory"] = col.pvm_theory;
            c["simulated_success"] = col.simulated_success;
            c["simulated_error"] = col.simulated_error;
            columns.push_back(c);
        }
        j["columns"] = columns;
        ordered_json n;
        n["phase_jitter_sigma"] = noise.phase_jitter_sigma;
        n["waveplate_jitter_sigma"] = noise.waveplate_jitter_sigma;
        n["trials"] = noise.trials;
        n["seed"] = noise.seed;
        j["noise"] = n;
        emit(opts, j.dump(2) + "\n", out);
        return 0;
    }

    std::ostringstream text;
    char line[200];
    std::snprintf(line, sizeof(line), "%-20s %15s %15s %15s\n", "",
                  cols[0].heading.c_str(), cols[1].heading.c_str(),
                  cols[2].heading.c_str());
    text << line;
    const auto row = [&](const char* name, double Table1Column::* field) {
        std::snprintf(line, sizeof(line), "%-20s %15s %15s %15s\n", name,
                      fmt_percent(cols[0].*field).c_str(),
                      fmt_percent(cols[1].*field).c_str(),
                      fmt_percent(cols[2].*field).c_str());
        text << line;
    };
    row("POVM theory", &Table1Column::povm_theory);
    row("PVM theory", &Table1Column::pvm_theory);
    row("simulated POVM", &Table1Column::simulated_success);
    row("simulated error", &Table1Column::simulated_error);
    text << "noise: phase jitter " << fmt(noise.phase_jitter_sigma, 3)
         << " rad, waveplate jitter " << fmt(noise.waveplate_jitter_sigma, 3)
         << " deg, " << noise.trials << " trials, seed " << noise.seed << "\n";
    emit(opts, text.str(), out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"multirail: optimal unambiguous measurements on a photonic mesh"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string unitary_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    long long trials = 0;

    const auto add_common = [&](CLI::App* cmd, bool with_scenario = true) {
        if (with_scenario) {
            cmd->add_option("--scenario", opts.scenario_path,
                            "Scenario JSON file");
            cmd->add_option("--builtin", opts.builtin_name,
                            "Builtin ensemble: sd_paper or filter_family");
            cmd->add_option("--a", opts.builtin_a,
                            "filter_family parameter (0, 1]")
                ->each([&](const std::string&) { opts.a_given = true; });
            cmd->add_option("--task", opts.task,
                            "Override task: ud or filter");
        }
        cmd->add_flag("--json", opts.json, "Emit JSON instead of text");
        cmd->add_option("--out", opts.out_path, "Write the report to a file");
    };

    CLI::App* optimize = app.add_subcommand(
        "optimize", "Optimal measurement and projective baseline");
    add_common(optimize);
    CLI::App* dilate = app.add_subcommand(
        "dilate", "Output states and the mesh unitary");
    add_common(dilate);
    CLI::App* decompose_cmd = app.add_subcommand(
        "decompose", "Beam-splitter stage plan for the scenario or a unitary");
    add_common(decompose_cmd);
    decompose_cmd->add_option("--unitary", unitary_path,
                              "JSON file with a unitary matrix");
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Full pipeline: optimize, dilate, decompose, simulate");
    add_common(simulate);
    simulate->add_option("--seed", seed, "RNG seed (required)")
        ->each([&](const std::string&) { seed_given = true; });
    simulate->add_option("--trials", trials, "Monte Carlo trials");
    CLI::App* table1 = app.add_subcommand(
        "table1", "Theory and simulated-experiment success rates");
    add_common(table1, false);

    std::vector<const char*> argv;
    argv.push_back("multirail");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (optimize->parsed()) {
            return cmd_optimize(opts, resolve_config(opts), out);
        }
        if (dilate->parsed()) {
            return cmd_dilate(opts, resolve_config(opts), out);
        }
        if (decompose_cmd->parsed()) {
            if (unitary_path.empty() && opts.scenario_path.empty() &&
                opts.builtin_name.empty()) {
                throw ScenarioError(
                    "flags: decompose needs --unitary, --scenario, or --builtin");
            }
            return cmd_decompose(opts, unitary_path, out);
        }
        if (simulate->parsed()) {
            if (!seed_given) {
                throw ScenarioError("flags: --seed is required for simulate");
            }
            return cmd_simulate(opts, resolve_config(opts), seed, trials, out);
        }
        if (table1->parsed()) {
            return cmd_table1(opts, out);
        }
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 4;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return 3;
    } catch (const ScenarioError& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace multirail
