// Command-line front end: fit | cv | simulate | mc | oracle.
//
// All randomness flows from the single --seed value through fixed
// derivations (split, GA, bootstrap, CV, and Monte Carlo each get their own
// derived stream), so any command rerun with the same configuration and seed
// writes byte-identical reports at any --workers value. Worker count and
// output directory are execution environment, not experiment configuration,
// and are therefore not echoed into reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "envelope/dataset.hpp"
#include "envelope/estimation.hpp"
#include "envelope/ga.hpp"
#include "envelope/model_selection.hpp"
#include "envelope/objective.hpp"
#include "envelope/parallel.hpp"
#include "envelope/region.hpp"
#include "envelope/report.hpp"
#include "envelope/rng.hpp"
#include "envelope/simulation.hpp"

namespace {

using nlohmann::json;
using namespace envelope;

constexpr std::uint64_t kSplitSalt = 1;
constexpr std::uint64_t kGaSalt = 2;
constexpr std::uint64_t kBootstrapSalt = 3;
constexpr std::uint64_t kCvSalt = 4;
constexpr std::uint64_t kMcSalt = 5;

struct RunConfig {
    // Input: a CSV or a simulation scenario.
    std::string csv_path;
    std::string response_column = "y";
    std::vector<std::string> feature_columns;
    bool have_scenario = false;
    sim::SimulationSpec sim;

    std::size_t num_boxes = 1; // L
    double beta = 0.2;
    double gamma = 0.0;
    std::vector<double> gamma_grid;
    std::vector<double> penalty_schedule; // empty = default for the data
    int folds = 4;
    CvMode cv_mode = CvMode::holdout;
    double split_fraction = 0.5;

    GAConfig ga;
    std::size_t bootstrap_replicates = 500;
    BootstrapSeeding seeding = BootstrapSeeding::per_candidate;

    GammaPolicy gamma_policy;

    std::optional<std::uint64_t> seed;
    std::size_t workers = 0; // 0 = all available
    std::string out_dir = ".";

    std::size_t repetitions = 20;
    std::vector<double> subregion_boundaries;
};

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        out.push_back(std::stod(cur));
        cur.clear();
    };
    for (char c : text) {
        if (c == ',')
            flush();
        else if (c != ' ')
            cur.push_back(c);
    }
    flush();
    return out;
}

std::vector<std::string> parse_string_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

CvMode cv_mode_from_string(const std::string& s) {
    if (s == "holdout") return CvMode::holdout;
    if (s == "fold-train" || s == "fold_train") return CvMode::fold_train;
    throw std::invalid_argument("cv mode must be 'holdout' or 'fold-train'");
}

BootstrapSeeding seeding_from_string(const std::string& s) {
    if (s == "per-candidate" || s == "per_candidate") return BootstrapSeeding::per_candidate;
    if (s == "shared") return BootstrapSeeding::shared;
    throw std::invalid_argument("bootstrap seeding must be 'per-candidate' or 'shared'");
}

GammaPolicy::Kind policy_from_string(const std::string& s) {
    if (s == "earliest-min-variance") return GammaPolicy::Kind::earliest_min_variance;
    if (s == "min-variance") return GammaPolicy::Kind::min_variance;
    if (s == "knee") return GammaPolicy::Kind::knee;
    if (s == "manual") return GammaPolicy::Kind::manual;
    throw std::invalid_argument("unknown gamma policy '" + s + "'");
}

void apply_config_file(RunConfig& rc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j = json::parse(in);

    if (j.contains("input")) {
        const json& ji = j["input"];
        if (ji.contains("csv")) rc.csv_path = ji["csv"].get<std::string>();
        if (ji.contains("response")) rc.response_column = ji["response"].get<std::string>();
        if (ji.contains("features"))
            rc.feature_columns = ji["features"].get<std::vector<std::string>>();
        if (ji.contains("scenario")) {
            rc.have_scenario = true;
            rc.sim.scenario = sim::scenario_from_string(ji["scenario"].get<std::string>());
        }
        if (ji.contains("n")) rc.sim.n = ji["n"].get<std::size_t>();
        if (ji.contains("delta")) rc.sim.delta = ji["delta"].get<double>();
        if (ji.contains("sigma_eps"))
            rc.sim.sigma_eps = ji["sigma_eps"].get<std::vector<double>>();
        if (ji.contains("component_sd")) rc.sim.component_sd = ji["component_sd"].get<double>();
        if (ji.contains("cov_scale")) rc.sim.cov_scale = ji["cov_scale"].get<double>();
    }
    if (j.contains("L")) rc.num_boxes = j["L"].get<std::size_t>();
    if (j.contains("beta")) rc.beta = j["beta"].get<double>();
    if (j.contains("gamma")) rc.gamma = j["gamma"].get<double>();
    if (j.contains("gamma_grid")) rc.gamma_grid = j["gamma_grid"].get<std::vector<double>>();
    if (j.contains("penalty_schedule"))
        rc.penalty_schedule = j["penalty_schedule"].get<std::vector<double>>();
    if (j.contains("folds")) rc.folds = j["folds"].get<int>();
    if (j.contains("cv_mode")) rc.cv_mode = cv_mode_from_string(j["cv_mode"].get<std::string>());
    if (j.contains("split_fraction")) rc.split_fraction = j["split_fraction"].get<double>();
    if (j.contains("ga")) {
        const json& jg = j["ga"];
        if (jg.contains("population_size")) rc.ga.population_size = jg["population_size"].get<std::size_t>();
        if (jg.contains("max_generations")) rc.ga.max_generations = jg["max_generations"].get<std::size_t>();
        if (jg.contains("crossover_prob")) rc.ga.crossover_prob = jg["crossover_prob"].get<double>();
        if (jg.contains("mutation_prob")) rc.ga.mutation_prob = jg["mutation_prob"].get<double>();
        if (jg.contains("mutation_scale")) rc.ga.mutation_scale = jg["mutation_scale"].get<double>();
        if (jg.contains("elitism_count")) rc.ga.elitism_count = jg["elitism_count"].get<std::size_t>();
        if (jg.contains("stall_generations")) rc.ga.stall_generations = jg["stall_generations"].get<std::size_t>();
        if (jg.contains("stall_tolerance")) rc.ga.stall_tolerance = jg["stall_tolerance"].get<double>();
    }
    if (j.contains("bootstrap")) {
        const json& jb = j["bootstrap"];
        if (jb.contains("replicates")) rc.bootstrap_replicates = jb["replicates"].get<std::size_t>();
        if (jb.contains("seeding"))
            rc.seeding = seeding_from_string(jb["seeding"].get<std::string>());
    }
    if (j.contains("gamma_policy")) {
        const json& jp = j["gamma_policy"];
        if (jp.contains("kind")) rc.gamma_policy.kind = policy_from_string(jp["kind"].get<std::string>());
        if (jp.contains("manual_value")) rc.gamma_policy.manual_value = jp["manual_value"].get<double>();
    }
    if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("repetitions")) rc.repetitions = j["repetitions"].get<std::size_t>();
    if (j.contains("subregions"))
        rc.subregion_boundaries = j["subregions"].get<std::vector<double>>();
}

json config_echo(const RunConfig& rc) {
    json input;
    if (!rc.csv_path.empty()) {
        input["csv"] = rc.csv_path;
        input["response"] = rc.response_column;
        input["features"] = rc.feature_columns;
    } else if (rc.have_scenario) {
        input["scenario"] = sim::scenario_to_string(rc.sim.scenario);
        input["n"] = rc.sim.n;
        input["delta"] = rc.sim.delta;
        input["sigma_eps"] = rc.sim.sigma_eps;
        input["component_sd"] = rc.sim.component_sd;
        input["cov_scale"] = rc.sim.cov_scale;
    }
    json policy{{"kind", rc.gamma_policy.kind == GammaPolicy::Kind::earliest_min_variance
                             ? "earliest-min-variance"
                         : rc.gamma_policy.kind == GammaPolicy::Kind::min_variance
                             ? "min-variance"
                         : rc.gamma_policy.kind == GammaPolicy::Kind::knee ? "knee"
                                                                           : "manual"},
                {"manual_value", rc.gamma_policy.manual_value}};
    return json{{"input", input},
                {"L", rc.num_boxes},
                {"beta", rc.beta},
                {"gamma", rc.gamma},
                {"gamma_grid", rc.gamma_grid},
                {"penalty_schedule", rc.penalty_schedule},
                {"folds", rc.folds},
                {"cv_mode", rc.cv_mode == CvMode::holdout ? "holdout" : "fold-train"},
                {"split_fraction", rc.split_fraction},
                {"ga",
                 json{{"population_size", rc.ga.population_size},
                      {"max_generations", rc.ga.max_generations},
                      {"crossover_prob", rc.ga.crossover_prob},
                      {"mutation_prob", rc.ga.mutation_prob},
                      {"mutation_scale", rc.ga.mutation_scale},
                      {"elitism_count", rc.ga.elitism_count},
                      {"stall_generations", rc.ga.stall_generations},
                      {"stall_tolerance", rc.ga.stall_tolerance}}},
                {"bootstrap",
                 json{{"replicates", rc.bootstrap_replicates},
                      {"seeding", rc.seeding == BootstrapSeeding::per_candidate
                                      ? "per-candidate"
                                      : "shared"}}},
                {"gamma_policy", policy},
                {"seed", *rc.seed},
                {"repetitions", rc.repetitions},
                {"subregions", rc.subregion_boundaries}};
}

Dataset load_input(const RunConfig& rc) {
    if (!rc.csv_path.empty()) {
        if (rc.feature_columns.empty())
            throw std::runtime_error("CSV input needs --features");
        return load_csv(rc.csv_path, rc.response_column, rc.feature_columns);
    }
    if (!rc.have_scenario)
        throw std::runtime_error("no input: provide --input CSV or --scenario NAME");
    sim::SimulationSpec spec = rc.sim;
    spec.seed = *rc.seed;
    return sim::generate(spec);
}

std::string out_path(const RunConfig& rc, const std::string& name) {
    std::filesystem::create_directories(rc.out_dir);
    return (std::filesystem::path(rc.out_dir) / name).string();
}

PenaltySchedule resolve_schedule(const RunConfig& rc, const Dataset& d) {
    return rc.penalty_schedule.empty() ? PenaltySchedule::default_for(d)
                                       : PenaltySchedule{rc.penalty_schedule};
}

json dataset_summary(const Dataset& d) {
    return json{{"n", d.n()}, {"p", d.p()}, {"feature_names", d.feature_names()}};
}

struct CvOutcome {
    json report;
    bool feasible = true;
    FitResult final_fit;
    std::string curves_csv; // gamma,bias,variance rows for plotting
};

CvOutcome run_cv_flow(const RunConfig& rc, const Dataset& train, const Dataset& test,
                      std::size_t workers) {
    PenaltySchedule schedule = resolve_schedule(rc, train);
    GAConfig ga = rc.ga;
    ga.seed = mix_seed(*rc.seed, kGaSalt);
    BootstrapConfig bs{rc.bootstrap_replicates, mix_seed(*rc.seed, kBootstrapSalt)};

    GammaGrid grid{rc.gamma_grid};
    std::vector<CVReport> reports =
        cross_validate(train, rc.num_boxes, rc.beta, grid, rc.folds, schedule, ga, bs,
                       mix_seed(*rc.seed, kCvSalt), rc.cv_mode, rc.seeding, workers);
    double gamma_star = select_gamma(reports, rc.gamma_policy);

    // Final refit on all training data at the selected gamma.
    FitResult final_fit = fit(train, rc.num_boxes, rc.beta, gamma_star, schedule, ga, bs,
                              rc.seeding, workers);
    RegionEstimate test_est;
    if (!final_fit.region.boxes.empty()) test_est = evaluate(test, final_fit.region);

    json jreports = json::array();
    for (const auto& r : reports) jreports.push_back(to_json(r));

    char buf[96];
    std::string curves = "gamma,bias,variance\n";
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.gamma,
                      r.bias.value_or(std::nan("")), r.variance.value_or(std::nan("")));
        curves += buf;
    }

    json echo = config_echo(rc);
    echo["penalty_schedule"] = schedule.values;
    json out{{"config", echo},
             {"train", dataset_summary(train)},
             {"test", dataset_summary(test)},
             {"cv_reports", jreports},
             {"gamma_star", gamma_star},
             {"final", to_json(final_fit)},
             {"test_estimate", to_json(test_est)}};
    return CvOutcome{out, final_fit.feasible, final_fit, curves};
}

int cmd_fit(const RunConfig& rc) {
    std::size_t workers = rc.workers == 0 ? default_workers() : rc.workers;
    Dataset data = load_input(rc);
    auto [train, test] = split(data, rc.split_fraction, mix_seed(*rc.seed, kSplitSalt));

    if (!rc.gamma_grid.empty()) {
        CvOutcome outcome = run_cv_flow(rc, train, test, workers);
        write_json_file(out_path(rc, "report.json"), outcome.report);
        write_text_file(out_path(rc, "fitness_history.csv"),
                        fitness_history_csv({{outcome.final_fit.chosen_c,
                                              &outcome.final_fit.ga}}));
        write_text_file(out_path(rc, "cv_curves.csv"), outcome.curves_csv);
        std::cout << "wrote " << out_path(rc, "report.json") << "\n";
        return outcome.feasible ? 0 : 2;
    }

    PenaltySchedule schedule = resolve_schedule(rc, train);
    GAConfig ga = rc.ga;
    ga.seed = mix_seed(*rc.seed, kGaSalt);
    BootstrapConfig bs{rc.bootstrap_replicates, mix_seed(*rc.seed, kBootstrapSalt)};

    FitResult fr = fit(train, rc.num_boxes, rc.beta, rc.gamma, schedule, ga, bs,
                       rc.seeding, workers);
    RegionEstimate test_est;
    if (!fr.region.boxes.empty()) test_est = evaluate(test, fr.region);

    json echo = config_echo(rc);
    echo["penalty_schedule"] = schedule.values;
    json report{{"config", echo},
                {"train", dataset_summary(train)},
                {"test", dataset_summary(test)},
                {"result", to_json(fr)},
                {"test_estimate", to_json(test_est)}};
    write_json_file(out_path(rc, "report.json"), report);
    write_text_file(out_path(rc, "fitness_history.csv"),
                    fitness_history_csv({{fr.chosen_c, &fr.ga}}));
    std::cout << "wrote " << out_path(rc, "report.json") << "\n";
    if (!fr.feasible) {
        std::cerr << "infeasible: no penalty weight reached coverage >= " << rc.beta << "\n";
        return 2;
    }
    return 0;
}

int cmd_cv(const RunConfig& rc) {
    if (rc.gamma_grid.empty())
        throw std::runtime_error("cv needs --gamma-grid");
    std::size_t workers = rc.workers == 0 ? default_workers() : rc.workers;
    Dataset data = load_input(rc);
    auto [train, test] = split(data, rc.split_fraction, mix_seed(*rc.seed, kSplitSalt));
    CvOutcome outcome = run_cv_flow(rc, train, test, workers);
    write_json_file(out_path(rc, "cv_report.json"), outcome.report);
    write_text_file(out_path(rc, "fitness_history.csv"),
                    fitness_history_csv({{outcome.final_fit.chosen_c,
                                          &outcome.final_fit.ga}}));
    write_text_file(out_path(rc, "cv_curves.csv"), outcome.curves_csv);
    std::cout << "wrote " << out_path(rc, "cv_report.json") << "\n";
    return outcome.feasible ? 0 : 2;
}

int cmd_simulate(const RunConfig& rc) {
    if (!rc.have_scenario) throw std::runtime_error("simulate needs --scenario");
    sim::SimulationSpec spec = rc.sim;
    spec.seed = *rc.seed;
    Dataset d = sim::generate(spec);
    write_csv(d, out_path(rc, "dataset.csv"));
    std::cout << "wrote " << out_path(rc, "dataset.csv") << "\n";
    return 0;
}

int cmd_mc(const RunConfig& rc) {
    if (!rc.have_scenario) throw std::runtime_error("mc needs --scenario");
    std::size_t workers = rc.workers == 0 ? default_workers() : rc.workers;

    sim::SubregionPartition partition =
        rc.subregion_boundaries.empty()
            ? sim::SubregionPartition::default_for(rc.sim.scenario)
            : sim::SubregionPartition::from_boundaries(rc.subregion_boundaries);

    sim::McSolverConfig solver;
    solver.num_boxes = rc.num_boxes;
    solver.beta = rc.beta;
    solver.gamma = rc.gamma;
    solver.penalty_schedule = rc.penalty_schedule;
    solver.ga = rc.ga;
    solver.ga.seed = mix_seed(*rc.seed, kGaSalt);
    solver.bootstrap = BootstrapConfig{rc.bootstrap_replicates, mix_seed(*rc.seed, kBootstrapSalt)};
    solver.seeding = rc.seeding;

    sim::SimulationSpec spec = rc.sim;
    spec.seed = mix_seed(*rc.seed, kMcSalt);

    sim::MonteCarloReport rep = sim::monte_carlo(spec, solver, rc.repetitions, partition, workers);

    json cells = json::array();
    for (const auto& c : partition.cells) cells.push_back(to_json(c));
    json report{{"config", config_echo(rc)},
                {"partition", cells},
                {"report", to_json(rep)}};
    write_json_file(out_path(rc, "mc_report.json"), report);

    // Bar-chart data: one row per partition cell plus the unclassified slot.
    std::string counts = "cell,count\n";
    for (std::size_t i = 0; i < rep.cell_counts.size(); ++i)
        counts += std::to_string(i) + "," + std::to_string(rep.cell_counts[i]) + "\n";
    write_text_file(out_path(rc, "mc_counts.csv"), counts);
    std::cout << "wrote " << out_path(rc, "mc_report.json") << "\n";
    return 0;
}

int cmd_oracle(const RunConfig& rc, const std::string& fit_report_path) {
    Dataset data = load_input(rc);
    if (data.p() != 1) throw std::runtime_error("oracle supports p = 1 only");
    auto [train, test] = split(data, rc.split_fraction, mix_seed(*rc.seed, kSplitSalt));

    BootstrapConfig bs{rc.bootstrap_replicates, mix_seed(*rc.seed, kBootstrapSalt)};
    sim::Oracle1DResult res = sim::oracle_1d(train, rc.beta, rc.gamma, bs);

    json report{{"config", config_echo(rc)}, {"oracle", to_json(res)}};
    if (!fit_report_path.empty()) {
        std::ifstream in(fit_report_path);
        if (!in) throw std::runtime_error("cannot open fit report: " + fit_report_path);
        json fit_report = json::parse(in);
        double fit_objective = fit_report.at("result").at("objective").get<double>();
        double gap = res.objective - fit_objective;
        report["fit_objective"] = fit_objective;
        report["objective_gap"] = gap;
        std::cout << "oracle objective " << res.objective << ", fit objective "
                  << fit_objective << ", gap " << gap << "\n";
    } else {
        std::cout << "oracle objective " << res.objective << " on ["
                  << res.interval.lower[0] << ", " << res.interval.upper[0]
                  << "], coverage " << res.coverage << "\n";
    }
    write_json_file(out_path(rc, "oracle_report.json"), report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operating-envelope search: disjoint box unions maximizing a "
                 "coverage-constrained conditional mean"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string config_path, scenario_name, features_csv, sigma_csv, gamma_grid_csv,
        schedule_csv, subregions_csv, cv_mode_name, seeding_name, policy_name,
        fit_report_path;
    std::uint64_t seed_flag = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags override it");
        cmd->add_option("--input", rc.csv_path, "CSV input path");
        cmd->add_option("--response", rc.response_column, "response column name");
        cmd->add_option("--features", features_csv, "comma-separated feature columns");
        cmd->add_option("--scenario", scenario_name, "benchmark scenario (I-a..I-d, II)");
        cmd->add_option("--n", rc.sim.n, "simulated sample count");
        cmd->add_option("--delta", rc.sim.delta, "scenario I-a sparseness parameter");
        cmd->add_option("--sigma-eps", sigma_csv, "noise SD (one value or per-subregion list)");
        cmd->add_option("--component-sd", rc.sim.component_sd, "1D mixture component SD");
        cmd->add_option("--cov-scale", rc.sim.cov_scale, "2D mixture covariance scale");
        cmd->add_option("--L", rc.num_boxes, "number of disjoint boxes");
        cmd->add_option("--beta", rc.beta, "coverage floor in [0,1)");
        cmd->add_option("--gamma", rc.gamma, "regularization weight");
        cmd->add_option("--gamma-grid", gamma_grid_csv, "comma-separated gamma candidates");
        cmd->add_option("--c-schedule", schedule_csv, "comma-separated penalty weights");
        cmd->add_option("--folds", rc.folds, "cross-validation folds");
        cmd->add_option("--cv-mode", cv_mode_name, "holdout | fold-train");
        cmd->add_option("--split-fraction", rc.split_fraction, "training fraction");
        cmd->add_option("--M", rc.bootstrap_replicates, "bootstrap replicates");
        cmd->add_option("--bootstrap-seeding", seeding_name, "per-candidate | shared");
        cmd->add_option("--population", rc.ga.population_size, "GA population size");
        cmd->add_option("--generations", rc.ga.max_generations, "GA generation cap");
        cmd->add_option("--crossover-prob", rc.ga.crossover_prob, "GA crossover probability");
        cmd->add_option("--mutation-prob", rc.ga.mutation_prob, "GA per-coordinate mutation probability");
        cmd->add_option("--mutation-scale", rc.ga.mutation_scale, "GA mutation SD as domain-width fraction");
        cmd->add_option("--elitism", rc.ga.elitism_count, "GA elites kept per generation");
        cmd->add_option("--stall-generations", rc.ga.stall_generations, "GA stall window");
        cmd->add_option("--stall-tolerance", rc.ga.stall_tolerance, "GA stall improvement threshold");
        cmd->add_option("--gamma-policy", policy_name,
                        "earliest-min-variance | min-variance | knee | manual");
        cmd->add_option("--gamma-manual", rc.gamma_policy.manual_value, "manual gamma value");
        cmd->add_option("--repetitions", rc.repetitions, "Monte Carlo repetitions");
        cmd->add_option("--subregions", subregions_csv, "1D subregion boundaries");
        cmd->add_option("--seed", seed_flag, "global seed (required)");
        cmd->add_option("--workers", rc.workers, "worker threads (0 = all)");
        cmd->add_option("--out", rc.out_dir, "output directory");
    };

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit an envelope at fixed gamma");
    CLI::App* cv_cmd = app.add_subcommand("cv", "gamma grid cross-validation, selection, refit");
    CLI::App* sim_cmd = app.add_subcommand("simulate", "emit a generated dataset as CSV");
    CLI::App* mc_cmd = app.add_subcommand("mc", "Monte Carlo repetition study");
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "exhaustive 1D interval reference");
    for (CLI::App* cmd : {fit_cmd, cv_cmd, sim_cmd, mc_cmd, oracle_cmd}) add_common(cmd);
    oracle_cmd->add_option("--fit-report", fit_report_path,
                           "fit report.json to compare objectives against");

    // The config file must be applied before CLI11 assigns flag values, so
    // that flags override it; find it with a pre-scan of argv.
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            config_path = arg.substr(9);
    }
    try {
        if (!config_path.empty()) apply_config_file(rc, config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* cmd = app.get_subcommands().front();

    try {
        // List-valued and enum-valued flags override the config file here;
        // scalar flags already overrode it during parsing.
        if (cmd->count("--scenario")) {
            rc.have_scenario = true;
            rc.sim.scenario = sim::scenario_from_string(scenario_name);
        }
        if (cmd->count("--features")) rc.feature_columns = parse_string_list(features_csv);
        if (cmd->count("--sigma-eps")) rc.sim.sigma_eps = parse_double_list(sigma_csv);
        if (cmd->count("--gamma-grid")) rc.gamma_grid = parse_double_list(gamma_grid_csv);
        if (cmd->count("--c-schedule")) rc.penalty_schedule = parse_double_list(schedule_csv);
        if (cmd->count("--subregions"))
            rc.subregion_boundaries = parse_double_list(subregions_csv);
        if (cmd->count("--cv-mode")) rc.cv_mode = cv_mode_from_string(cv_mode_name);
        if (cmd->count("--bootstrap-seeding")) rc.seeding = seeding_from_string(seeding_name);
        if (cmd->count("--gamma-policy")) rc.gamma_policy.kind = policy_from_string(policy_name);
        if (cmd->count("--seed")) rc.seed = seed_flag;

        if (!rc.seed)
            throw std::runtime_error("--seed is required (no wall-clock seeding)");

        if (cmd == fit_cmd) return cmd_fit(rc);
        if (cmd == cv_cmd) return cmd_cv(rc);
        if (cmd == sim_cmd) return cmd_simulate(rc);
        if (cmd == mc_cmd) return cmd_mc(rc);
        if (cmd == oracle_cmd) return cmd_oracle(rc, fit_report_path);
        throw std::runtime_error("unknown subcommand");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
