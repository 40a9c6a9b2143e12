#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string cli_path() {
    const char* env = std::getenv("ENVELOPE_CLI");
    return env ? env : "";
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " > /dev/null 2> /dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::string kQuickGA =
    " --population 24 --generations 30 --stall-generations 10 --M 16";

} // namespace

TEST_CASE("cli: simulate twice with one seed gives byte-identical CSV") {
    if (cli_path().empty()) return; // only meaningful under ctest
    fs::path a = fresh_dir("envcli_sim_a");
    fs::path b = fresh_dir("envcli_sim_b");
    REQUIRE(run_cli("simulate --scenario I-b --n 200 --seed 5 --out " + a.string()) == 0);
    REQUIRE(run_cli("simulate --scenario I-b --n 200 --seed 5 --out " + b.string()) == 0);
    CHECK(slurp(a / "dataset.csv") == slurp(b / "dataset.csv"));
    REQUIRE(run_cli("simulate --scenario I-b --n 200 --seed 6 --out " + b.string()) == 0);
    CHECK(slurp(a / "dataset.csv") != slurp(b / "dataset.csv"));
}

TEST_CASE("cli: fit on scenario I-b meets its coverage floor") {
    if (cli_path().empty()) return;
    fs::path dir = fresh_dir("envcli_fit");
    REQUIRE(run_cli("fit --scenario I-b --n 400 --beta 0.4 --seed 20 --workers 1 --out " +
                    dir.string() + kQuickGA) == 0);
    json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep["result"]["feasible"].get<bool>());
    CHECK(rep["result"]["region"].size() == 1);
    CHECK(rep["result"]["train_coverage"].get<double>() >= 0.4);
    CHECK(rep["config"]["beta"].get<double>() == 0.4);
    CHECK(fs::exists(dir / "fitness_history.csv"));
}

TEST_CASE("cli: reports are byte-identical across reruns and worker counts") {
    if (cli_path().empty()) return;
    fs::path a = fresh_dir("envcli_det_a");
    fs::path b = fresh_dir("envcli_det_b");
    fs::path c = fresh_dir("envcli_det_c");
    std::string base = "fit --scenario I-c --n 250 --beta 0.25 --gamma 1.5 --seed 33" +
                       kQuickGA + " --out ";
    REQUIRE(run_cli(base + a.string() + " --workers 1") == 0);
    REQUIRE(run_cli(base + b.string() + " --workers 1") == 0);
    REQUIRE(run_cli(base + c.string() + " --workers 3") == 0);
    CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
    CHECK(slurp(a / "report.json") == slurp(c / "report.json"));
}

TEST_CASE("cli: exit codes distinguish errors from infeasibility") {
    if (cli_path().empty()) return;
    fs::path dir = fresh_dir("envcli_exit");
    CHECK(run_cli("fit --input /nonexistent.csv --features a --seed 1 --out " +
                  dir.string()) == 1);
    CHECK(run_cli("fit --scenario I-b --seed 1 --out " + dir.string() +
                  " --beta 0.9 --c-schedule 1e-9 --n 200" + kQuickGA) == 2);
    CHECK(run_cli("oracle --scenario II --n 100 --seed 1 --out " + dir.string()) == 1);
    CHECK(run_cli("fit --scenario I-b --n 100 --out " + dir.string()) == 1); // no seed
}

TEST_CASE("cli: oracle command reports the objective gap against a fit") {
    if (cli_path().empty()) return;
    fs::path dir = fresh_dir("envcli_oracle");
    std::string common = " --scenario I-b --n 240 --beta 0.3 --seed 44 --out " + dir.string();
    REQUIRE(run_cli("fit" + common + kQuickGA) == 0);
    REQUIRE(run_cli("oracle" + common + " --fit-report " + (dir / "report.json").string()) == 0);
    json rep = json::parse(slurp(dir / "oracle_report.json"));
    // exhaustive reference dominates whatever the GA found
    CHECK(rep["objective_gap"].get<double>() >= -1e-9);
    CHECK(rep["oracle"]["coverage"].get<double>() >= 0.3);
}

TEST_CASE("cli: mc command emits counts that sum to repetitions") {
    if (cli_path().empty()) return;
    fs::path dir = fresh_dir("envcli_mc");
    REQUIRE(run_cli("mc --scenario I-a --n 150 --beta 0.25 --repetitions 3 --seed 50 "
                    "--workers 1 --out " + dir.string() + kQuickGA) == 0);
    json rep = json::parse(slurp(dir / "mc_report.json"));
    std::size_t total = 0;
    for (const auto& c : rep["report"]["cell_counts"]) total += c.get<std::size_t>();
    CHECK(total == 3);
}

TEST_CASE("cli: five-feature csv flows through cv with a full-shape report") {
    if (cli_path().empty()) return;
    fs::path dir = fresh_dir("envcli_table");
    // synthetic data: quality is higher inside a box on the first two features
    fs::path csv = dir / "plant.csv";
    double global_mean = 0.0;
    {
        std::ofstream out(csv);
        out << "quality,starch,amina,pulp_flow,pulp_ph,pulp_density\n";
        unsigned state = 12345;
        auto rnd = [&]() {
            state = state * 1664525u + 1013904223u;
            return static_cast<double>(state >> 8) / 16777216.0;
        };
        for (int i = 0; i < 240; ++i) {
            double f1 = 2000 + 4000 * rnd(), f2 = 300 + 400 * rnd();
            double f3 = 380 + 30 * rnd(), f4 = 9 + 1.5 * rnd(), f5 = 1.5 + 0.4 * rnd();
            double inside = (f1 > 3000 && f1 < 5000 && f2 > 400 && f2 < 600) ? 0.5 : 0.0;
            double q = inside + 0.2 * rnd();
            global_mean += q / 240.0;
            out << q << ',' << f1 << ',' << f2 << ',' << f3 << ',' << f4 << ',' << f5
                << "\n";
        }
    }
    REQUIRE(run_cli("cv --input " + csv.string() +
                    " --response quality --features starch,amina,pulp_flow,pulp_ph,pulp_density"
                    " --beta 0.2 --gamma-grid 0,2 --folds 2 --seed 60 --workers 1 --out " +
                    dir.string() + kQuickGA) == 0);
    json rep = json::parse(slurp(dir / "cv_report.json"));
    REQUIRE(rep["final"]["region"].size() == 1);
    CHECK(rep["final"]["region"][0]["lower"].size() == 5);
    CHECK(rep["cv_reports"].size() == 2);
    CHECK(rep.contains("gamma_star"));
    CHECK(rep["cv_reports"][0].contains("bias"));
    CHECK(rep["cv_reports"][0].contains("variance"));
    // the fitted envelope must beat blanket operation
    CHECK(rep["final"]["train_mean"].get<double>() > global_mean);
    CHECK(rep["test_estimate"].contains("mean"));
    CHECK(fs::exists(dir / "cv_curves.csv"));
    CHECK(fs::exists(dir / "fitness_history.csv"));
}

TEST_CASE("cli: config file values are overridden by flags") {
    if (cli_path().empty()) return;
    fs::path dir = fresh_dir("envcli_config");
    fs::path cfg = dir / "config.json";
    std::ofstream(cfg) << R"({"input": {"scenario": "I-b", "n": 200}, "beta": 0.2,
                             "seed": 70,
                             "ga": {"population_size": 24, "max_generations": 25,
                                    "stall_generations": 10}})";
    REQUIRE(run_cli("fit --config " + cfg.string() + " --beta 0.4 --M 16 --out " +
                    dir.string()) == 0);
    json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep["config"]["beta"].get<double>() == 0.4);          // flag wins
    CHECK(rep["config"]["input"]["n"].get<int>() == 200);        // config survives
    CHECK(rep["result"]["train_coverage"].get<double>() >= 0.4);
}
