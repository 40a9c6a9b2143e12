#include "envelope/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace envelope {

nlohmann::json to_json(const HyperRectangle& b) {
    return nlohmann::json{{"lower", b.lower}, {"upper", b.upper}};
}

nlohmann::json to_json(const RegionUnion& r) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : r.boxes) boxes.push_back(to_json(b));
    return boxes;
}

RegionUnion region_from_json(const nlohmann::json& j) {
    RegionUnion r;
    for (const auto& jb : j) {
        HyperRectangle b;
        b.lower = jb.at("lower").get<std::vector<double>>();
        b.upper = jb.at("upper").get<std::vector<double>>();
        r.boxes.push_back(std::move(b));
    }
    if (!r.boxes.empty()) r.p = r.boxes.front().dim();
    return r;
}

nlohmann::json to_json(const GARun& run, bool include_history) {
    nlohmann::json j{{"best_fitness", run.best_fitness},
                     {"generations_used", run.generations_used}};
    if (include_history) j["history"] = run.history;
    return j;
}

nlohmann::json to_json(const RegionEstimate& est) {
    nlohmann::json j{{"coverage", est.coverage}, {"inside_count", est.inside_count}};
    if (est.mean)
        j["mean"] = *est.mean;
    else
        j["mean"] = nullptr;
    return j;
}

nlohmann::json to_json(const FitResult& fr) {
    return nlohmann::json{{"feasible", fr.feasible},
                          {"region", to_json(fr.region)},
                          {"train_mean", fr.train_mean},
                          {"train_coverage", fr.train_coverage},
                          {"train_sd", fr.train_sd},
                          {"objective", fr.objective},
                          {"chosen_c", fr.chosen_c},
                          {"ga", to_json(fr.ga)}};
}

nlohmann::json to_json(const CVReport& rep) {
    nlohmann::json means = nlohmann::json::array();
    for (const auto& m : rep.fold_test_means) {
        if (m)
            means.push_back(*m);
        else
            means.push_back(nullptr);
    }
    nlohmann::json regions = nlohmann::json::array();
    for (const auto& r : rep.fold_regions) regions.push_back(to_json(r));
    nlohmann::json j{{"gamma", rep.gamma},
                     {"fold_test_means", means},
                     {"empty_folds", rep.empty_folds},
                     {"fold_regions", regions},
                     {"fold_feasible", rep.fold_feasible}};
    j["bias"] = rep.bias ? nlohmann::json(*rep.bias) : nlohmann::json(nullptr);
    j["variance"] = rep.variance ? nlohmann::json(*rep.variance) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const sim::MonteCarloReport& rep) {
    nlohmann::json per_rep = nlohmann::json::array();
    for (const auto& r : rep.per_rep) {
        per_rep.push_back(nlohmann::json{{"seed", r.seed},
                                         {"cell", r.cell},
                                         {"feasible", r.feasible},
                                         {"train_mean", r.train_mean},
                                         {"coverage", r.coverage},
                                         {"region", to_json(r.region)}});
    }
    return nlohmann::json{{"repetitions", rep.repetitions},
                          {"cell_counts", rep.cell_counts},
                          {"per_rep", per_rep}};
}

nlohmann::json to_json(const sim::Oracle1DResult& r) {
    return nlohmann::json{{"interval", to_json(r.interval)},
                          {"objective", r.objective},
                          {"mean", r.mean},
                          {"sd", r.sd},
                          {"coverage", r.coverage},
                          {"inside_count", r.inside_count}};
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

std::string fitness_history_csv(const std::vector<std::pair<double, const GARun*>>& runs) {
    std::string out = "c,generation,best_fitness\n";
    char buf[64];
    for (const auto& [c, run] : runs) {
        for (std::size_t g = 0; g < run->history.size(); ++g) {
            std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g\n", c, g, run->history[g]);
            out += buf;
        }
    }
    return out;
}

} // namespace envelope
