#include "envelope/objective.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "envelope/rng.hpp"

namespace envelope {

double default_eta(const Dataset& d) {
    return d.y_min() - (d.y_max() - d.y_min()) - 1.0;
}

FitnessEvaluator::FitnessEvaluator(const Dataset& d, ObjectiveConfig cfg,
                                   std::size_t num_boxes)
    : data_(d), cfg_(std::move(cfg)), num_boxes_(num_boxes) {
    if (num_boxes_ < 1)
        throw std::invalid_argument("FitnessEvaluator: need at least one box");
    if (!(cfg_.beta >= 0.0 && cfg_.beta < 1.0))
        throw std::invalid_argument("FitnessEvaluator: beta must be in [0,1)");
    if (!(cfg_.penalty_weight > 0.0))
        throw std::invalid_argument("FitnessEvaluator: penalty weight must be positive");
    if (!(cfg_.gamma >= 0.0))
        throw std::invalid_argument("FitnessEvaluator: gamma must be nonnegative");
    if (cfg_.gamma > 0.0 && cfg_.bootstrap.replicates < 2)
        throw std::invalid_argument("FitnessEvaluator: bootstrap needs M >= 2");
    eta_ = cfg_.eta ? *cfg_.eta : default_eta(d);
    if (!(eta_ < d.y_min()))
        throw std::invalid_argument("FitnessEvaluator: eta must be below min(y)");

    if (cfg_.gamma > 0.0 && cfg_.seeding == BootstrapSeeding::shared) {
        // Replicate m draws once, reused for every candidate.
        shared_draws_.resize(cfg_.bootstrap.replicates);
        for (std::size_t m = 0; m < cfg_.bootstrap.replicates; ++m)
            shared_draws_[m] = bootstrap_indices(d.n(), cfg_.bootstrap.seed + m);
    }
}

double FitnessEvaluator::shared_mode_sd(const std::vector<std::uint8_t>& member) const {
    std::size_t M = cfg_.bootstrap.replicates;
    std::size_t n = data_.n();
    const std::vector<double>& y = data_.y_values();
    std::vector<double> means(M);
    for (std::size_t m = 0; m < M; ++m) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t idx : shared_draws_[m]) {
            if (member[idx]) {
                sum += y[idx];
                ++count;
            }
        }
        if (count == 0) {
            // Same redraw sequence bootstrap_sd uses, computed lazily since
            // this is vanishingly rare at practical coverages.
            bool ok = false;
            for (std::size_t attempt = 1; attempt < 10 && !ok; ++attempt) {
                Rng rng(cfg_.bootstrap.seed + m + attempt * M);
                sum = 0.0;
                count = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t idx = rng.uniform_index(n);
                    if (member[idx]) {
                        sum += y[idx];
                        ++count;
                    }
                }
                ok = count > 0;
            }
            if (!ok)
                throw std::runtime_error(
                    "bootstrap_sd: replicate repeatedly empty of in-region rows");
        }
        means[m] = sum / static_cast<double>(count);
    }
    double mean = 0.0;
    for (double v : means) mean += v;
    mean /= static_cast<double>(M);
    double ss = 0.0;
    for (double v : means) {
        double dlt = v - mean;
        ss += dlt * dlt;
    }
    return std::sqrt(ss / static_cast<double>(M - 1));
}

FitnessBreakdown FitnessEvaluator::evaluate_members(
    const std::vector<std::uint8_t>& member, double sum, std::size_t count) const {
    FitnessBreakdown out;
    out.coverage = static_cast<double>(count) / static_cast<double>(data_.n());
    if (count == 0) {
        out.sentinel = true;
        out.fitness = eta_;
        return out;
    }
    out.raw_mean = sum / static_cast<double>(count);

    double sd = 0.0;
    if (cfg_.gamma > 0.0) {
        try {
            if (cfg_.seeding == BootstrapSeeding::shared) {
                sd = shared_mode_sd(member);
            } else {
                std::uint64_t member_hash =
                    hash_bytes(member.data(), member.size());
                BootstrapConfig bs = cfg_.bootstrap;
                bs.seed = mix_seed(cfg_.bootstrap.seed, member_hash);
                sd = bootstrap_sd_members(data_.y_values(), member, bs);
            }
        } catch (const std::exception& e) {
            std::cerr << "warning: bootstrap failed during fitness evaluation ("
                      << e.what() << "); assigning sentinel\n";
            out = FitnessBreakdown{};
            out.sentinel = true;
            out.fitness = eta_;
            return out;
        }
    }
    out.sd = sd;

    double violation = cfg_.beta - out.coverage;
    out.penalty_term = violation > 0.0 ? cfg_.penalty_weight * violation : 0.0;
    out.fitness = *out.raw_mean - cfg_.gamma * sd - out.penalty_term;
    return out;
}

FitnessBreakdown FitnessEvaluator::evaluate(const ParamVector& v) const {
    std::optional<RegionUnion> region = decode(v, num_boxes_, data_.p());
    if (!region) {
        FitnessBreakdown out;
        out.sentinel = true;
        out.fitness = eta_;
        return out;
    }

    std::vector<std::uint8_t> member(data_.n(), 0);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < data_.n(); ++i) {
        if (contains_union(*region, data_.row(i))) {
            member[i] = 1;
            sum += data_.y(i);
            ++count;
        }
    }

    // Fitness depends on the candidate only through its membership pattern,
    // so identical patterns can share one cached evaluation.
    std::uint64_t key = hash_bytes(member.data(), member.size());
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    FitnessBreakdown out = evaluate_members(member, sum, count);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        cache_.emplace(key, out);
    }
    return out;
}

FitnessBreakdown sentinel_objective(const Dataset& d, const ParamVector& v,
                                    const ObjectiveConfig& cfg, std::size_t num_boxes) {
    double eta = cfg.eta ? *cfg.eta : default_eta(d);
    FitnessBreakdown out;
    std::optional<RegionUnion> region = decode(v, num_boxes, d.p());
    if (!region) {
        out.sentinel = true;
        out.fitness = eta;
        return out;
    }
    RegionEstimate est = estimate(d, *region);
    out.coverage = est.coverage;
    if (!est.mean) {
        out.sentinel = true;
        out.fitness = eta;
        return out;
    }
    out.raw_mean = est.mean;
    out.fitness = *est.mean;
    return out;
}

FitnessBreakdown penalized_fitness(const Dataset& d, const ParamVector& v,
                                   const ObjectiveConfig& cfg, std::size_t num_boxes) {
    FitnessEvaluator ev(d, cfg, num_boxes);
    return ev.evaluate(v);
}

} // namespace envelope
