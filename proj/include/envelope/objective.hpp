#ifndef ENVELOPE_OBJECTIVE_HPP
#define ENVELOPE_OBJECTIVE_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "envelope/dataset.hpp"
#include "envelope/estimation.hpp"
#include "envelope/region.hpp"

namespace envelope {

// How the bootstrap replicate draws behind the SD regularizer are seeded
// during fitness evaluation.
//
//  per_candidate: the replicate seed is derived from (config seed, hash of
//      the candidate's membership pattern). Re-evaluating any candidate
//      yields the identical fitness within one run, so elitism never sees
//      fitness noise, while distinct candidates get independent draws.
//  shared: every candidate is evaluated against the same replicate draws
//      (common random numbers, replicate m seeded with seed+m exactly as
//      bootstrap_sd does). Fitness is then directly comparable with an
//      external enumeration that uses the same seeds.
enum class BootstrapSeeding { per_candidate, shared };

struct ObjectiveConfig {
    double beta = 0.2;                // coverage floor in [0,1)
    std::optional<double> eta;        // sentinel; default_eta(d) when unset
    double penalty_weight = 1.0;      // c > 0
    double gamma = 0.0;               // regularization weight >= 0
    BootstrapConfig bootstrap;
    BootstrapSeeding seeding = BootstrapSeeding::per_candidate;
};

struct FitnessBreakdown {
    std::optional<double> raw_mean;   // empty on the sentinel branch
    double sd = 0.0;                  // bootstrap SD (0 when gamma == 0)
    double coverage = 0.0;
    double penalty_term = 0.0;        // c * (beta - coverage)^+
    double fitness = 0.0;
    bool sentinel = false;
};

// Sentinel strictly below every response value, with a range-scaled margin:
// min(y) - (max(y) - min(y)) - 1.
double default_eta(const Dataset& d);

/**
 * Evaluates candidate parameter vectors against one dataset and objective
 * configuration. Construction validates the configuration and precomputes
 * what the seeding mode allows (shared-mode replicate draws in particular).
 *
 * evaluate() is safe to call concurrently; results depend only on the
 * candidate, never on evaluation order or thread count. Fitness values for
 * identical membership patterns are cached, which is exact because the
 * fitness is a pure function of the membership pattern.
 */
class FitnessEvaluator {
public:
    FitnessEvaluator(const Dataset& d, ObjectiveConfig cfg, std::size_t num_boxes);

    FitnessBreakdown evaluate(const ParamVector& v) const;
    double fitness(const ParamVector& v) const { return evaluate(v).fitness; }

    double eta() const { return eta_; }
    const ObjectiveConfig& config() const { return cfg_; }

private:
    FitnessBreakdown evaluate_members(const std::vector<std::uint8_t>& member,
                                      double sum, std::size_t count) const;
    double shared_mode_sd(const std::vector<std::uint8_t>& member) const;

    const Dataset& data_;
    ObjectiveConfig cfg_;
    std::size_t num_boxes_;
    double eta_;
    std::vector<std::vector<std::size_t>> shared_draws_; // [replicate][draw]
    mutable std::unordered_map<std::uint64_t, FitnessBreakdown> cache_;
    mutable std::mutex cache_mutex_;
};

// Disjointness-sentineled objective: eta when the vector decodes to an
// invalid union or an empty region, the plain in-region mean otherwise.
// No penalty or regularization is applied on either branch.
FitnessBreakdown sentinel_objective(const Dataset& d, const ParamVector& v,
                                    const ObjectiveConfig& cfg, std::size_t num_boxes);

// One-shot penalized, regularized fitness; equivalent to constructing a
// FitnessEvaluator and evaluating a single vector.
FitnessBreakdown penalized_fitness(const Dataset& d, const ParamVector& v,
                                   const ObjectiveConfig& cfg, std::size_t num_boxes);

} // namespace envelope

#endif // ENVELOPE_OBJECTIVE_HPP
