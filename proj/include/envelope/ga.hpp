#ifndef ENVELOPE_GA_HPP
#define ENVELOPE_GA_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "envelope/dataset.hpp"
#include "envelope/region.hpp"
#include "envelope/rng.hpp"

namespace envelope {

struct GAConfig {
    std::size_t population_size = 100;   // W
    std::size_t max_generations = 200;
    double crossover_prob = 0.8;
    double mutation_prob = 0.1;          // per coordinate
    double mutation_scale = 0.1;         // noise SD as a fraction of domain width
    std::size_t elitism_count = 2;
    std::size_t stall_generations = 30;
    double stall_tolerance = 1e-6;
    std::uint64_t seed = 0;
};

struct GARun {
    ParamVector best_vector;
    double best_fitness = 0.0;
    std::vector<double> history;     // best-so-far fitness per generation
    std::size_t generations_used = 0;
};

// W vectors of length 2*p*L; each (low, high) pair is drawn uniformly from
// the per-dimension bounds and order-canonicalized. Deterministic per seed.
std::vector<ParamVector> initialize_population(const DomainBounds& bounds,
                                               std::size_t num_boxes,
                                               const GAConfig& cfg);

// Size-2 tournament over two distinct uniformly drawn entrants: the higher
// fitness wins, exact ties are decided by a fair coin. Rank-based, so it is
// unaffected by the strongly negative sentinel fitness values.
std::size_t tournament_pick(std::span<const double> fitness, Rng& rng);

// Parent index pairs for one generation of offspring.
std::vector<std::pair<std::size_t, std::size_t>> select_parents(
    std::span<const double> fitness, std::size_t pairs, Rng& rng);

// Uniform coordinate exchange with probability crossover_prob, otherwise
// plain copies. Each coordinate swaps independently with probability 1/2;
// the coordinate multiset over the two children always equals the parents'.
std::pair<ParamVector, ParamVector> crossover(const ParamVector& a,
                                              const ParamVector& b,
                                              const GAConfig& cfg, Rng& rng);

// Additive Gaussian noise per coordinate with probability mutation_prob,
// SD = mutation_scale * width of that coordinate's dimension, clamped to
// the bounds afterwards.
void mutate(ParamVector& v, const DomainBounds& bounds, std::size_t num_boxes,
            const GAConfig& cfg, Rng& rng);

/**
 * Generational GA with elitism maximizing an arbitrary total fitness over
 * box-union parameter vectors inside the given bounds.
 *
 * Stops at max_generations, or when the best fitness has improved by less
 * than stall_tolerance over stall_generations consecutive generations.
 * history records the best-so-far value each generation and is therefore
 * nondecreasing. Fitness evaluations within a generation run on `workers`
 * threads into per-individual slots; results are identical for any worker
 * count provided the fitness function is itself deterministic.
 */
GARun run_ga(const std::function<double(const ParamVector&)>& fitness,
             const DomainBounds& bounds, std::size_t num_boxes,
             const GAConfig& cfg, std::size_t workers = 1);

} // namespace envelope

#endif // ENVELOPE_GA_HPP
