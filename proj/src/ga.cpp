#include "envelope/ga.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "envelope/parallel.hpp"

namespace envelope {

namespace {

constexpr std::uint64_t kInitSalt = 0x696E6974ULL;   // population init stream
constexpr std::uint64_t kLoopSalt = 0x6C6F6F70ULL;   // selection/variation stream

void validate(const GAConfig& cfg) {
    if (cfg.population_size < 4)
        throw std::invalid_argument("GAConfig: population_size must be >= 4");
    if (cfg.elitism_count >= cfg.population_size)
        throw std::invalid_argument("GAConfig: elitism_count must be < population_size");
    if (cfg.crossover_prob < 0.0 || cfg.crossover_prob > 1.0 ||
        cfg.mutation_prob < 0.0 || cfg.mutation_prob > 1.0)
        throw std::invalid_argument("GAConfig: probabilities must be in [0,1]");
    if (cfg.max_generations < 1)
        throw std::invalid_argument("GAConfig: max_generations must be >= 1");
}

} // namespace

std::vector<ParamVector> initialize_population(const DomainBounds& bounds,
                                               std::size_t num_boxes,
                                               const GAConfig& cfg) {
    std::size_t p = bounds.dim();
    Rng rng(mix_seed(cfg.seed, kInitSalt));
    std::vector<ParamVector> pop(cfg.population_size);
    for (auto& v : pop) {
        v.resize(2 * num_boxes * p);
        for (std::size_t l = 0; l < num_boxes; ++l) {
            for (std::size_t j = 0; j < p; ++j) {
                double a = rng.uniform(bounds.lower[j], bounds.upper[j]);
                double b = rng.uniform(bounds.lower[j], bounds.upper[j]);
                if (a > b) std::swap(a, b);
                v[l * 2 * p + 2 * j] = a;
                v[l * 2 * p + 2 * j + 1] = b;
            }
        }
    }
    return pop;
}

std::size_t tournament_pick(std::span<const double> fitness, Rng& rng) {
    std::size_t n = fitness.size();
    if (n == 0) throw std::invalid_argument("tournament_pick: empty population");
    if (n == 1) return 0;
    std::size_t i = rng.uniform_index(n);
    std::size_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    if (fitness[i] > fitness[j]) return i;
    if (fitness[j] > fitness[i]) return j;
    return rng.uniform01() < 0.5 ? i : j;
}

std::vector<std::pair<std::size_t, std::size_t>> select_parents(
    std::span<const double> fitness, std::size_t pairs, Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(pairs);
    for (std::size_t k = 0; k < pairs; ++k)
        out.emplace_back(tournament_pick(fitness, rng), tournament_pick(fitness, rng));
    return out;
}

std::pair<ParamVector, ParamVector> crossover(const ParamVector& a,
                                              const ParamVector& b,
                                              const GAConfig& cfg, Rng& rng) {
    std::pair<ParamVector, ParamVector> children{a, b};
    if (rng.uniform01() >= cfg.crossover_prob) return children;
    for (std::size_t k = 0; k < a.size(); ++k)
        if (rng.uniform01() < 0.5) std::swap(children.first[k], children.second[k]);
    return children;
}

void mutate(ParamVector& v, const DomainBounds& bounds, std::size_t num_boxes,
            const GAConfig& cfg, Rng& rng) {
    std::size_t p = bounds.dim();
    if (v.size() != 2 * num_boxes * p)
        throw std::invalid_argument("mutate: vector length mismatch");
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (rng.uniform01() < cfg.mutation_prob) {
            std::size_t j = (k % (2 * p)) / 2;
            double sd = cfg.mutation_scale * bounds.width(j);
            double x = v[k] + rng.normal(0.0, sd);
            v[k] = std::clamp(x, bounds.lower[j], bounds.upper[j]);
        }
    }
}

GARun run_ga(const std::function<double(const ParamVector&)>& fitness,
             const DomainBounds& bounds, std::size_t num_boxes,
             const GAConfig& cfg, std::size_t workers) {
    validate(cfg);
    const std::size_t W = cfg.population_size;

    std::vector<ParamVector> pop = initialize_population(bounds, num_boxes, cfg);
    std::vector<double> fit(W);
    parallel_for(W, workers, [&](std::size_t i) { fit[i] = fitness(pop[i]); });

    auto best_index = [&]() {
        std::size_t b = 0;
        for (std::size_t i = 1; i < W; ++i)
            if (fit[i] > fit[b]) b = i;
        return b;
    };

    GARun run;
    std::size_t b0 = best_index();
    run.best_vector = pop[b0];
    run.best_fitness = fit[b0];
    run.history.push_back(run.best_fitness);
    run.generations_used = 0;

    Rng rng(mix_seed(cfg.seed, kLoopSalt));
    double marker_fitness = run.best_fitness;
    std::size_t marker_generation = 0;

    std::vector<std::size_t> order(W);
    for (std::size_t gen = 1; gen <= cfg.max_generations; ++gen) {
        // Elites survive unchanged, keeping their fitness; ties break toward
        // the lower index so the ordering is deterministic.
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (fit[a] != fit[b]) return fit[a] > fit[b];
            return a < b;
        });

        std::size_t offspring_count = W - cfg.elitism_count;
        std::vector<ParamVector> offspring;
        offspring.reserve(offspring_count);
        while (offspring.size() < offspring_count) {
            std::size_t pa = tournament_pick(fit, rng);
            std::size_t pb = tournament_pick(fit, rng);
            auto [c1, c2] = crossover(pop[pa], pop[pb], cfg, rng);
            mutate(c1, bounds, num_boxes, cfg, rng);
            offspring.push_back(std::move(c1));
            if (offspring.size() < offspring_count) {
                mutate(c2, bounds, num_boxes, cfg, rng);
                offspring.push_back(std::move(c2));
            }
        }

        std::vector<double> off_fit(offspring_count);
        parallel_for(offspring_count, workers,
                     [&](std::size_t i) { off_fit[i] = fitness(offspring[i]); });

        std::vector<ParamVector> next_pop;
        std::vector<double> next_fit;
        next_pop.reserve(W);
        next_fit.reserve(W);
        for (std::size_t e = 0; e < cfg.elitism_count; ++e) {
            next_pop.push_back(pop[order[e]]);
            next_fit.push_back(fit[order[e]]);
        }
        for (std::size_t i = 0; i < offspring_count; ++i) {
            next_pop.push_back(std::move(offspring[i]));
            next_fit.push_back(off_fit[i]);
        }
        pop.swap(next_pop);
        fit.swap(next_fit);

        std::size_t b = best_index();
        if (fit[b] > run.best_fitness) {
            run.best_fitness = fit[b];
            run.best_vector = pop[b];
        }
        run.history.push_back(run.best_fitness);
        run.generations_used = gen;

        if (run.best_fitness > marker_fitness + cfg.stall_tolerance) {
            marker_fitness = run.best_fitness;
            marker_generation = gen;
        } else if (gen - marker_generation >= cfg.stall_generations) {
            break;
        }
    }
    return run;
}

} // namespace envelope
