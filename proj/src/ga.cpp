#include "beamtrack/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace beamtrack {

void GaConfig::validate() const {
    if (population < 4) throw std::invalid_argument("GaConfig: population must be >= 4");
    if (generations < 1) throw std::invalid_argument("GaConfig: generations must be >= 1");
    if (!(x_hi > x_lo) || !(y_hi > y_lo))
        throw std::invalid_argument("GaConfig: degenerate search box");
    if (elitism < 0 || elitism >= population)
        throw std::invalid_argument("GaConfig: elitism must be in [0, population)");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
        throw std::invalid_argument("GaConfig: mutation_prob must be in [0, 1]");
    if (!(mutation_sigma >= 0.0) || !(crossover_alpha >= 0.0))
        throw std::invalid_argument("GaConfig: negative mutation_sigma/crossover_alpha");
}

namespace {

struct Individual {
    double x, y, fitness;
};

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

// Blend (BLX-alpha) crossover of one gene.
double blend(double p, double q, double alpha, RngStream& stream) {
    const double lo = std::min(p, q);
    const double hi = std::max(p, q);
    const double d = hi - lo;
    return lo - alpha * d + stream.next_double() * (1.0 + 2.0 * alpha) * d;
}

}  // namespace

GaResult ga_optimize(const std::function<double(double, double)>& fitness,
                     const GaConfig& config, RngStream& stream) {
    config.validate();

    std::vector<Individual> pop(config.population);
    for (auto& ind : pop) {
        ind.x = config.x_lo + stream.next_double() * (config.x_hi - config.x_lo);
        ind.y = config.y_lo + stream.next_double() * (config.y_hi - config.y_lo);
        ind.fitness = fitness(ind.x, ind.y);
    }

    GaResult best{pop[0].x, pop[0].y, -std::numeric_limits<double>::infinity()};
    const auto better = [](const Individual& a, const Individual& b) {
        return a.fitness > b.fitness;
    };

    std::vector<int> rank(pop.size());
    std::vector<Individual> next(pop.size());
    for (int gen = 0; gen <= config.generations; ++gen) {
        for (const auto& ind : pop) {
            if (ind.fitness > best.value) best = {ind.x, ind.y, ind.fitness};
        }
        if (gen == config.generations) break;

        // Rank for elitism; stable so equal fitness keeps population order.
        for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = static_cast<int>(i);
        std::stable_sort(rank.begin(), rank.end(),
                         [&](int a, int b) { return better(pop[a], pop[b]); });

        for (int e = 0; e < config.elitism; ++e) next[e] = pop[rank[e]];

        for (int i = config.elitism; i < config.population; ++i) {
            const auto pick = [&]() -> const Individual& {
                const auto a = stream.next_below(pop.size());
                const auto b = stream.next_below(pop.size());
                return better(pop[b], pop[a]) ? pop[b] : pop[a];
            };
            const Individual& pa = pick();
            const Individual& pb = pick();
            Individual child;
            child.x = blend(pa.x, pb.x, config.crossover_alpha, stream);
            child.y = blend(pa.y, pb.y, config.crossover_alpha, stream);
            if (stream.next_double() < config.mutation_prob)
                child.x += config.mutation_sigma * stream.next_normal();
            if (stream.next_double() < config.mutation_prob)
                child.y += config.mutation_sigma * stream.next_normal();
            child.x = clamp(child.x, config.x_lo, config.x_hi);
            child.y = clamp(child.y, config.y_lo, config.y_hi);
            child.fitness = fitness(child.x, child.y);
            next[i] = child;
        }
        pop.swap(next);
    }
    return best;
}

}  // namespace beamtrack
