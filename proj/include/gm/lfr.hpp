#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "gm/graph.hpp"

namespace gm {

struct LfrParams {
    int n = 0;
    double tau1 = 2.0;  // degree exponent, > 1
    double tau2 = 1.5;  // community size exponent, > 1
    double mu = 0.1;    // mixing fraction
    double avg_degree = 8.0;
    int max_degree = -1;     // -1: n - 1
    int min_community = -1;  // -1: max(min sampled degree + 1, 3)
    int max_community = -1;  // -1: n
};

// tilde = 1 - 1/tau^0.7 keeps exponent sampling uniform on a bounded scale.
double tau_to_unit(double tau);
double unit_to_tau(double tilde);

struct SampledConfig {
    LfrParams params;
    double tilde_tau1 = 0.0;
    double tilde_tau2 = 0.0;
    double density = 0.0;  // avg_degree / (n - 1)
    std::uint64_t seed = 0;
};

// Draws one benchmark configuration: n uniform integer in [n_lo, n_hi];
// tilde_tau1, tilde_tau2, mu, density each uniform in [0, 1];
// tau_i = (1/(1 - tilde_tau_i))^(1/0.7); avg_degree = max(2, density*(n-1)).
SampledConfig sample_lfr_config(int n_lo, int n_hi, std::uint64_t seed);

// Mean of the continuous bounded power law p(x) ~ x^-exponent on [lo, hi].
double bounded_powerlaw_mean(double exponent, double lo, double hi);

// Integer draws: inverse CDF of the continuous law, rounded, clamped to
// [lo, hi].
std::vector<int> sample_powerlaw(double exponent, int lo, int hi, int count,
                                 std::mt19937_64& rng);

struct LfrOutcome {
    Graph graph;
    int attempts = 0;
    double realized_mixing = 0.0;
    double realized_avg_degree = 0.0;
    int rewiring_swaps = 0;
};

struct LfrLimits {
    int max_attempts = 20;
    double mixing_tolerance = 0.05;   // |realized - mu| acceptance band
    double degree_tolerance = 0.10;   // relative error on the mean degree
};

// One construction attempt; nullopt when the attempt cannot be assembled
// (degree draws off target, unfixable duplicate edges).
std::optional<Graph> lfr_attempt(const LfrParams& params, std::mt19937_64& rng,
                                 const LfrLimits& limits, int* swaps = nullptr);

// Retries lfr_attempt until a connected graph inside the mixing band comes
// out, up to max_attempts. Throws Error(GenerationFailed).
LfrOutcome generate_lfr(const SampledConfig& config, const LfrLimits& limits = {});

// Fraction of edges whose endpoints live in different communities.
double realized_mixing(const Graph& g);

}  // namespace gm
