#include "gm/lfr.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>
#include <unordered_map>

#include "gm/error.hpp"
#include "gm/rng.hpp"

namespace gm {

namespace {

constexpr int kDegreeRedraws = 10;
constexpr int kBisectIters = 60;

double powerlaw_integral(double exponent, double lo, double hi, double shift) {
    // integral of x^(shift - exponent) over [lo, hi]
    const double p = shift - exponent + 1.0;
    if (std::abs(p) < 1e-9) return std::log(hi / lo);
    return (std::pow(hi, p) - std::pow(lo, p)) / p;
}

double continuous_powerlaw_draw(double exponent, double lo, double hi, std::mt19937_64& rng) {
    const double u = uniform01(rng);
    if (std::abs(exponent - 1.0) < 1e-9) return lo * std::pow(hi / lo, u);
    const double p = 1.0 - exponent;
    const double a = std::pow(lo, p);
    const double b = std::pow(hi, p);
    return std::pow(a + u * (b - a), 1.0 / p);
}

int rounded_powerlaw_draw(double exponent, double lo, int hi, std::mt19937_64& rng) {
    const double x = continuous_powerlaw_draw(exponent, lo, static_cast<double>(hi), rng);
    const auto v = static_cast<int>(std::llround(x));
    return std::clamp(v, static_cast<int>(std::llround(std::ceil(lo - 0.5))), hi);
}

using EdgeKey = std::uint64_t;

EdgeKey edge_key(int u, int v, int n) {
    if (u > v) std::swap(u, v);
    return static_cast<EdgeKey>(u) * static_cast<EdgeKey>(n) + static_cast<EdgeKey>(v);
}

}  // namespace

double tau_to_unit(double tau) { return 1.0 - 1.0 / std::pow(tau, 0.7); }

double unit_to_tau(double tilde) { return std::pow(1.0 / (1.0 - tilde), 1.0 / 0.7); }

double bounded_powerlaw_mean(double exponent, double lo, double hi) {
    if (lo >= hi) return lo;
    return powerlaw_integral(exponent, lo, hi, 1.0) / powerlaw_integral(exponent, lo, hi, 0.0);
}

std::vector<int> sample_powerlaw(double exponent, int lo, int hi, int count,
                                 std::mt19937_64& rng) {
    if (lo < 1 || lo > hi)
        throw Error(ErrorCode::InvalidArgument, "power law bounds need 1 <= lo <= hi");
    std::vector<int> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] =
            rounded_powerlaw_draw(exponent, static_cast<double>(lo), hi, rng);
    return out;
}

SampledConfig sample_lfr_config(int n_lo, int n_hi, std::uint64_t seed) {
    if (n_lo < 2 || n_lo > n_hi)
        throw Error(ErrorCode::InvalidArgument, "bad node count range");
    std::mt19937_64 rng(seed);

    SampledConfig cfg;
    cfg.seed = seed;
    cfg.params.n = static_cast<int>(uniform_int(rng, n_lo, n_hi));
    cfg.tilde_tau1 = uniform01(rng);
    cfg.tilde_tau2 = uniform01(rng);
    cfg.params.mu = uniform01(rng);
    cfg.density = uniform01(rng);

    cfg.params.tau1 = unit_to_tau(cfg.tilde_tau1);
    cfg.params.tau2 = unit_to_tau(cfg.tilde_tau2);
    cfg.params.avg_degree =
        std::max(2.0, cfg.density * static_cast<double>(cfg.params.n - 1));
    return cfg;
}

double realized_mixing(const Graph& g) {
    if (g.edges.empty()) return 0.0;
    int cut = 0;
    for (const auto& [u, v] : g.edges)
        if (g.communities[static_cast<std::size_t>(u)] !=
            g.communities[static_cast<std::size_t>(v)])
            ++cut;
    return static_cast<double>(cut) / static_cast<double>(g.edges.size());
}

std::optional<Graph> lfr_attempt(const LfrParams& params, std::mt19937_64& rng,
                                 const LfrLimits& limits, int* swaps_out) {
    const int n = params.n;
    const int max_deg = params.max_degree > 0 ? std::min(params.max_degree, n - 1) : n - 1;
    const double target = params.avg_degree;

    // (1) degree sequence: bisect the continuous lower bound so the bounded
    // power-law mean hits the target, then draw until the rounded draws land
    // within the tolerance band.
    double lo = 1.0;
    if (bounded_powerlaw_mean(params.tau1, 1.0, static_cast<double>(max_deg)) < target) {
        double a = 1.0, b = static_cast<double>(max_deg);
        for (int it = 0; it < kBisectIters; ++it) {
            const double mid = 0.5 * (a + b);
            if (bounded_powerlaw_mean(params.tau1, mid, static_cast<double>(max_deg)) < target)
                a = mid;
            else
                b = mid;
        }
        lo = 0.5 * (a + b);
    }

    std::vector<int> degrees;
    bool degrees_ok = false;
    for (int redraw = 0; redraw < kDegreeRedraws && !degrees_ok; ++redraw) {
        degrees.resize(static_cast<std::size_t>(n));
        long long total = 0;
        for (int i = 0; i < n; ++i) {
            degrees[static_cast<std::size_t>(i)] =
                std::clamp(rounded_powerlaw_draw(params.tau1, lo, max_deg, rng), 1, max_deg);
            total += degrees[static_cast<std::size_t>(i)];
        }
        const double mean = static_cast<double>(total) / static_cast<double>(n);
        degrees_ok = std::abs(mean - target) <= limits.degree_tolerance * target;
    }
    if (!degrees_ok) return std::nullopt;

    if (std::accumulate(degrees.begin(), degrees.end(), 0ll) % 2 != 0) {
        bool fixed = false;
        for (int i = 0; i < n && !fixed; ++i)
            if (degrees[static_cast<std::size_t>(i)] < max_deg) {
                ++degrees[static_cast<std::size_t>(i)];
                fixed = true;
            }
        for (int i = 0; i < n && !fixed; ++i)
            if (degrees[static_cast<std::size_t>(i)] > 1) {
                --degrees[static_cast<std::size_t>(i)];
                fixed = true;
            }
        if (!fixed) return std::nullopt;
    }

    // (2) community sizes.
    const int min_degree = *std::min_element(degrees.begin(), degrees.end());
    int min_c = params.min_community > 0 ? params.min_community
                                         : std::max(min_degree + 1, 3);
    min_c = std::min(min_c, n);
    int max_c = params.max_community > 0 ? std::min(params.max_community, n) : n;
    max_c = std::max(max_c, min_c);

    std::vector<int> sizes;
    int size_sum = 0;
    while (size_sum < n) {
        const int s = rounded_powerlaw_draw(params.tau2, static_cast<double>(min_c), max_c, rng);
        sizes.push_back(std::max(s, 1));
        size_sum += sizes.back();
    }
    if (size_sum > n) {
        const int excess = size_sum - n;
        sizes.back() -= excess;
        if (sizes.back() <= 0) {
            const int leftover = sizes.back();
            sizes.pop_back();
            if (sizes.empty()) return std::nullopt;
            sizes.back() += leftover;  // leftover <= 0 trims the previous size
            if (sizes.back() <= 0) return std::nullopt;
        }
    }
    const int k = static_cast<int>(sizes.size());

    // (3) community assignment honoring internal stub capacity.
    std::vector<int> internal(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        internal[static_cast<std::size_t>(i)] = static_cast<int>(
            std::llround((1.0 - params.mu) * degrees[static_cast<std::size_t>(i)]));

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (internal[static_cast<std::size_t>(a)] != internal[static_cast<std::size_t>(b)])
            return internal[static_cast<std::size_t>(a)] > internal[static_cast<std::size_t>(b)];
        return a < b;
    });

    std::vector<int> community(static_cast<std::size_t>(n), -1);
    std::vector<int> free_slots(sizes.begin(), sizes.end());
    std::vector<int> candidates;
    for (int node : order) {
        candidates.clear();
        for (int c = 0; c < k; ++c)
            if (free_slots[static_cast<std::size_t>(c)] > 0 &&
                sizes[static_cast<std::size_t>(c)] - 1 >= internal[static_cast<std::size_t>(node)])
                candidates.push_back(c);
        int chosen;
        if (!candidates.empty()) {
            chosen = candidates[static_cast<std::size_t>(uniform_int(
                rng, 0, static_cast<long long>(candidates.size()) - 1))];
        } else {
            chosen = -1;
            for (int c = 0; c < k; ++c) {
                if (free_slots[static_cast<std::size_t>(c)] <= 0) continue;
                if (chosen < 0 ||
                    sizes[static_cast<std::size_t>(c)] > sizes[static_cast<std::size_t>(chosen)])
                    chosen = c;
            }
            if (chosen < 0) return std::nullopt;
            internal[static_cast<std::size_t>(node)] =
                sizes[static_cast<std::size_t>(chosen)] - 1;
        }
        community[static_cast<std::size_t>(node)] = chosen;
        --free_slots[static_cast<std::size_t>(chosen)];
    }

    // Per-community internal stub parity.
    for (int c = 0; c < k; ++c) {
        long long sum = 0;
        for (int i = 0; i < n; ++i)
            if (community[static_cast<std::size_t>(i)] == c)
                sum += internal[static_cast<std::size_t>(i)];
        if (sum % 2 == 0) continue;
        int pick = -1;
        for (int i = 0; i < n; ++i) {
            if (community[static_cast<std::size_t>(i)] != c) continue;
            if (internal[static_cast<std::size_t>(i)] == 0) continue;
            if (pick < 0 ||
                internal[static_cast<std::size_t>(i)] > internal[static_cast<std::size_t>(pick)])
                pick = i;
        }
        if (pick < 0) return std::nullopt;
        --internal[static_cast<std::size_t>(pick)];
    }

    // (4) configuration-model wiring: one stub pool per community, one global
    // external pool.
    std::vector<std::vector<std::pair<int, int>>> pools(static_cast<std::size_t>(k) + 1);
    long long m_total = 0;
    for (int c = 0; c <= k; ++c) {
        std::vector<int> stubs;
        if (c < k) {
            for (int i = 0; i < n; ++i)
                if (community[static_cast<std::size_t>(i)] == c)
                    stubs.insert(stubs.end(),
                                 static_cast<std::size_t>(internal[static_cast<std::size_t>(i)]), i);
        } else {
            for (int i = 0; i < n; ++i) {
                const int ext =
                    degrees[static_cast<std::size_t>(i)] - internal[static_cast<std::size_t>(i)];
                stubs.insert(stubs.end(), static_cast<std::size_t>(ext), i);
            }
        }
        if (stubs.size() % 2 != 0) return std::nullopt;
        shuffle_vector(stubs, rng);
        auto& pool = pools[static_cast<std::size_t>(c)];
        pool.reserve(stubs.size() / 2);
        for (std::size_t s = 0; s + 1 < stubs.size(); s += 2) {
            int u = stubs[s], v = stubs[s + 1];
            if (u > v) std::swap(u, v);
            pool.emplace_back(u, v);
        }
        m_total += static_cast<long long>(pool.size());
    }

    // (5) Edge-swap rewiring until the union of pools is a simple graph.
    // Hard defects (self-loops, multi-edges) are swapped away inside their
    // pool: a few random partner proposals first, then a deterministic scan
    // from a random offset, so dense or hub-heavy pools cannot stall the
    // search. An internal pair no in-pool swap can repair is handed to the
    // external pool, where partners are plentiful; that moves the node's
    // split by two stubs, well inside the mixing band. Irreparable external
    // pairs fail the attempt.
    std::unordered_map<EdgeKey, int> count;
    count.reserve(static_cast<std::size_t>(m_total) * 2);
    for (const auto& pool : pools)
        for (const auto& [u, v] : pool) ++count[edge_key(u, v, n)];

    const auto same_community = [&](int u, int v) {
        return community[static_cast<std::size_t>(u)] == community[static_cast<std::size_t>(v)];
    };

    const long long swap_cap = 10 * std::max(m_total, 1ll);
    long long swaps = 0;
    constexpr int kRandomProposals = 8;
    constexpr std::pair<int, int> kRemovedPair{-1, -1};

    // Swaps pool[idx] with some partner pool[j] so that both replacement
    // pairs are fresh simple edges accepted by `ok`. Returns false when no
    // partner in the pool works. Every examined candidate is charged to the
    // swap budget.
    const auto try_swap = [&](std::vector<std::pair<int, int>>& pool, std::size_t idx,
                              const auto& ok) -> bool {
        const auto [a, b] = pool[idx];
        const auto size = static_cast<long long>(pool.size());
        const EdgeKey k1 = edge_key(a, b, n);
        const auto multiplicity = [&](EdgeKey key) {
            const auto it = count.find(key);
            long long c = it == count.end() ? 0 : it->second;
            if (key == k1) --c;
            return c;
        };
        const auto attempt = [&](std::size_t j, bool flip) -> bool {
            if (j == idx) return false;
            const auto [c, d] = pool[j];
            if (c < 0) return false;
            int u1 = a, v1 = flip ? d : c;
            int u2 = b, v2 = flip ? c : d;
            if (u1 == v1 || u2 == v2 || !ok(u1, v1) || !ok(u2, v2)) return false;
            if (u1 > v1) std::swap(u1, v1);
            if (u2 > v2) std::swap(u2, v2);
            const EdgeKey k2 = edge_key(c, d, n);
            const EdgeKey k3 = edge_key(u1, v1, n), k4 = edge_key(u2, v2, n);
            const auto residual = [&](EdgeKey key) {
                return multiplicity(key) - (key == k2 ? 1 : 0);
            };
            if (k3 == k4 || residual(k3) > 0 || residual(k4) > 0) return false;
            --count[k1];
            --count[k2];
            ++count[k3];
            ++count[k4];
            pool[idx] = {u1, v1};
            pool[j] = {u2, v2};
            return true;
        };
        if (size < 2) return false;
        for (int r = 0; r < kRandomProposals; ++r) {
            ++swaps;
            const auto j = static_cast<std::size_t>(uniform_int(rng, 0, size - 1));
            if (attempt(j, uniform_int(rng, 0, 1) == 1)) return true;
        }
        const auto offset = static_cast<std::size_t>(uniform_int(rng, 0, size - 1));
        for (long long step = 0; step < size; ++step) {
            ++swaps;
            const auto j = (offset + static_cast<std::size_t>(step)) % pool.size();
            if (attempt(j, false) || attempt(j, true)) return true;
        }
        return false;
    };
    const auto simple_ok = [](int, int) { return true; };

    auto& external = pools[static_cast<std::size_t>(k)];
    for (int p = 0; p <= k; ++p) {
        auto& pool = pools[static_cast<std::size_t>(p)];
        std::deque<std::size_t> queue;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const auto& [u, v] = pool[i];
            if (u == v || count[edge_key(u, v, n)] > 1) queue.push_back(i);
        }
        std::size_t stall = 0;
        while (!queue.empty()) {
            if (swaps > swap_cap) return std::nullopt;
            const auto idx = queue.front();
            queue.pop_front();
            const auto [a, b] = pool[idx];
            if (a < 0 || (a != b && count[edge_key(a, b, n)] <= 1)) continue;
            if (try_swap(pool, idx, simple_ok)) {
                stall = 0;
            } else if (p < k) {
                external.emplace_back(a, b);
                pool[idx] = kRemovedPair;
                stall = 0;
            } else {
                queue.push_back(idx);
                if (++stall > queue.size()) return std::nullopt;
            }
        }
        if (p < k)
            pool.erase(std::remove(pool.begin(), pool.end(), kRemovedPair), pool.end());
    }

    // (5b) Best-effort pass: swap external pairs that landed inside a single
    // community so they cross communities, keeping the graph simple. Stub
    // pairing is blind to labels, so without this pass the realized mixing
    // sits well below mu. Irreducible leftovers (e.g. one community owning
    // most external stubs) are tolerated; the mixing gate below decides.
    if (k >= 2 && external.size() >= 2) {
        const auto cross_ok = [&](int u, int v) { return !same_community(u, v); };
        std::deque<std::size_t> soft;
        for (std::size_t i = 0; i < external.size(); ++i) {
            const auto& [u, v] = external[i];
            if (same_community(u, v)) soft.push_back(i);
        }
        std::size_t stall = 0;
        const long long phase2_start = swaps;
        while (!soft.empty() && stall <= soft.size() && swaps - phase2_start <= swap_cap) {
            const auto idx = soft.front();
            soft.pop_front();
            const auto [a, b] = external[idx];
            if (!same_community(a, b)) continue;
            if (try_swap(external, idx, cross_ok)) {
                stall = 0;
            } else {
                soft.push_back(idx);
                ++stall;
            }
        }
    }
    if (swaps_out) *swaps_out = static_cast<int>(std::min<long long>(swaps, INT_MAX));

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m_total));
    for (const auto& pool : pools) edges.insert(edges.end(), pool.begin(), pool.end());
    return make_graph(n, std::move(edges), std::move(community));
}

LfrOutcome generate_lfr(const SampledConfig& config, const LfrLimits& limits) {
    const LfrParams& p = config.params;
    if (p.n < 10) throw Error(ErrorCode::InvalidArgument, "lfr needs n >= 10");
    if (p.tau1 < 1.0 || p.tau2 < 1.0)
        throw Error(ErrorCode::InvalidArgument, "power law exponents must be >= 1");
    if (p.mu < 0.0 || p.mu > 1.0)
        throw Error(ErrorCode::InvalidArgument, "mu must lie in [0, 1]");
    if (p.avg_degree < 1.0 || p.avg_degree > static_cast<double>(p.n - 1))
        throw Error(ErrorCode::InvalidArgument, "avg_degree must lie in [1, n-1]");

    for (int attempt = 1; attempt <= limits.max_attempts; ++attempt) {
        std::mt19937_64 rng(fnv1a64("lfr|" + std::to_string(config.seed) + "|attempt|" +
                                    std::to_string(attempt)));
        int swaps = 0;
        auto g = lfr_attempt(p, rng, limits, &swaps);
        if (!g) continue;
        if (!is_connected(*g)) continue;
        const double mix = realized_mixing(*g);
        if (std::abs(mix - p.mu) > limits.mixing_tolerance) continue;

        LfrOutcome out;
        out.graph = std::move(*g);
        out.attempts = attempt;
        out.realized_mixing = mix;
        out.realized_avg_degree =
            2.0 * static_cast<double>(out.graph.edges.size()) / static_cast<double>(p.n);
        out.rewiring_swaps = swaps;
        return out;
    }
    throw Error(ErrorCode::GenerationFailed,
                "no accepted graph after " + std::to_string(limits.max_attempts) +
                    " attempts (n=" + std::to_string(p.n) + ")");
}

}  // namespace gm
