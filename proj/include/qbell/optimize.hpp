#pragma once

// Derivative-free maximization: compass (coordinate pattern) search and a
// seeded multistart driver around it.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <thread>
#include <vector>

#include "qbell/random.hpp"

namespace qbell {

struct PatternSearchOptions {
    double initial_step = std::numbers::pi / 4.0;
    double step_tol = 1e-7;
    std::size_t max_evals = 20000;
};

struct PatternSearchResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;  // step fell below step_tol before the budget ran out
};

/// Compass search: probe x ± step·e_i coordinate by coordinate, accept the first
/// strict improvement, halve the step after a sweep without one.
template <typename Objective>
PatternSearchResult pattern_search_maximize(Objective&& f, std::vector<double> x, const PatternSearchOptions& opt) {
    PatternSearchResult r;
    double fx = f(x);
    r.evaluations = 1;
    double step = opt.initial_step;
    while (step >= opt.step_tol && r.evaluations < opt.max_evals) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size() && r.evaluations < opt.max_evals; ++i) {
            for (double dir : {1.0, -1.0}) {
                const double saved = x[i];
                x[i] = saved + dir * step;
                const double fy = f(x);
                ++r.evaluations;
                if (fy > fx) {
                    fx = fy;
                    improved = true;
                    break;
                }
                x[i] = saved;
                if (r.evaluations >= opt.max_evals) break;
            }
        }
        if (!improved) step *= 0.5;
    }
    r.converged = step < opt.step_tol;
    r.x = std::move(x);
    r.value = fx;
    return r;
}

struct MultistartOptions {
    std::size_t restarts = 8;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    PatternSearchOptions search;
};

struct MultistartResult {
    PatternSearchResult best;
    std::size_t best_restart = 0;
    std::size_t restarts = 0;
    std::size_t evaluations = 0;  // summed over restarts
    bool converged = false;       // the winning restart converged
};

/// Runs `restarts` pattern searches; restart r starts from sample(rng_r) where
/// rng_r is substream r of `seed`. The winner is the highest value, ties going to
/// the lowest restart index, so the result does not depend on `threads`, and
/// adding restarts can only raise the best value.
template <typename Objective, typename Sampler>
MultistartResult multistart_maximize(const Objective& f, const Sampler& sample, const MultistartOptions& opt) {
    std::vector<PatternSearchResult> runs(opt.restarts);
    auto run_one = [&](std::size_t r) {
        Rng rng = Rng::stream(opt.seed, r);
        runs[r] = pattern_search_maximize(f, sample(rng), opt.search);
    };

    const unsigned workers = opt.threads > 1 ? opt.threads : 1;
    if (workers == 1 || opt.restarts < 2) {
        for (std::size_t r = 0; r < opt.restarts; ++r) run_one(r);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t r = w; r < opt.restarts; r += workers) run_one(r);
            });
        }
    }

    MultistartResult out;
    out.restarts = opt.restarts;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        out.evaluations += runs[r].evaluations;
        if (r == 0 || runs[r].value > runs[out.best_restart].value) out.best_restart = r;
    }
    if (!runs.empty()) {
        out.best = runs[out.best_restart];
        out.converged = out.best.converged;
    }
    return out;
}

}  // namespace qbell
