#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "grig/measures.hpp"

namespace grig {

struct WalkOptions {
    long capacity = OrbitPoint::kDefaultCapacity;  // deepest allowed flipped digit
    long position_stride = 0;                      // record gray index every stride steps (0 = off)
    bool record_germs = false;                     // full Klein value sequence (small T only)
};

struct WalkTrajectory {
    long steps = 0;
    uint64_t seed = 0;
    bool truncated = false;         // hit the position capacity
    std::vector<long> flips;        // times t (1-based) with a coset flip at step t
    std::vector<Klein> germs;       // Klein value after each step, if recorded
    std::vector<double> positions;  // gray indices at stride points
    OrbitPoint final_position;
    Klein final_germ = Klein::Id;   // incrementally tracked Klein value
    long last_flip = 0;
};

WalkTrajectory run_walk(const MixtureSampler& mu, long T, uint64_t seed,
                        const WalkOptions& opts = {});

struct StabilizationStats {
    std::vector<long> grid;            // thresholds t
    std::vector<double> frac_flipping; // fraction of trajectories with a flip after t
    std::vector<long> flip_histogram;  // #flips per trajectory
    long trials = 0;
};

StabilizationStats stabilization_stats(const MixtureSampler& mu, long T, long trials,
                                       uint64_t seed0, const std::vector<long>& grid,
                                       const WalkOptions& opts = {});

struct GreenEstimate {
    OrbitPoint target;
    std::vector<long> horizons;
    std::vector<double> estimate;  // mean visits up to each horizon
    std::vector<double> stderr_;
    long trials = 0;
};

// Occupation-measure Green estimates with common trajectories across the
// horizon grid (the horizon-doubling comparison is paired by construction).
std::vector<GreenEstimate> green_mc(const MixtureSampler& mu,
                                    const std::vector<OrbitPoint>& targets,
                                    const std::vector<long>& horizons, long trials,
                                    uint64_t seed0, const WalkOptions& opts = {});

struct WeightedGreenReport {
    std::vector<uint64_t> radii;        // geometric radii
    std::vector<double> partial_sums;   // sum over gray index <= radius
    double total = 0;
    uint64_t radius_cap = 0;
};

// sum_x G(o,x) mu{ g : germ of g at x not in {id,b} }, truncated to the ball
// of the given Gray radius. Green factors from one MC pass; weights exact
// for atoms and sampled for the composite components.
WeightedGreenReport weighted_green_sum(const MixtureSampler& mu, uint64_t radius_cap, long T,
                                       long trials, uint64_t seed0, int weight_samples = 200);

struct GrowthTable {
    std::vector<long> radii;
    std::vector<uint64_t> ball_sizes;   // cumulative v(n)
    std::vector<double> loglog_slopes;  // discrete log log v / log n slopes
};

GrowthTable ball_growth(const Grig& G, int R);

struct TailReport {
    std::vector<double> lengths;     // sampled construction lengths, sorted
    std::vector<long> n_grid;
    std::vector<double> rho_n;       // inf{ r : tail(r) < 1/n }
    std::vector<double> phi_rho;     // truncated first moment at rho_n
    std::vector<double> R_n;         // n * phi(rho_n)
    long trials = 0;
};

TailReport tail_report(const MixtureSampler& mu, long trials, uint64_t seed,
                       const std::vector<long>& n_grid);

} // namespace grig
