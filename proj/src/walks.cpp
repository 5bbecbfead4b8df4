#include "grig/walks.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

namespace grig {

WalkTrajectory run_walk(const MixtureSampler& mu, long T, uint64_t seed,
                        const WalkOptions& opts) {
    WalkTrajectory tr;
    tr.seed = seed;
    std::mt19937_64 rng(seed);
    OrbitPoint pos;
    Klein germ = Klein::Id;
    for (long t = 1; t <= T; ++t) {
        SampleElement x = mu.sample(rng);
        Klein step = x.germ_letter(pos);
        if (nontrivial_b_coset(step)) {
            tr.flips.push_back(t);
            tr.last_flip = t;
        }
        germ = klein_mul(germ, step);
        pos = x.act(pos);
        if (pos.last_zero() > opts.capacity) {
            tr.truncated = true;
            tr.steps = t;
            break;
        }
        if (opts.record_germs) tr.germs.push_back(germ);
        if (opts.position_stride > 0 && t % opts.position_stride == 0)
            tr.positions.push_back(gray_index(pos).to_double());
        tr.steps = t;
    }
    tr.final_position = std::move(pos);
    tr.final_germ = germ;
    return tr;
}

StabilizationStats stabilization_stats(const MixtureSampler& mu, long T, long trials,
                                       uint64_t seed0, const std::vector<long>& grid,
                                       const WalkOptions& opts) {
    StabilizationStats st;
    st.grid = grid;
    st.trials = trials;
    st.frac_flipping.assign(grid.size(), 0.0);
    for (long i = 0; i < trials; ++i) {
        WalkTrajectory tr = run_walk(mu, T, seed0 + uint64_t(i), opts);
        st.flip_histogram.push_back((long)tr.flips.size());
        for (size_t k = 0; k < grid.size(); ++k)
            if (tr.last_flip > grid[k]) st.frac_flipping[k] += 1.0;
    }
    for (auto& f : st.frac_flipping) f /= double(trials);
    return st;
}

std::vector<GreenEstimate> green_mc(const MixtureSampler& mu,
                                    const std::vector<OrbitPoint>& targets,
                                    const std::vector<long>& horizons, long trials,
                                    uint64_t seed0, const WalkOptions&) {
    std::vector<GreenEstimate> out(targets.size());
    long Tmax = *std::max_element(horizons.begin(), horizons.end());
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        out[ti].target = targets[ti];
        out[ti].horizons = horizons;
        out[ti].trials = trials;
        out[ti].estimate.assign(horizons.size(), 0.0);
        out[ti].stderr_.assign(horizons.size(), 0.0);
    }
    std::vector<std::vector<std::vector<double>>> per_trial(
        targets.size(), std::vector<std::vector<double>>(horizons.size()));

    for (long tr = 0; tr < trials; ++tr) {
        std::mt19937_64 rng(seed0 + uint64_t(tr));
        OrbitPoint pos;
        std::vector<long> visits(targets.size(), 0);
        for (size_t ti = 0; ti < targets.size(); ++ti)
            if (pos == targets[ti]) ++visits[ti];
        std::vector<std::vector<long>> at_horizon(targets.size(),
                                                  std::vector<long>(horizons.size(), 0));
        size_t next_h = 0;
        std::vector<size_t> hidx(targets.size(), 0);
        for (long t = 1; t <= Tmax; ++t) {
            SampleElement x = mu.sample(rng);
            pos = x.act(pos);
            for (size_t ti = 0; ti < targets.size(); ++ti)
                if (pos == targets[ti]) ++visits[ti];
            while (next_h < horizons.size() && horizons[next_h] == t) {
                for (size_t ti = 0; ti < targets.size(); ++ti)
                    at_horizon[ti][next_h] = visits[ti];
                ++next_h;
            }
        }
        for (size_t ti = 0; ti < targets.size(); ++ti)
            for (size_t h = 0; h < horizons.size(); ++h)
                per_trial[ti][h].push_back(double(at_horizon[ti][h]));
    }
    for (size_t ti = 0; ti < targets.size(); ++ti) {
        for (size_t h = 0; h < horizons.size(); ++h) {
            double mean = 0;
            for (double v : per_trial[ti][h]) mean += v;
            mean /= double(trials);
            double var = 0;
            for (double v : per_trial[ti][h]) var += (v - mean) * (v - mean);
            var = trials > 1 ? var / double(trials - 1) : 0.0;
            out[ti].estimate[h] = mean;
            out[ti].stderr_[h] = std::sqrt(var / double(trials));
        }
    }
    return out;
}

WeightedGreenReport weighted_green_sum(const MixtureSampler& mu, uint64_t radius_cap, long T,
                                       long trials, uint64_t seed0, int weight_samples) {
    WeightedGreenReport rep;
    rep.radius_cap = radius_cap;
    // Green estimates for every point in the ball, one pass.
    size_t cap_bits = 1;
    while ((uint64_t(1) << cap_bits) <= radius_cap) ++cap_bits;
    std::vector<double> green(size_t(radius_cap) + 1, 0.0);
    for (long tr = 0; tr < trials; ++tr) {
        std::mt19937_64 rng(seed0 + uint64_t(tr));
        OrbitPoint pos;
        green[0] += 1.0;  // time 0 at the basepoint
        for (long t = 1; t <= T; ++t) {
            SampleElement x = mu.sample(rng);
            pos = x.act(pos);
            if (pos.last_zero() <= long(cap_bits) + 1) {
                BigUint gi = gray_index(pos);
                if (gi.fits_u64() && gi.to_u64() <= radius_cap) green[size_t(gi.to_u64())] += 1.0;
            }
        }
    }
    for (auto& g : green) g /= double(trials);

    std::mt19937_64 wrng(seed0 ^ 0x9e3779b97f4a7c15ull);
    double acc = 0;
    uint64_t next_radius = 1;
    for (uint64_t idx = 0; idx <= radius_cap; ++idx) {
        OrbitPoint x = from_gray_index(idx);
        double w = mu.bad_germ_weight(x, wrng, weight_samples);
        acc += green[size_t(idx)] * w;
        if (idx == next_radius || idx == radius_cap) {
            rep.radii.push_back(idx);
            rep.partial_sums.push_back(acc);
            next_radius *= 2;
        }
    }
    rep.total = acc;
    return rep;
}

namespace {

// Action signature on a fixed probe level; hash prefilter for ball dedup.
std::string action_signature(const Element& g, int depth) {
    std::string sig;
    for (uint64_t m = 0; m < (uint64_t(1) << depth); ++m) {
        Vertex v;
        for (int b = depth - 1; b >= 0; --b) v.push_back((m >> b) & 1 ? '1' : '0');
        sig += act_vertex(v, g);
    }
    return sig;
}

} // namespace

GrowthTable ball_growth(const Grig& G, int R) {
    if (R > 12) throw std::invalid_argument("ball_growth: radius cap is 12");
    const int probe_depth = 6;
    GrowthTable table;
    std::unordered_map<std::string, std::vector<size_t>> buckets;
    std::vector<Element> elements;

    auto try_insert = [&](Element g) -> bool {
        std::string sig = action_signature(g, probe_depth);
        auto& bucket = buckets[sig];
        for (size_t idx : bucket)
            if (equal_elements(elements[idx], g)) return false;
        bucket.push_back(elements.size());
        elements.push_back(std::move(g));
        return true;
    };

    Element id{&G, "", 0};
    try_insert(id);
    std::vector<Element> frontier{id};
    table.radii.push_back(0);
    table.ball_sizes.push_back(1);
    for (int r = 1; r <= R; ++r) {
        std::vector<Element> next;
        for (const Element& g : frontier) {
            for (char s : {'a', 'b', 'c', 'd'}) {
                Element h = multiply(g, Element{&G, std::string(1, s), 0});
                if (try_insert(h)) next.push_back(elements.back());
            }
        }
        frontier = std::move(next);
        table.radii.push_back(r);
        table.ball_sizes.push_back(elements.size());
    }
    for (size_t i = 2; i < table.ball_sizes.size(); ++i) {
        double num = std::log(std::log(double(table.ball_sizes[i]))) -
                     std::log(std::log(double(table.ball_sizes[i - 1])));
        double den = std::log(double(i)) - std::log(double(i - 1));
        table.loglog_slopes.push_back(num / den);
    }
    return table;
}

TailReport tail_report(const MixtureSampler& mu, long trials, uint64_t seed,
                       const std::vector<long>& n_grid) {
    TailReport rep;
    rep.trials = trials;
    rep.n_grid = n_grid;
    std::mt19937_64 rng(seed);
    for (long i = 0; i < trials; ++i) {
        SampleElement s = mu.sample(rng);
        rep.lengths.push_back(s.conlen.to_double());
    }
    std::sort(rep.lengths.begin(), rep.lengths.end());
    long N = trials;
    for (long n : n_grid) {
        // smallest r with #{len >= r}/N < 1/n
        double rho;
        long max_tail = (N + n - 1) / n - 1;  // largest count strictly below N/n
        if (max_tail >= N)
            rho = 0;
        else
            rho = rep.lengths[size_t(N - 1 - max_tail)] + 1;
        double phi = 0;
        for (double len : rep.lengths) {
            if (len > rho) break;
            phi += len;
        }
        phi /= double(N);
        rep.rho_n.push_back(rho);
        rep.phi_rho.push_back(phi);
        rep.R_n.push_back(double(n) * phi);
    }
    return rep;
}

} // namespace grig
