#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "grig/bigint.hpp"
#include "grig/core.hpp"

namespace grig {

// Ray cofinal with 1^infty, stored as the sorted positions (1-based) of its
// 0 digits. Empty set is the basepoint o = 1^infty.
struct OrbitPoint {
    std::vector<long> zeros;

    static constexpr long kDefaultCapacity = 1 << 10;

    bool is_basepoint() const { return zeros.empty(); }
    long last_zero() const { return zeros.empty() ? 0 : zeros.back(); }
    int digit(long pos) const;             // 0 or 1 at 1-based position
    void toggle(long pos);
    std::string str() const;               // "o" or "z:3,5,8"
    static OrbitPoint parse(const std::string& text);
    OrbitPoint shifted(long n) const;      // drop first n digits

    bool operator==(const OrbitPoint& o) const { return zeros == o.zeros; }
    bool operator<(const OrbitPoint& o) const { return zeros < o.zeros; }
};

// Apply one generator letter of the level-`level` group to the subray of x
// starting at 1-based position `pos`.
void apply_letter_ray(const Grig& G, OrbitPoint& x, char letter, long level, long pos);
// Apply a word at `level` to the subray starting at `pos`.
void apply_word_ray(const Grig& G, OrbitPoint& x, std::string_view word, long level, long pos);

OrbitPoint act_ray(const OrbitPoint& x, const Element& g);

// Gray index: deepest flipped digit is the most significant Gray bit.
BigUint gray_index(const OrbitPoint& x);
OrbitPoint from_gray_index(const BigUint& n);
OrbitPoint from_gray_index(uint64_t n);

BigUint schreier_distance(const OrbitPoint& x, const OrbitPoint& y);

struct NeighborEdge {
    char generator;
    OrbitPoint to;
};
std::vector<NeighborEdge> neighbors(const Grig& G, const OrbitPoint& x);

std::optional<uint64_t> bfs_distance(const Grig& G, const OrbitPoint& x, const OrbitPoint& y,
                                     uint64_t radius_cap);

// Checks d(x, x.g) <= 2^n (|g_{x1..xn}| + 1).
bool displacement_check(const Element& g, const OrbitPoint& x, long n);

// Ball of the given Gray radius as a DOT graph with generator-labeled edges.
void export_graph_dot(const Grig& G, uint64_t radius, std::ostream& os);

} // namespace grig
