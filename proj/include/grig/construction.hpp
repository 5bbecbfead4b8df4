#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "grig/bigint.hpp"
#include "grig/core.hpp"
#include "grig/orbit.hpp"
#include "grig/subst.hpp"

namespace grig {

// Frequency assumption: every D-block of omega contains 201 or 211.
struct FrReport {
    int D = 0;
    bool ok = false;
    long fail_block = -1;       // first bad block when !ok
    int shift = 0;              // digits dropped by normalization (0 if none)
    std::vector<int> m_cycle;   // m_k over one block cycle, for reporting

    // m_k: offset of the 201/211 substring inside block k.
    int m_of_block(const OmegaString& om, long k) const;
    // membership of a position in I = { kD + m_k + 3 }.
    bool in_I(const OmegaString& om, long pos) const;
};

FrReport check_frD(const OmegaString& om, int D);

struct FrNormalized {
    OmegaString omega;
    FrReport report;
};
// Try shifts 0..D until the assumption holds; nullopt if none works.
std::optional<FrNormalized> normalize_frD(const OmegaString& om, int D);

// W_k^n: depth-k vertices with digit 1 outside the free positions n+i in I.
std::vector<int> w_free_positions(const OmegaString& om, const FrReport& fr, long n, long k);
std::vector<Vertex> build_Wk(const OmegaString& om, const FrReport& fr, long n, long k);

struct IndexVertex {
    Vertex v;
    long j = 0;
    long k = 0;
};

// V_k^j = 1^{D-jbar} u 1^{m+2} 0 with u in W_k^{j+D-jbar}; every member ends
// in 0 and every 0 sits three digits past a 2 in omega.
std::vector<IndexVertex> build_Vk(const OmegaString& om, const FrReport& fr, long j, long k);
// Free (choice) positions inside the V-string, and the string for one choice.
std::vector<long> v_free_positions(const OmegaString& om, const FrReport& fr, long j, long k);
Vertex v_string(const OmegaString& om, const FrReport& fr, long j, long k, uint64_t choice_bits);

// h_i^v of the conjugation ladder: identity at 1-digits, a rigid-stabilizer
// commutator two levels up at 0-digits. Elements of the level-j group.
Element conjugator_h(const Grig& G, long j, const Vertex& v, long i);
Element conjugator_ladder(const Grig& G, long j, const Vertex& v);  // h_1 ... h_k'

// Conjugated generator c^v = ladder^{-1} . c . ladder, materialized.
Element build_ckv_word(const Grig& G, long j, const Vertex& v);

// Portrait form of c^v, directed along v: per depth t the section at the
// 0-sibling is id, a, or b.a.b, and the section at v is the letter c.
// Cross-validated against the word form at small k by the test suite.
struct CPortrait {
    const Grig* G = nullptr;
    long j = 0;
    Vertex v;
    enum class Sib : uint8_t { None, A, BAB };
    std::vector<Sib> sib;  // sib[t-1] describes depth t, valid when v[t-1]=='1'

    void act_tail(OrbitPoint& x, long pos) const;      // apply to subray at pos
    void act_vertex_tail(Vertex& w, size_t off) const; // apply to w[off..]
    Klein germ_tail(const OrbitPoint& x, long pos) const;
};
CPortrait build_ck_portrait(const Grig& G, long j, const Vertex& v);

// Modified generator: chain image of a.c^v. Stabilizes level j; sections
// there are a.c^v or c^v.a by vertex parity.
Element build_gjv_word(const Grig& G, long j, const Vertex& v);

struct GjvFactor {
    CPortrait ck;
    bool inverted = false;

    void act_point(OrbitPoint& x) const;
    void act_vertex(Vertex& w) const;
    Klein germ_letter(const OrbitPoint& x) const;
    GjvFactor inverse() const {
        GjvFactor f = *this;
        f.inverted = !f.inverted;
        return f;
    }
};
GjvFactor gjv_factor(const Grig& G, long j, const Vertex& v);

// Index set of F_{j,n}: members of V_{2kn}^j sharing a 1-prefix of length
// n-j+D with the basepoint ray.
std::vector<IndexVertex> fjn_index(const OmegaString& om, const FrReport& fr, long j, long n,
                                   long kn);
IndexVertex sample_fjn_index(const OmegaString& om, const FrReport& fr, long j, long n, long kn,
                             std::mt19937_64& rng);
BigUint fjn_cardinality(const OmegaString& om, const FrReport& fr, long j, long n, long kn);
bool fjn_modified(const OmegaString& om, long j, long n, long kn);

// Expected bad-germ rays of a modified generator: prefixes of length j+1
// with odd total parity, followed by the shifted index vertex.
std::vector<OrbitPoint> expected_bad_locations(const Grig& G, long j, const Vertex& v);

// Upper bound on the word length of the chain image of a.c^v, used as the
// construction-length proxy for sampled elements.
BigUint gjv_length_bound(const OmegaString& om, long j, const Vertex& v);

} // namespace grig
