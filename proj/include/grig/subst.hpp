#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "grig/bigint.hpp"
#include "grig/core.hpp"
#include "grig/orbit.hpp"

namespace grig {

// Word over the syllable alphabet {ab, ac, ad}; syl[i] is the non-a letter.
// reversed = true means the concatenated form is (gamma a)(gamma a)... ,
// the letterwise inverse of a plain syllable word.
struct SyllableWord {
    std::vector<char> syl;
    bool reversed = false;

    std::string to_word() const;
    size_t a_count() const { return syl.size(); }
};

// Parse a reduced alternating word with equal a/letter counts into syllable
// form; fails for other shapes.
std::optional<SyllableWord> parse_syllables(const std::string& word);

// ---- substitutions -------------------------------------------------------

// zeta_i maps level n+1 syllable words to level n ones.
SyllableWord apply_zeta_digit(int digit, const SyllableWord& w);

// zeta_{omega_0} ... zeta_{omega_{j-1}} applied to a seed at level j,
// materialized as an element of the level-0 group.
Element zeta_chain(const Grig& G, long j, const SyllableWord& seed);
SyllableWord zeta_chain_syllables(const Grig& G, long j, const SyllableWord& seed);

// First Grigorchuk group only (omega = |012): the self-similar substitutions
// in the usual notation, acting on level-0 words.
SyllableWord classical_zeta(const SyllableWord& w);
std::string classical_sigma(const std::string& word);

// Letter identification between usual first-group notation and the
// level-indexed notation, per level mod 3.
std::string classical_to_general(const std::string& word, long level);
std::string general_to_classical(const std::string& word, long level);

// ---- count vectors and matrices ------------------------------------------

template <class T>
struct Vec3 {
    std::array<T, 3> v{};
    T& operator[](int i) { return v[size_t(i)]; }
    const T& operator[](int i) const { return v[size_t(i)]; }
};

template <class T>
struct Mat3 {
    // m[r][c]
    std::array<std::array<T, 3>, 3> m{};
    static Mat3 identity() {
        Mat3 r;
        for (int i = 0; i < 3; ++i) r.m[size_t(i)][size_t(i)] = T(1);
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T acc{};
                for (int k = 0; k < 3; ++k) acc += m[size_t(i)][size_t(k)] * o.m[size_t(k)][size_t(j)];
                r.m[size_t(i)][size_t(j)] = acc;
            }
        return r;
    }
    Vec3<T> operator*(const Vec3<T>& x) const {
        Vec3<T> r;
        for (int i = 0; i < 3; ++i) {
            T acc{};
            for (int k = 0; k < 3; ++k) acc += m[size_t(i)][size_t(k)] * x[k];
            r[i] = acc;
        }
        return r;
    }
};

using MatB = Mat3<BigUint>;
using VecB = Vec3<BigUint>;
using MatD = Mat3<double>;

int syllable_index(char gamma);          // b->0, c->1, d->2
VecB count_vector(const SyllableWord& w);

MatB substitution_matrix(int digit);     // M_0, M_1, M_2
MatB matrix_M();                         // classical zeta matrix
MatB matrix_A();                         // classical sigma matrix
MatD to_double(const MatB& m);

BigUint length_Ln(const OmegaString& om, long n);
// Exact reduced length of the chain image of a unit seed (the substitution
// image of a syllable word needs no reduction).
BigUint chain_word_length(const OmegaString& om, long j, char seed_gamma);

// Perron eigenvalue by power iteration with Newton polish; requires some
// power of the matrix to be strictly positive.
double spectral_radius(const MatD& m);

struct ExponentReport {
    double lambda = 0;
    double alpha = 0;
    long q = 0;
    bool preperiod_ignored = false;
};
ExponentReport growth_exponent(const OmegaString& om);

// Positive root of x^3 - x^2 - 2x - 4 (length growth of the classical zeta).
double lambda0();

// ---- cube independent sequences ------------------------------------------

// g_n of the substitution construction: chain applied to a b-seed, or to a
// c-seed when the digit before level n is 2.
char gn_seed_letter(const Grig& G, long n);
Element build_gn(const Grig& G, long n);

// First-group sequence adapted to the b-germ subgroup:
// h_{2k-1} = (zeta^2 sigma)^{k-1} zeta(ac), h_{2k} = h_{2k-1}^2.
Element build_hn(const Grig& G, long n);

// Closed-form action of g_n without materializing the word. Valid because
// the chain stabilizes every level above n (all intermediate images have an
// even number of a's) and the level-n sections are seed or a.seed.a by the
// parity of the vertex.
struct GnFactor {
    const Grig* G = nullptr;
    long n = 0;
    char seed = 'b';
    bool inverted = false;

    void act_point(OrbitPoint& x) const;
    void act_vertex(Vertex& v) const;
    Klein germ_letter(const OrbitPoint& x) const;
    GnFactor inverse() const {
        GnFactor f = *this;
        f.inverted = !f.inverted;
        return f;
    }
};
GnFactor gn_factor(const Grig& G, long n);

// Closed-form action of h_n (first group) via the 3-level recursion
// h_{2k-1} = (id on vertices with x1+x2+x3 even at depth 3, h_{2k-3} below
// the odd ones), base h_1 = abab.
struct HnFactor {
    const Grig* G = nullptr;
    long n = 0;
    bool inverted = false;

    void act_point(OrbitPoint& x) const;
    Klein germ_letter(const OrbitPoint& x) const;
    HnFactor inverse() const {
        HnFactor f = *this;
        f.inverted = !f.inverted;
        return f;
    }
};

// ---- cube independence ----------------------------------------------------

struct CubeActor {
    std::function<Vertex(const Vertex&)> on_vertex;
    std::string name;
};

struct CubeWitness {
    std::vector<int> eps_a, eps_b;
    Vertex x;
};

struct CubeResult {
    bool independent = true;
    std::optional<CubeWitness> witness;
    size_t vertices_tested = 0;
};

// Injectivity of (eps_1..eps_n) -> x . g_n^{eps_n} ... g_1^{eps_1} over a
// vertex set at test_depth (exhaustive for depth <= 12, sampled beyond).
CubeResult check_cube_independence(const std::vector<CubeActor>& gs, const std::vector<int>& ks,
                                   int test_depth, uint64_t seed = 1);

CubeActor actor_of(const Element& g);
CubeActor actor_of(const GnFactor& f);

// F_n = { g_n^{eps_n} ... g_1^{eps_1} }; checks distinctness via the orbit
// injectivity at test depth and fails with a witness on collision.
std::vector<Element> quasi_cubic_set(const std::vector<Element>& gs, int test_depth);

} // namespace grig
