#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace grig {

// Germ / Klein four-group value. id=0, b=1, c=2, d=3; product is XOR.
enum class Klein : uint8_t { Id = 0, B = 1, C = 2, D = 3 };

inline Klein klein_mul(Klein x, Klein y) {
    return Klein(uint8_t(x) ^ uint8_t(y));
}

inline Klein klein_of(char letter) {
    switch (letter) {
        case 'b': return Klein::B;
        case 'c': return Klein::C;
        case 'd': return Klein::D;
        default: return Klein::Id;
    }
}

inline char klein_char(Klein k) {
    switch (k) {
        case Klein::B: return 'b';
        case Klein::C: return 'c';
        case Klein::D: return 'd';
        default: return 'i';
    }
}

inline bool is_generator_letter(char c) {
    return c == 'a' || c == 'b' || c == 'c' || c == 'd';
}

// Defining string over {0,1,2}: finite preperiod + nonempty period.
// Serialized as "pre|per", e.g. "01|201" or "|012".
struct OmegaString {
    std::string pre;
    std::string per;

    static OmegaString parse(std::string_view text);
    std::string str() const { return pre + "|" + per; }

    int digit(long n) const {
        if (n < (long)pre.size()) return pre[size_t(n)] - '0';
        return per[size_t((n - (long)pre.size()) % (long)per.size())] - '0';
    }

    OmegaString shifted(long k) const;

    // Canonical representative of a level (levels past the preperiod repeat).
    long level_key(long level) const {
        long p = (long)pre.size();
        if (level < p) return level;
        return p + (level - p) % (long)per.size();
    }

    // Period contains all three digits <=> each letter appears infinitely often.
    bool torsion_type() const;
    // Eventually constant strings give virtually abelian groups.
    bool eventually_constant() const;
};

// Digit i in {0,1,2} kills d, c, b respectively; the other two letters map to a.
inline char killed_letter(int digit) {
    switch (digit) {
        case 0: return 'd';
        case 1: return 'c';
        default: return 'b';
    }
}

// Image of letter under the homomorphism named by digit: 'a' or 0 (identity).
inline char digit_image(int digit, char letter) {
    return killed_letter(digit) == letter ? 0 : 'a';
}

// Word reduction: a^2 = 1 and Klein products among {b,c,d}.
std::string reduce_word(std::string_view raw);
// Append one letter to an already reduced word, keeping it reduced.
void reduced_append(std::string& w, char letter);

// Group context for one omega string. Owns the identity-test memo cache
// (grow-only, idempotent inserts, guarded by a mutex).
class Grig {
public:
    explicit Grig(OmegaString om) : om_(std::move(om)) {
        if (om_.per.empty()) throw std::invalid_argument("omega period must be nonempty");
    }

    const OmegaString& omega() const { return om_; }
    int digit(long n) const { return om_.digit(n); }
    char kills(long n) const { return killed_letter(om_.digit(n)); }
    char image(long n, char letter) const { return digit_image(om_.digit(n), letter); }
    bool torsion_type() const { return om_.torsion_type(); }
    long level_key(long level) const { return om_.level_key(level); }

    // Letter gamma at this level is the identity automorphism iff every digit
    // from the level on kills it (possible only for degenerate omega).
    bool letter_is_trivial(char gamma, long level) const;

    bool memo_lookup(const std::string& key, bool& out) const;
    void memo_store(const std::string& key, bool value) const;

private:
    OmegaString om_;
    mutable std::unordered_map<std::string, bool> memo_;
    mutable std::mutex mx_;
};

// Group element: reduced word over {a,b,c,d} interpreted at a level.
// The letter gamma at level n stands for the generator gamma of the
// level-n group; the digit at the current level selects its recursion image.
struct Element {
    const Grig* G = nullptr;
    std::string word;   // reduced
    long level = 0;

    bool trivial_word() const { return word.empty(); }
    std::string str() const { return (word.empty() ? std::string("id") : word) + "@" + std::to_string(level); }
};

inline Element make_element(const Grig& G, std::string_view raw, long level = 0) {
    return Element{&G, reduce_word(raw), level};
}

struct OneStep {
    Element left;
    Element right;
    bool swap = false;  // root transposition present
};

using Vertex = std::string;  // binary string, "" is the root

OneStep one_step(const Element& g);
Element section(const Element& g, const Vertex& v);
Vertex act_vertex(const Vertex& v, const Element& g);
Element multiply(const Element& g, const Element& h);
Element inverse(const Element& g);
Element power(const Element& g, long k);

// True iff g acts trivially on the whole tree. Decided by the contracting
// recursion with memoization; guarded against runaway recursion.
bool is_identity(const Element& g);
inline bool equal_elements(const Element& g, const Element& h) {
    return is_identity(multiply(g, inverse(h)));
}

// Exact equality of the induced tree automorphisms, allowing different
// levels. Bisimulation over one_step with coinductive pair cache.
bool same_action(const Element& g, const Element& h);

// Least k <= cap with g^k = id.
std::optional<long> element_order(const Element& g, long cap);

// Rigid-stabilizer embedding: the element acting as [gamma, a] in the
// subtree rooted at v and trivially elsewhere. Requires that the digit
// at depth(v)-1 kills gamma. Resulting reduced length <= 2^{depth+2}.
Element iota(const Grig& G, char gamma, const Vertex& v, long ambient_level = 0);

struct RayPortraitEntry {
    Vertex at;
    Element section;
};

// Sections at the siblings along a fixed vertex path, plus the section at v.
std::vector<RayPortraitEntry> portrait_along_ray(const Element& g, const Vertex& v);

} // namespace grig
