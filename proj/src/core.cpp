#include "grig/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace grig {

OmegaString OmegaString::parse(std::string_view text) {
    auto bar = text.find('|');
    OmegaString om;
    if (bar == std::string_view::npos) {
        om.per = std::string(text);
    } else {
        om.pre = std::string(text.substr(0, bar));
        om.per = std::string(text.substr(bar + 1));
    }
    if (om.per.empty()) throw std::invalid_argument("omega: empty period in '" + std::string(text) + "'");
    for (char c : om.pre + om.per)
        if (c < '0' || c > '2') throw std::invalid_argument("omega: digit out of {0,1,2}");
    return om;
}

OmegaString OmegaString::shifted(long k) const {
    OmegaString out;
    if (k <= (long)pre.size()) {
        out.pre = pre.substr(size_t(k));
        out.per = per;
    } else {
        long r = (k - (long)pre.size()) % (long)per.size();
        out.pre.clear();
        out.per = per.substr(size_t(r)) + per.substr(0, size_t(r));
    }
    return out;
}

bool OmegaString::torsion_type() const {
    bool seen[3] = {false, false, false};
    for (char c : per) seen[c - '0'] = true;
    return seen[0] && seen[1] && seen[2];
}

bool OmegaString::eventually_constant() const {
    for (char c : per)
        if (c != per[0]) return false;
    return true;
}

void reduced_append(std::string& w, char letter) {
    if (!letter) return;
    if (w.empty()) {
        w.push_back(letter);
        return;
    }
    char top = w.back();
    if (top == 'a' && letter == 'a') {
        w.pop_back();
        return;
    }
    if (top != 'a' && letter != 'a') {
        w.pop_back();
        Klein k = klein_mul(klein_of(top), klein_of(letter));
        if (k != Klein::Id) reduced_append(w, klein_char(k));
        return;
    }
    w.push_back(letter);
}

std::string reduce_word(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (char c : raw) {
        if (!is_generator_letter(c)) throw std::invalid_argument("word letter out of {a,b,c,d}");
        reduced_append(out, c);
    }
    return out;
}

bool Grig::letter_is_trivial(char gamma, long level) const {
    for (size_t i = size_t(level); i < om_.pre.size(); ++i)
        if (killed_letter(om_.pre[i] - '0') != gamma) return false;
    for (char c : om_.per)
        if (killed_letter(c - '0') != gamma) return false;
    return true;
}

bool Grig::memo_lookup(const std::string& key, bool& out) const {
    std::lock_guard<std::mutex> lk(mx_);
    auto it = memo_.find(key);
    if (it == memo_.end()) return false;
    out = it->second;
    return true;
}

void Grig::memo_store(const std::string& key, bool value) const {
    std::lock_guard<std::mutex> lk(mx_);
    memo_.emplace(key, value);
}

OneStep one_step(const Element& g) {
    std::string w[2];
    bool swap = false;
    long n = g.level;
    for (char c : g.word) {
        if (c == 'a') {
            swap = !swap;
            continue;
        }
        char img = g.G->image(n, c);   // 'a' or 0
        // child 0 gets the image, child 1 the same letter one level down
        char sec0 = img, sec1 = c;
        if (!swap) {
            reduced_append(w[0], sec0);
            reduced_append(w[1], sec1);
        } else {
            reduced_append(w[0], sec1);
            reduced_append(w[1], sec0);
        }
    }
    return OneStep{Element{g.G, std::move(w[0]), n + 1}, Element{g.G, std::move(w[1]), n + 1}, swap};
}

Element section(const Element& g, const Vertex& v) {
    Element cur = g;
    for (char d : v) {
        OneStep s = one_step(cur);
        cur = (d == '0') ? std::move(s.left) : std::move(s.right);
    }
    return cur;
}

Vertex act_vertex(const Vertex& v, const Element& g) {
    Vertex out;
    out.reserve(v.size());
    Element cur = g;
    for (char d : v) {
        if (cur.trivial_word()) {
            out.push_back(d);
            continue;
        }
        OneStep s = one_step(cur);
        out.push_back(s.swap ? (d == '0' ? '1' : '0') : d);
        cur = (d == '0') ? std::move(s.left) : std::move(s.right);
    }
    return out;
}

Element multiply(const Element& g, const Element& h) {
    if (g.G != h.G) throw std::invalid_argument("multiply: distinct omega contexts");
    if (g.level != h.level) throw std::invalid_argument("multiply: level mismatch");
    std::string w = g.word;
    for (char c : h.word) reduced_append(w, c);
    return Element{g.G, std::move(w), g.level};
}

Element inverse(const Element& g) {
    std::string w(g.word.rbegin(), g.word.rend());
    return Element{g.G, std::move(w), g.level};
}

Element power(const Element& g, long k) {
    Element acc{g.G, "", g.level};
    for (long i = 0; i < k; ++i) acc = multiply(acc, g);
    return acc;
}

namespace {

constexpr int kIdentityDepthGuard = 64;

bool is_identity_rec(const Element& g, int depth) {
    if (g.word.empty()) return true;
    if (g.word.size() == 1) {
        if (g.word[0] == 'a') return false;
        return g.G->letter_is_trivial(g.word[0], g.level);
    }
    if (depth > kIdentityDepthGuard)
        throw std::runtime_error("is_identity: depth guard exceeded (reduction/contraction bug?)");

    std::string key = std::to_string(g.G->level_key(g.level)) + ":" + g.word;
    bool cached;
    if (g.G->memo_lookup(key, cached)) return cached;

    OneStep s = one_step(g);
    bool res = false;
    if (!s.swap) {
        // contraction: children strictly shorter for |w| >= 2
        if (s.left.word.size() >= g.word.size() && s.right.word.size() >= g.word.size() &&
            g.word.size() > 2)
            throw std::runtime_error("is_identity: contraction violated on " + g.str());
        res = is_identity_rec(s.left, depth + 1) && is_identity_rec(s.right, depth + 1);
    }
    g.G->memo_store(key, res);
    return res;
}

} // namespace

bool is_identity(const Element& g) {
    return is_identity_rec(g, 0);
}

namespace {

// Pair bisimulation with "assume equal on revisit"; standard automaton
// equivalence over the contracting recursion.
struct PairCtx {
    std::unordered_map<std::string, bool> seen;
};

bool same_action_rec(const Element& g, const Element& h, PairCtx& ctx, int depth) {
    if (g.word.empty() && h.word.empty()) return true;
    if (g.word.empty()) return is_identity(h);
    if (h.word.empty()) return is_identity(g);
    if (g.G == h.G && g.level == h.level) return equal_elements(g, h);
    if (depth > 2 * kIdentityDepthGuard)
        throw std::runtime_error("same_action: depth guard exceeded");

    std::string key = std::to_string(g.G->level_key(g.level)) + ":" + g.word + "|" +
                      std::to_string(h.G->level_key(h.level)) + ":" + h.word;
    auto it = ctx.seen.find(key);
    if (it != ctx.seen.end()) return it->second;
    ctx.seen.emplace(key, true);  // coinductive assumption

    OneStep a = one_step(g), b = one_step(h);
    bool res = (a.swap == b.swap) && same_action_rec(a.left, b.left, ctx, depth + 1) &&
               same_action_rec(a.right, b.right, ctx, depth + 1);
    ctx.seen[key] = res;
    return res;
}

} // namespace

bool same_action(const Element& g, const Element& h) {
    PairCtx ctx;
    return same_action_rec(g, h, ctx, 0);
}

std::optional<long> element_order(const Element& g, long cap) {
    if (cap < 1) throw std::invalid_argument("element_order: cap must be >= 1");
    Element acc{g.G, "", g.level};
    for (long k = 1; k <= cap; ++k) {
        acc = multiply(acc, g);
        if (is_identity(acc)) return k;
    }
    return std::nullopt;
}

namespace {

// Substitution a -> a y a, letters fixed; maps level m words to level m-1.
std::string sigma_step(const std::string& w, char y) {
    std::string out;
    out.reserve(w.size() * 2);
    for (char c : w) {
        if (c == 'a') {
            reduced_append(out, 'a');
            reduced_append(out, y);
            reduced_append(out, 'a');
        } else {
            reduced_append(out, c);
        }
    }
    return out;
}

char pick_y(const Grig& G, long m_abs) {
    // y for the substitution from level m_abs to m_abs-1
    int prev = G.digit(m_abs - 1), cur = G.digit(m_abs);
    if (prev != cur) return killed_letter(prev);
    for (char y : {'b', 'c', 'd'})
        if (digit_image(prev, y) == 'a') return y;
    return 'b';  // unreachable
}

char pick_y_base(const Grig& G, long base) {
    for (char y : {'b', 'c', 'd'})
        if (G.image(base, y) == 'a') return y;
    throw std::logic_error("no letter maps to a");
}

} // namespace

Element iota(const Grig& G, char gamma, const Vertex& v, long ambient_level) {
    long n = (long)v.size();
    if (gamma == 'a' || !is_generator_letter(gamma))
        throw std::invalid_argument("iota: commutator letter must be in {b,c,d}");
    if (n == 0) {
        std::string w;
        for (char c : {gamma, 'a', gamma, 'a'}) reduced_append(w, c);
        return Element{&G, std::move(w), ambient_level};
    }
    if (G.image(ambient_level + n - 1, gamma) != 0)
        throw std::invalid_argument("iota: digit at depth(v)-1 does not kill the letter");

    std::string w;
    for (char c : {gamma, 'a', gamma, 'a'}) reduced_append(w, c);
    for (long j = 0; j < n; ++j) {
        long m = n - j;  // substitution maps level m to m-1 (relative to ambient)
        char y = (m >= 2) ? pick_y(G, ambient_level + m - 1) : pick_y_base(G, ambient_level);
        w = sigma_step(w, y);
        if (v[size_t(m - 1)] == '0') {
            std::string conj = "a";
            for (char c : w) reduced_append(conj, c);
            reduced_append(conj, 'a');
            w = std::move(conj);
        }
    }
    return Element{&G, std::move(w), ambient_level};
}

std::vector<RayPortraitEntry> portrait_along_ray(const Element& g, const Vertex& v) {
    if (act_vertex(v, g) != v)
        throw std::invalid_argument("portrait_along_ray: vertex not fixed by element");
    std::vector<RayPortraitEntry> out;
    Element cur = g;
    Vertex prefix;
    for (char d : v) {
        OneStep s = one_step(cur);
        Vertex sib = prefix;
        sib.push_back(d == '0' ? '1' : '0');
        out.push_back({sib, d == '0' ? s.right : s.left});
        cur = (d == '0') ? std::move(s.left) : std::move(s.right);
        prefix.push_back(d);
    }
    out.push_back({v, cur});
    return out;
}

} // namespace grig
