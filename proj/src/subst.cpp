#include "grig/subst.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "grig/germs.hpp"

namespace grig {

std::string SyllableWord::to_word() const {
    std::string out;
    out.reserve(syl.size() * 2);
    for (char g : syl) {
        if (reversed) {
            out.push_back(g);
            out.push_back('a');
        } else {
            out.push_back('a');
            out.push_back(g);
        }
    }
    return out;
}

std::optional<SyllableWord> parse_syllables(const std::string& word) {
    SyllableWord w;
    if (word.empty()) return w;
    if (word.size() % 2 != 0) return std::nullopt;
    w.reversed = (word[0] != 'a');
    for (size_t i = 0; i < word.size(); i += 2) {
        char x = word[i], y = word[i + 1];
        if (w.reversed) std::swap(x, y);
        if (x != 'a' || y == 'a') return std::nullopt;
        w.syl.push_back(w.reversed ? word[i] : y);
    }
    return w;
}

namespace {

// Images of the syllable letters b, c, d under each substitution.
const std::vector<char>* zeta_table(int digit, char gamma) {
    static const std::vector<char> z0b{'b', 'b'}, z0c{'c', 'c'}, z0d{'b', 'd', 'c'};
    static const std::vector<char> z1b{'b', 'b'}, z1c{'d', 'c', 'b'}, z1d{'d', 'd'};
    static const std::vector<char> z2b{'c', 'b', 'd'}, z2c{'c', 'c'}, z2d{'d', 'd'};
    switch (digit) {
        case 0: return gamma == 'b' ? &z0b : gamma == 'c' ? &z0c : &z0d;
        case 1: return gamma == 'b' ? &z1b : gamma == 'c' ? &z1c : &z1d;
        default: return gamma == 'b' ? &z2b : gamma == 'c' ? &z2c : &z2d;
    }
}

const std::vector<char>* classical_zeta_table(char gamma) {
    static const std::vector<char> zb{'b', 'd', 'c'}, zc{'b', 'b'}, zd{'c', 'c'};
    return gamma == 'b' ? &zb : gamma == 'c' ? &zc : &zd;
}

const std::vector<char>* classical_sigma_table(char gamma) {
    static const std::vector<char> sb{'c', 'd'}, sc{'c', 'b'}, sd{'c', 'c'};
    return gamma == 'b' ? &sb : gamma == 'c' ? &sc : &sd;
}

SyllableWord apply_table(const SyllableWord& w, const std::vector<char>* (*table)(char)) {
    SyllableWord out;
    out.reversed = w.reversed;
    if (!w.reversed) {
        for (char g : w.syl) {
            const auto* img = table(g);
            out.syl.insert(out.syl.end(), img->begin(), img->end());
        }
    } else {
        for (auto it = w.syl.rbegin(); it != w.syl.rend(); ++it) {
            const auto* img = table(*it);
            out.syl.insert(out.syl.end(), img->begin(), img->end());
        }
        std::reverse(out.syl.begin(), out.syl.end());
    }
    return out;
}

} // namespace

SyllableWord apply_zeta_digit(int digit, const SyllableWord& w) {
    switch (digit) {
        case 0: return apply_table(w, [](char g) { return zeta_table(0, g); });
        case 1: return apply_table(w, [](char g) { return zeta_table(1, g); });
        default: return apply_table(w, [](char g) { return zeta_table(2, g); });
    }
}

SyllableWord zeta_chain_syllables(const Grig& G, long j, const SyllableWord& seed) {
    SyllableWord w = seed;
    for (long m = j - 1; m >= 0; --m) w = apply_zeta_digit(G.digit(m), w);
    return w;
}

Element zeta_chain(const Grig& G, long j, const SyllableWord& seed) {
    return Element{&G, zeta_chain_syllables(G, j, seed).to_word(), 0};
}

SyllableWord classical_zeta(const SyllableWord& w) {
    return apply_table(w, classical_zeta_table);
}

std::string classical_sigma(const std::string& word) {
    std::string out;
    for (char c : word) {
        switch (c) {
            case 'a': reduced_append(out, 'a'); reduced_append(out, 'c'); reduced_append(out, 'a'); break;
            case 'b': reduced_append(out, 'd'); break;
            case 'c': reduced_append(out, 'b'); break;
            case 'd': reduced_append(out, 'c'); break;
            default: throw std::invalid_argument("classical_sigma: bad letter");
        }
    }
    return out;
}

namespace {

char rotate_letter(char c, int times) {
    // one application: b -> c -> d -> b
    static const std::map<char, char> rot{{'b', 'c'}, {'c', 'd'}, {'d', 'b'}};
    for (int i = 0; i < times; ++i)
        if (c != 'a') c = rot.at(c);
    return c;
}

} // namespace

std::string general_to_classical(const std::string& word, long level) {
    int r = int(level % 3);
    std::string out;
    for (char c : word) out.push_back(rotate_letter(c, r));
    return out;
}

std::string classical_to_general(const std::string& word, long level) {
    int r = int((3 - level % 3) % 3);
    std::string out;
    for (char c : word) out.push_back(rotate_letter(c, r));
    return out;
}

int syllable_index(char gamma) {
    switch (gamma) {
        case 'b': return 0;
        case 'c': return 1;
        case 'd': return 2;
    }
    throw std::invalid_argument("syllable letter out of {b,c,d}");
}

VecB count_vector(const SyllableWord& w) {
    VecB v;
    for (char g : w.syl) v[syllable_index(g)] += BigUint(1);
    return v;
}

namespace {

MatB mat_from_tables(const std::vector<char>* (*table)(char)) {
    MatB m;
    for (int col = 0; col < 3; ++col) {
        char gamma = "bcd"[col];
        for (char img : *table(gamma)) m.m[size_t(syllable_index(img))][size_t(col)] += BigUint(1);
    }
    return m;
}

} // namespace

MatB substitution_matrix(int digit) {
    switch (digit) {
        case 0: return mat_from_tables([](char g) { return zeta_table(0, g); });
        case 1: return mat_from_tables([](char g) { return zeta_table(1, g); });
        default: return mat_from_tables([](char g) { return zeta_table(2, g); });
    }
}

MatB matrix_M() { return mat_from_tables(classical_zeta_table); }
MatB matrix_A() { return mat_from_tables(classical_sigma_table); }

MatD to_double(const MatB& m) {
    MatD d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) d.m[size_t(i)][size_t(j)] = m.m[size_t(i)][size_t(j)].to_double();
    return d;
}

BigUint length_Ln(const OmegaString& om, long n) {
    VecB v;
    for (int i = 0; i < 3; ++i) v[i] = BigUint(1);
    for (long m = n - 1; m >= 0; --m) v = substitution_matrix(om.digit(m)) * v;
    return v[0] + v[1] + v[2];
}

BigUint chain_word_length(const OmegaString& om, long j, char seed_gamma) {
    VecB v;
    v[syllable_index(seed_gamma)] = BigUint(1);
    for (long m = j - 1; m >= 0; --m) v = substitution_matrix(om.digit(m)) * v;
    return (v[0] + v[1] + v[2]) * BigUint(2);
}

namespace {

double charpoly_eval(const MatD& m, double x, double& dpdx) {
    double tr = m.m[0][0] + m.m[1][1] + m.m[2][2];
    double minors = m.m[0][0] * m.m[1][1] - m.m[0][1] * m.m[1][0] +
                    m.m[0][0] * m.m[2][2] - m.m[0][2] * m.m[2][0] +
                    m.m[1][1] * m.m[2][2] - m.m[1][2] * m.m[2][1];
    double det = m.m[0][0] * (m.m[1][1] * m.m[2][2] - m.m[1][2] * m.m[2][1]) -
                 m.m[0][1] * (m.m[1][0] * m.m[2][2] - m.m[1][2] * m.m[2][0]) +
                 m.m[0][2] * (m.m[1][0] * m.m[2][1] - m.m[1][1] * m.m[2][0]);
    dpdx = 3 * x * x - 2 * tr * x + minors;
    return x * x * x - tr * x * x + minors * x - det;
}

} // namespace

double spectral_radius(const MatD& m) {
    MatD p = m * m * m;  // primitivity check on a power
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (!(p.m[size_t(i)][size_t(j)] > 0))
                throw std::domain_error("spectral_radius: matrix power not strictly positive");

    double v[3] = {1, 1, 1};
    double lambda = 0;
    for (int it = 0; it < 100000; ++it) {
        double w[3] = {0, 0, 0};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k) w[i] += m.m[size_t(i)][size_t(k)] * v[k];
        double norm = std::max({w[0], w[1], w[2]});
        double prev = lambda;
        lambda = norm;
        for (int i = 0; i < 3; ++i) v[i] = w[i] / norm;
        if (it > 3 && std::abs(lambda - prev) <= 1e-12 * lambda) break;
    }
    // Newton polish on the characteristic polynomial.
    for (int it = 0; it < 60; ++it) {
        double dp;
        double pval = charpoly_eval(m, lambda, dp);
        if (dp == 0) break;
        double next = lambda - pval / dp;
        if (std::abs(next - lambda) <= 1e-15 * std::abs(lambda)) { lambda = next; break; }
        lambda = next;
    }
    return lambda;
}

ExponentReport growth_exponent(const OmegaString& om) {
    ExponentReport rep;
    rep.preperiod_ignored = !om.pre.empty();
    rep.q = (long)om.per.size();
    if (!om.torsion_type())
        throw std::domain_error("growth_exponent: period must contain all three digits");
    MatB prod = MatB::identity();
    for (char c : om.per) prod = prod * substitution_matrix(c - '0');
    rep.lambda = spectral_radius(to_double(prod));
    rep.alpha = double(rep.q) * std::log(2.0) / std::log(rep.lambda);
    return rep;
}

double lambda0() {
    double x = 2.5;
    for (int i = 0; i < 100; ++i) {
        double p = x * x * x - x * x - 2 * x - 4;
        double dp = 3 * x * x - 2 * x - 2;
        double next = x - p / dp;
        if (std::abs(next - x) < 1e-15) return next;
        x = next;
    }
    return x;
}

char gn_seed_letter(const Grig& G, long n) {
    if (n < 1) throw std::invalid_argument("g_n needs n >= 1");
    return G.digit(n - 1) == 2 ? 'c' : 'b';
}

Element build_gn(const Grig& G, long n) {
    SyllableWord seed;
    seed.syl.push_back(gn_seed_letter(G, n));
    return zeta_chain(G, n, seed);
}

Element build_hn(const Grig& G, long n) {
    if (G.omega().str() != "|012")
        throw std::invalid_argument("h_n sequence is defined on the first group (|012)");
    if (n < 1) throw std::invalid_argument("h_n needs n >= 1");
    long k = (n + 1) / 2;
    SyllableWord w;
    w.syl.push_back('c');
    w = classical_zeta(w);  // zeta(ac) = abab
    for (long i = 1; i < k; ++i) {
        w = apply_table(w, classical_sigma_table);
        w = classical_zeta(classical_zeta(w));
    }
    Element h = Element{&G, w.to_word(), 0};
    if (n % 2 == 0) h = multiply(h, h);
    return h;
}

GnFactor gn_factor(const Grig& G, long n) {
    return GnFactor{&G, n, gn_seed_letter(G, n), false};
}

namespace {

// Parity of the vertex prefix decides between seed and a.seed.a sections.
std::string gn_section_word(const GnFactor& f, bool conj) {
    std::string w;
    bool rev = conj != f.inverted;  // inverse of (a g) is (g a)
    if (rev) {
        w.push_back(f.seed);
        w.push_back('a');
    } else {
        w.push_back('a');
        w.push_back(f.seed);
    }
    return w;
}

} // namespace

void GnFactor::act_point(OrbitPoint& x) const {
    long zcount = 0;
    for (long z : x.zeros)
        if (z <= n) ++zcount;
    bool conj = (zcount % 2) != 0;
    apply_word_ray(*G, x, gn_section_word(*this, conj), n, n + 1);
}

void GnFactor::act_vertex(Vertex& v) const {
    if ((long)v.size() <= n) return;
    long zcount = std::count(v.begin(), v.begin() + n, '0');
    bool conj = (zcount % 2) != 0;
    Element sec{G, gn_section_word(*this, conj), n};
    Vertex tail = v.substr(size_t(n));
    tail = grig::act_vertex(tail, sec);
    v = v.substr(0, size_t(n)) + tail;
}

Klein GnFactor::germ_letter(const OrbitPoint& x) const {
    long zcount = 0;
    bool zero_at_next = false;
    long deeper = 0;
    for (long z : x.zeros) {
        if (z <= n) ++zcount;
        else {
            if (z == n + 1) zero_at_next = true;
            ++deeper;
        }
    }
    bool conj = (zcount % 2) != 0;
    bool rev = conj != inverted;
    if (G->letter_is_trivial(seed, n)) return Klein::Id;
    if (!rev) {
        // section a.gamma: germ lands at the 0-child then the all-ones ray
        return (deeper == 1 && zero_at_next) ? klein_of(seed) : Klein::Id;
    }
    return deeper == 0 ? klein_of(seed) : Klein::Id;
}

void HnFactor::act_point(OrbitPoint& x) const {
    if (n % 2 == 0) {
        HnFactor half{G, n - 1, inverted};
        half.act_point(x);
        half.act_point(x);
        return;
    }
    long k = (n + 1) / 2;
    long pos = 1, level = 0;
    while (k > 1) {
        int s = x.digit(pos) + x.digit(pos + 1) + x.digit(pos + 2);
        if (s % 2 == 0) return;  // identity section below
        pos += 3;
        level += 3;
        --k;
    }
    apply_word_ray(*G, x, inverted ? "baba" : "abab", level, pos);
}

Klein HnFactor::germ_letter(const OrbitPoint& x) const {
    if (n % 2 == 0) {
        HnFactor half{G, n - 1, inverted};
        OrbitPoint mid = x;
        Klein k1 = half.germ_letter(x);
        half.act_point(mid);
        return klein_mul(k1, half.germ_letter(mid));
    }
    long k = (n + 1) / 2;
    long pos = 1, level = 0;
    while (k > 1) {
        int s = x.digit(pos) + x.digit(pos + 1) + x.digit(pos + 2);
        if (s % 2 == 0) return Klein::Id;
        pos += 3;
        level += 3;
        --k;
    }
    Element base{G, inverted ? "baba" : "abab", level};
    return germ_at(base, x.shifted(pos - 1));
}

CubeActor actor_of(const Element& g) {
    Element copy = g;
    return CubeActor{[copy](const Vertex& v) { return act_vertex(v, copy); }, copy.str()};
}

CubeActor actor_of(const GnFactor& f) {
    return CubeActor{[f](const Vertex& v) {
                         Vertex w = v;
                         f.act_vertex(w);
                         return w;
                     },
                     "g_" + std::to_string(f.n)};
}

namespace {

void cube_rec(const std::vector<CubeActor>& gs, const std::vector<int>& ks, size_t i,
              const Vertex& v, std::vector<int>& eps, std::map<Vertex, std::vector<int>>& seen,
              CubeResult& res) {
    if (!res.independent) return;
    if (i == 0) {
        auto it = seen.find(v);
        if (it != seen.end()) {
            res.independent = false;
            res.witness = CubeWitness{it->second, eps, v};
            return;
        }
        seen.emplace(v, eps);
        return;
    }
    size_t idx = i - 1;
    Vertex cur = v;
    for (int e = 0; e <= ks[idx]; ++e) {
        eps[idx] = e;
        cube_rec(gs, ks, idx, cur, eps, seen, res);
        if (!res.independent) return;
        if (e < ks[idx]) cur = gs[idx].on_vertex(cur);
    }
    eps[idx] = 0;
}

} // namespace

CubeResult check_cube_independence(const std::vector<CubeActor>& gs, const std::vector<int>& ks,
                                   int test_depth, uint64_t seed) {
    if (ks.size() != gs.size()) throw std::invalid_argument("cube: ks size mismatch");
    CubeResult res;
    std::vector<Vertex> xs;
    if (test_depth <= 12) {
        for (uint64_t m = 0; m < (uint64_t(1) << test_depth); ++m) {
            Vertex v;
            for (int b = test_depth - 1; b >= 0; --b) v.push_back((m >> b) & 1 ? '1' : '0');
            xs.push_back(std::move(v));
        }
    } else {
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 4096; ++t) {
            Vertex v;
            for (int b = 0; b < test_depth; ++b) v.push_back(rng() & 1 ? '1' : '0');
            xs.push_back(std::move(v));
        }
    }
    res.vertices_tested = xs.size();
    for (const Vertex& x : xs) {
        std::map<Vertex, std::vector<int>> seen;
        std::vector<int> eps(gs.size(), 0);
        // apply g_n first: recurse from the last index down to 1
        cube_rec(gs, ks, gs.size(), x, eps, seen, res);
        if (!res.independent) return res;
    }
    return res;
}

std::vector<Element> quasi_cubic_set(const std::vector<Element>& gs, int test_depth) {
    size_t n = gs.size();
    std::vector<Element> out;
    Vertex x(size_t(test_depth), '1');
    std::map<Vertex, uint64_t> seen;
    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        Element prod{gs[0].G, "", gs[0].level};
        for (size_t i = n; i-- > 0;)
            if ((mask >> i) & 1) prod = multiply(prod, gs[i]);
        Vertex img = act_vertex(x, prod);
        auto it = seen.find(img);
        if (it != seen.end())
            throw std::runtime_error("quasi_cubic_set: collision between masks " +
                                     std::to_string(it->second) + " and " + std::to_string(mask));
        seen.emplace(std::move(img), mask);
        out.push_back(std::move(prod));
    }
    return out;
}

} // namespace grig
