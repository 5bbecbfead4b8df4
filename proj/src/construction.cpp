#include "grig/construction.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace grig {

namespace {

int block_m(const OmegaString& om, int D, long k) {
    for (int m = 0; m + 3 <= D; ++m) {
        int d0 = om.digit(k * D + m), d1 = om.digit(k * D + m + 1), d2 = om.digit(k * D + m + 2);
        if (d0 == 2 && (d1 == 0 || d1 == 1) && d2 == 1) return m;
    }
    return -1;
}

long lcm_long(long a, long b) {
    return a / std::gcd(a, b) * b;
}

} // namespace

int FrReport::m_of_block(const OmegaString& om, long k) const {
    int m = block_m(om, D, k);
    if (m < 0) throw std::logic_error("FrReport: block without 201/211 substring");
    return m;
}

bool FrReport::in_I(const OmegaString& om, long pos) const {
    if (pos < 3) return false;
    // pos = kD + m_k + 3 determines k within one block boundary
    long k = (pos - 3) / D;
    if (k >= 0 && k * D + m_of_block(om, k) + 3 == pos) return true;
    return false;
}

FrReport check_frD(const OmegaString& om, int D) {
    if (D < 3) throw std::invalid_argument("Fr(D) needs D >= 3");
    FrReport rep;
    rep.D = D;
    long pre_blocks = ((long)om.pre.size() + D - 1) / D;
    long cycle = lcm_long((long)om.per.size(), D) / D;
    long nblocks = pre_blocks + 2 * cycle + 1;
    for (long k = 0; k < nblocks; ++k) {
        int m = block_m(om, D, k);
        if (m < 0) {
            rep.ok = false;
            rep.fail_block = k;
            return rep;
        }
        if (k >= pre_blocks && k < pre_blocks + cycle) rep.m_cycle.push_back(m);
    }
    rep.ok = true;
    return rep;
}

std::optional<FrNormalized> normalize_frD(const OmegaString& om, int D) {
    for (int s = 0; s <= D; ++s) {
        OmegaString cand = om.shifted(s);
        FrReport rep = check_frD(cand, D);
        if (rep.ok) {
            rep.shift = s;
            return FrNormalized{cand, rep};
        }
    }
    return std::nullopt;
}

std::vector<int> w_free_positions(const OmegaString& om, const FrReport& fr, long n, long k) {
    if (n % fr.D != 0 || k % fr.D != 0)
        throw std::invalid_argument("W_k^n needs D | n and D | k");
    std::vector<int> free;
    for (long i = 1; i <= k; ++i)
        if (fr.in_I(om, n + i)) free.push_back(int(i));
    return free;
}

std::vector<Vertex> build_Wk(const OmegaString& om, const FrReport& fr, long n, long k) {
    auto free = w_free_positions(om, fr, n, k);
    std::vector<Vertex> out;
    for (uint64_t bits = 0; bits < (uint64_t(1) << free.size()); ++bits) {
        Vertex u(size_t(k), '1');
        for (size_t t = 0; t < free.size(); ++t)
            if ((bits >> t) & 1) u[size_t(free[t] - 1)] = '0';
        out.push_back(std::move(u));
    }
    return out;
}

namespace {

struct VShape {
    long prefix;   // D - jbar leading 1s
    long n_for_w;  // j + D - jbar
    int m_tail;    // m_{l(j,k)}
    long total;    // k' = prefix + k + m_tail + 3
};

VShape v_shape(const OmegaString& om, const FrReport& fr, long j, long k) {
    if (k % fr.D != 0) throw std::invalid_argument("V_k^j needs D | k");
    long jbar = j % fr.D;
    VShape s;
    s.prefix = fr.D - jbar;
    s.n_for_w = j + s.prefix;
    long ell = (j + fr.D - jbar + k) / fr.D;
    s.m_tail = fr.m_of_block(om, ell);
    s.total = s.prefix + k + s.m_tail + 3;
    return s;
}

} // namespace

std::vector<long> v_free_positions(const OmegaString& om, const FrReport& fr, long j, long k) {
    VShape s = v_shape(om, fr, j, k);
    std::vector<long> out;
    for (int t : w_free_positions(om, fr, s.n_for_w, k)) out.push_back(s.prefix + t);
    return out;
}

Vertex v_string(const OmegaString& om, const FrReport& fr, long j, long k, uint64_t choice_bits) {
    VShape s = v_shape(om, fr, j, k);
    Vertex v(size_t(s.total), '1');
    v.back() = '0';
    auto free = v_free_positions(om, fr, j, k);
    for (size_t t = 0; t < free.size(); ++t)
        if ((choice_bits >> t) & 1) v[size_t(free[t] - 1)] = '0';
    return v;
}

std::vector<IndexVertex> build_Vk(const OmegaString& om, const FrReport& fr, long j, long k) {
    auto free = v_free_positions(om, fr, j, k);
    std::vector<IndexVertex> out;
    for (uint64_t bits = 0; bits < (uint64_t(1) << free.size()); ++bits)
        out.push_back(IndexVertex{v_string(om, fr, j, k, bits), j, k});
    return out;
}

Element conjugator_h(const Grig& G, long j, const Vertex& v, long i) {
    if (i < 1 || i > (long)v.size()) throw std::invalid_argument("conjugator_h: index out of range");
    if (v[size_t(i - 1)] == '1') return Element{&G, "", j};
    if (i < 3) throw std::invalid_argument("conjugator_h: 0-digit too shallow");
    if (G.digit(j + i - 3) != 2)
        throw std::invalid_argument("conjugator_h: digit three before the 0 is not 2");
    Vertex prefix = v.substr(0, size_t(i - 2));
    return iota(G, 'b', prefix, j);
}

Element conjugator_ladder(const Grig& G, long j, const Vertex& v) {
    Element acc{&G, "", j};
    for (long i = 1; i <= (long)v.size(); ++i) acc = multiply(acc, conjugator_h(G, j, v, i));
    return acc;
}

Element build_ckv_word(const Grig& G, long j, const Vertex& v) {
    Element ladder = conjugator_ladder(G, j, v);
    Element c{&G, "c", j};
    return multiply(multiply(inverse(ladder), c), ladder);
}

CPortrait build_ck_portrait(const Grig& G, long j, const Vertex& v) {
    CPortrait p;
    p.G = &G;
    p.j = j;
    p.v = v;
    p.sib.assign(v.size(), CPortrait::Sib::None);
    long kprime = (long)v.size();
    for (long t = 1; t <= kprime; ++t) {
        if (v[size_t(t - 1)] != '1') continue;           // 0-digits are on the path
        if (G.digit(j + t - 1) == 1) continue;           // killed direction: trivial sibling
        bool deeper_zero = (t + 1 <= kprime) && v[size_t(t)] == '0';
        p.sib[size_t(t - 1)] = deeper_zero ? CPortrait::Sib::BAB : CPortrait::Sib::A;
    }
    return p;
}

void CPortrait::act_tail(OrbitPoint& x, long pos) const {
    long kprime = (long)v.size();
    for (long t = 1; t <= kprime; ++t) {
        int digit = x.digit(pos + t - 1);
        int vd = v[size_t(t - 1)] == '1' ? 1 : 0;
        if (digit == vd) continue;  // still on the path
        if (vd == 0) return;        // 1-sibling of a path 0: trivial section
        switch (sib[size_t(t - 1)]) {
            case Sib::None: return;
            case Sib::A:
                x.toggle(pos + t);
                return;
            case Sib::BAB:
                apply_word_ray(*G, x, "bab", j + t, pos + t);
                return;
        }
    }
    // ray follows the whole of v: letter c acts below
    apply_letter_ray(*G, x, 'c', j + kprime, pos + kprime);
}

void CPortrait::act_vertex_tail(Vertex& w, size_t off) const {
    long kprime = (long)v.size();
    for (long t = 1; t <= kprime; ++t) {
        size_t idx = off + size_t(t) - 1;
        if (idx >= w.size()) return;  // vertex ends on the path: fixed
        int digit = w[idx] == '1' ? 1 : 0;
        int vd = v[size_t(t - 1)] == '1' ? 1 : 0;
        if (digit == vd) continue;
        if (vd == 0) return;
        const char* word = nullptr;
        switch (sib[size_t(t - 1)]) {
            case Sib::None: return;
            case Sib::A: word = "a"; break;
            case Sib::BAB: word = "bab"; break;
        }
        Element sec{G, word, j + t};
        Vertex tail = w.substr(idx + 1);
        tail = act_vertex(tail, sec);
        w = w.substr(0, idx + 1) + tail;
        return;
    }
    if (off + size_t(kprime) >= w.size()) return;
    Element sec{G, "c", j + kprime};
    Vertex tail = w.substr(off + size_t(kprime));
    tail = act_vertex(tail, sec);
    w = w.substr(0, off + size_t(kprime)) + tail;
}

Klein CPortrait::germ_tail(const OrbitPoint& x, long pos) const {
    long kprime = (long)v.size();
    for (long t = 1; t <= kprime; ++t) {
        int digit = x.digit(pos + t - 1);
        int vd = v[size_t(t - 1)] == '1' ? 1 : 0;
        if (digit == vd) continue;
        if (vd == 0) return Klein::Id;
        switch (sib[size_t(t - 1)]) {
            case Sib::None:
            case Sib::A:
                return Klein::Id;
            case Sib::BAB: {
                // germ of b.a.b at the remaining subray: b iff all-ones
                bool all_ones = x.last_zero() < pos + t;
                if (!all_ones) return Klein::Id;
                return G->letter_is_trivial('b', j + t) ? Klein::Id : Klein::B;
            }
        }
    }
    bool all_ones = x.last_zero() < pos + kprime;
    if (!all_ones) return Klein::Id;
    return G->letter_is_trivial('c', j + kprime) ? Klein::Id : Klein::C;
}

Element build_gjv_word(const Grig& G, long j, const Vertex& v) {
    Element ck = build_ckv_word(G, j, v);
    std::string ac = "a" + ck.word;
    std::string reduced = reduce_word(ac);
    auto syl = parse_syllables(reduced);
    if (!syl)
        throw std::runtime_error("build_gjv_word: a.c^v is not an alternating syllable word");
    return zeta_chain(G, j, *syl);
}

GjvFactor gjv_factor(const Grig& G, long j, const Vertex& v) {
    return GjvFactor{build_ck_portrait(G, j, v), false};
}

namespace {

// Parity of the level-j vertex prefix: section is a.c^v when the digit sum
// matches j mod 2, c^v.a otherwise (inverse swaps the two).
bool gjv_reversed(const GjvFactor& f, long zcount) {
    bool conj = (zcount % 2) != 0;
    return conj != f.inverted;
}

} // namespace

void GjvFactor::act_point(OrbitPoint& x) const {
    long j = ck.j;
    long zcount = 0;
    for (long z : x.zeros)
        if (z <= j) ++zcount;
    if (!gjv_reversed(*this, zcount)) {
        // a . c^v : flip the next digit, then the portrait
        x.toggle(j + 1);
        ck.act_tail(x, j + 1);
    } else {
        ck.act_tail(x, j + 1);
        x.toggle(j + 1);
    }
}

void GjvFactor::act_vertex(Vertex& w) const {
    long j = ck.j;
    if ((long)w.size() <= j) return;
    long zcount = std::count(w.begin(), w.begin() + j, '0');
    auto flip = [&](size_t idx) { w[idx] = w[idx] == '1' ? '0' : '1'; };
    if (!gjv_reversed(*this, zcount)) {
        flip(size_t(j));
        ck.act_vertex_tail(w, size_t(j));
    } else {
        ck.act_vertex_tail(w, size_t(j));
        flip(size_t(j));
    }
}

Klein GjvFactor::germ_letter(const OrbitPoint& x) const {
    long j = ck.j;
    long zcount = 0;
    for (long z : x.zeros)
        if (z <= j) ++zcount;
    if (!gjv_reversed(*this, zcount)) {
        OrbitPoint y = x;
        y.toggle(j + 1);
        return ck.germ_tail(y, j + 1);
    }
    return ck.germ_tail(x, j + 1);
}

bool fjn_modified(const OmegaString& om, long j, long n, long kn) {
    return j >= 1 && j <= n && j > n - kn && om.digit(j - 1) == 2;
}

std::vector<IndexVertex> fjn_index(const OmegaString& om, const FrReport& fr, long j, long n,
                                   long kn) {
    auto free = v_free_positions(om, fr, j, 2 * kn);
    long min_prefix = n - j + fr.D;
    std::vector<size_t> open;
    for (size_t t = 0; t < free.size(); ++t)
        if (free[t] > min_prefix) open.push_back(t);
    std::vector<IndexVertex> out;
    for (uint64_t bits = 0; bits < (uint64_t(1) << open.size()); ++bits) {
        uint64_t choice = 0;
        for (size_t t = 0; t < open.size(); ++t)
            if ((bits >> t) & 1) choice |= uint64_t(1) << open[t];
        out.push_back(IndexVertex{v_string(om, fr, j, 2 * kn, choice), j, 2 * kn});
    }
    return out;
}

IndexVertex sample_fjn_index(const OmegaString& om, const FrReport& fr, long j, long n, long kn,
                             std::mt19937_64& rng) {
    auto free = v_free_positions(om, fr, j, 2 * kn);
    long min_prefix = n - j + fr.D;
    uint64_t choice = 0;
    for (size_t t = 0; t < free.size(); ++t)
        if (free[t] > min_prefix && (rng() & 1)) choice |= uint64_t(1) << t;
    return IndexVertex{v_string(om, fr, j, 2 * kn, choice), j, 2 * kn};
}

BigUint fjn_cardinality(const OmegaString& om, const FrReport& fr, long j, long n, long kn) {
    auto free = v_free_positions(om, fr, j, 2 * kn);
    long min_prefix = n - j + fr.D;
    size_t open = 0;
    for (long p : free)
        if (p > min_prefix) ++open;
    return BigUint::pow2(open);
}

std::vector<OrbitPoint> expected_bad_locations(const Grig&, long j, const Vertex& v) {
    std::vector<OrbitPoint> out;
    for (uint64_t mask = 0; mask < (uint64_t(1) << (j + 1)); ++mask) {
        long ones = 0;
        OrbitPoint p;
        for (long i = 1; i <= j + 1; ++i) {
            bool one = (mask >> (i - 1)) & 1;
            if (one)
                ++ones;
            else
                p.zeros.push_back(i);
        }
        if ((j + 1 + ones) % 2 == 0) continue;
        for (long t = 2; t <= (long)v.size(); ++t)
            if (v[size_t(t - 1)] == '0') p.zeros.push_back(j + t);
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

BigUint gjv_length_bound(const OmegaString& om, long j, const Vertex& v) {
    // |a c^v| <= 2 + 2 sum |h_i|, |h_i| <= 2^{i}; worst-case syllable growth
    // through the chain.
    BigUint syllables(1);
    for (long i = 1; i <= (long)v.size(); ++i)
        if (v[size_t(i - 1)] == '0') syllables += BigUint::pow2(size_t(i));
    BigUint worst;
    for (char g : {'b', 'c', 'd'}) {
        BigUint len = chain_word_length(om, j, g);
        if (len > worst) worst = len;
    }
    return syllables * worst;
}

} // namespace grig
