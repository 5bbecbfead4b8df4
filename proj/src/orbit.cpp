#include "grig/orbit.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace grig {

int OrbitPoint::digit(long pos) const {
    return std::binary_search(zeros.begin(), zeros.end(), pos) ? 0 : 1;
}

void OrbitPoint::toggle(long pos) {
    if (pos < 1) throw std::invalid_argument("OrbitPoint position must be >= 1");
    auto it = std::lower_bound(zeros.begin(), zeros.end(), pos);
    if (it != zeros.end() && *it == pos)
        zeros.erase(it);
    else
        zeros.insert(it, pos);
}

std::string OrbitPoint::str() const {
    if (zeros.empty()) return "o";
    std::string s = "z:";
    for (size_t i = 0; i < zeros.size(); ++i) {
        if (i) s.push_back(',');
        s += std::to_string(zeros[i]);
    }
    return s;
}

OrbitPoint OrbitPoint::parse(const std::string& text) {
    OrbitPoint p;
    if (text == "o" || text.empty()) return p;
    if (text.rfind("z:", 0) != 0) throw std::invalid_argument("OrbitPoint: expected 'o' or 'z:...'");
    std::stringstream ss(text.substr(2));
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) p.zeros.push_back(std::stol(tok));
    std::sort(p.zeros.begin(), p.zeros.end());
    return p;
}

OrbitPoint OrbitPoint::shifted(long n) const {
    OrbitPoint out;
    for (long z : zeros)
        if (z > n) out.zeros.push_back(z - n);
    return out;
}

void apply_letter_ray(const Grig& G, OrbitPoint& x, char letter, long level, long pos) {
    if (letter == 'a') {
        x.toggle(pos);
        return;
    }
    // A directed letter descends along 1s and turns at the first 0.
    auto it = std::lower_bound(x.zeros.begin(), x.zeros.end(), pos);
    if (it == x.zeros.end()) return;  // all-ones tail is fixed
    long z = *it;
    char img = G.image(level + (z - pos), letter);
    if (img == 'a') x.toggle(z + 1);
}

void apply_word_ray(const Grig& G, OrbitPoint& x, std::string_view word, long level, long pos) {
    for (char c : word) apply_letter_ray(G, x, c, level, pos);
}

OrbitPoint act_ray(const OrbitPoint& x, const Element& g) {
    OrbitPoint out = x;
    apply_word_ray(*g.G, out, g.word, g.level, 1);
    return out;
}

BigUint gray_index(const OrbitPoint& x) {
    BigUint out;
    if (x.zeros.empty()) return out;
    // Gray bit i = parity of the number of zeros at positions >= i.
    long m = x.zeros.back();
    size_t k = x.zeros.size();  // zeros with position >= current i
    long lo = 1;
    for (size_t idx = 0; idx < x.zeros.size(); ++idx) {
        long hi = x.zeros[idx];
        if (k % 2 == 1)
            for (long i = lo; i <= hi; ++i) out.set_bit(size_t(i - 1));
        lo = hi + 1;
        --k;
    }
    (void)m;
    return out;
}

OrbitPoint from_gray_index(const BigUint& n) {
    OrbitPoint p;
    size_t bl = n.bit_length();
    for (size_t i = 1; i <= bl; ++i) {
        bool bi = n.bit(i - 1);
        bool bnext = (i < bl) ? n.bit(i) : false;
        if (bi != bnext) p.zeros.push_back(long(i));
    }
    return p;
}

OrbitPoint from_gray_index(uint64_t n) {
    return from_gray_index(BigUint(n));
}

BigUint schreier_distance(const OrbitPoint& x, const OrbitPoint& y) {
    return BigUint::absdiff(gray_index(x), gray_index(y));
}

std::vector<NeighborEdge> neighbors(const Grig& G, const OrbitPoint& x) {
    std::vector<NeighborEdge> out;
    for (char s : {'a', 'b', 'c', 'd'}) {
        OrbitPoint y = x;
        apply_letter_ray(G, y, s, 0, 1);
        out.push_back({s, std::move(y)});
    }
    return out;
}

std::optional<uint64_t> bfs_distance(const Grig& G, const OrbitPoint& x, const OrbitPoint& y,
                                     uint64_t radius_cap) {
    if (x == y) return 0;
    std::map<std::vector<long>, uint64_t> dist;
    std::deque<OrbitPoint> queue{x};
    dist[x.zeros] = 0;
    while (!queue.empty()) {
        OrbitPoint cur = queue.front();
        queue.pop_front();
        uint64_t d = dist[cur.zeros];
        if (d >= radius_cap) continue;
        for (auto& e : neighbors(G, cur)) {
            if (dist.count(e.to.zeros)) continue;
            if (e.to == y) return d + 1;
            dist[e.to.zeros] = d + 1;
            queue.push_back(e.to);
        }
    }
    return std::nullopt;
}

bool displacement_check(const Element& g, const OrbitPoint& x, long n) {
    Vertex prefix;
    for (long i = 1; i <= n; ++i) prefix.push_back(x.digit(i) ? '1' : '0');
    Element sec = section(g, prefix);
    BigUint lhs = schreier_distance(x, act_ray(x, g));
    BigUint rhs = BigUint(uint64_t(sec.word.size()) + 1) << size_t(n);
    return lhs <= rhs;
}

void export_graph_dot(const Grig& G, uint64_t radius, std::ostream& os) {
    os << "graph schreier {\n  rankdir=LR;\n";
    for (uint64_t i = 0; i <= radius; ++i) {
        OrbitPoint p = from_gray_index(i);
        os << "  n" << i << " [label=\"" << i << " " << p.str() << "\"];\n";
    }
    for (uint64_t i = 0; i <= radius; ++i) {
        OrbitPoint p = from_gray_index(i);
        for (auto& e : neighbors(G, p)) {
            BigUint gi = gray_index(e.to);
            if (!gi.fits_u64()) continue;
            uint64_t j = gi.to_u64();
            if (j > radius || j < i) continue;  // one direction per undirected edge
            if (j == i) {
                os << "  n" << i << " -- n" << i << " [label=\"" << e.generator << "\"];\n";
            } else {
                os << "  n" << i << " -- n" << j << " [label=\"" << e.generator << "\"];\n";
            }
        }
    }
    os << "}\n";
}

} // namespace grig
