#include "grig/germs.hpp"

#include <algorithm>
#include <stdexcept>

namespace grig {

Klein germ_at(const Element& g, const OrbitPoint& x, long depth_cap) {
    const Grig& G = *g.G;
    long period = (long)G.omega().per.size();
    if (depth_cap < 0)
        depth_cap = 3 * ((long)g.word.size() + period) + x.last_zero() + 32;

    Element cur = g;
    long consumed = 0;  // digits of x already descended
    while (true) {
        if (cur.word.empty()) return Klein::Id;
        if (cur.word.size() == 1) {
            char c = cur.word[0];
            if (c == 'a') return Klein::Id;  // finitary
            if (consumed >= x.last_zero())
                return G.letter_is_trivial(c, cur.level) ? Klein::Id : klein_of(c);
        }
        if (consumed >= depth_cap)
            throw std::runtime_error("germ_at: depth cap exceeded for " + g.str());
        OneStep s = one_step(cur);
        ++consumed;
        cur = x.digit(consumed) == 0 ? std::move(s.left) : std::move(s.right);
    }
}

namespace {

struct PortraitScan {
    long depth_bound = 64;
    bool saw_bad = false;       // section in {c,d} with nontrivial action
    bool saw_undecided = false;
    long max_level = 0;
    std::vector<OrbitPoint> bad_rays;
    bool collect_rays = false;

    // zeros: positions of 0-digits in the current vertex prefix
    void walk(const Element& g, long depth, std::vector<long>& zeros) {
        if (g.word.empty()) return;
        if (g.word.size() == 1) {
            char c = g.word[0];
            if (c == 'a') return;  // finitary below
            if (g.G->letter_is_trivial(c, g.level)) return;
            if (c == 'c' || c == 'd') {
                saw_bad = true;
                if (collect_rays) {
                    OrbitPoint p;
                    p.zeros = zeros;
                    bad_rays.push_back(std::move(p));
                }
            }
            max_level = std::max(max_level, depth);
            return;
        }
        if (depth >= depth_bound) {
            saw_undecided = true;
            return;
        }
        OneStep s = one_step(g);
        zeros.push_back(depth + 1);
        walk(s.left, depth + 1, zeros);
        zeros.pop_back();
        walk(s.right, depth + 1, zeros);
    }
};

} // namespace

HbResult in_Hb(const Element& g, long depth_bound) {
    HbResult res;
    res.degenerate_omega = !g.G->torsion_type();
    PortraitScan scan;
    scan.depth_bound = depth_bound;
    std::vector<long> zeros;
    scan.walk(g, 0, zeros);
    if (scan.saw_bad) {
        res.verdict = HbVerdict::No;
        res.decided_level = scan.max_level;
    } else if (scan.saw_undecided) {
        res.verdict = HbVerdict::Undecided;
    } else {
        res.verdict = HbVerdict::Yes;
        res.decided_level = scan.max_level;
    }
    return res;
}

std::vector<OrbitPoint> bad_germ_support(const Element& g, long depth_bound) {
    PortraitScan scan;
    scan.depth_bound = depth_bound;
    scan.collect_rays = true;
    std::vector<long> zeros;
    scan.walk(g, 0, zeros);
    if (scan.saw_undecided)
        throw std::runtime_error("bad_germ_support: depth bound too small to classify " + g.str());
    std::sort(scan.bad_rays.begin(), scan.bad_rays.end());
    return scan.bad_rays;
}

} // namespace grig
