#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "grig/construction.hpp"
#include "grig/core.hpp"
#include "grig/germs.hpp"
#include "grig/orbit.hpp"
#include "grig/subst.hpp"

using namespace grig;

namespace {

Grig& shifted_group() {
    static Grig G(OmegaString::parse("|201"));
    return G;
}

OrbitPoint ray_of_vertex(const Vertex& v) {
    OrbitPoint p;
    for (size_t t = 0; t < v.size(); ++t)
        if (v[t] == '0') p.zeros.push_back(long(t + 1));
    return p;
}

} // namespace

TEST_CASE("frequency assumption checks") {
    FrReport fr201 = check_frD(OmegaString::parse("|201"), 3);
    CHECK(fr201.ok);
    for (long k = 0; k < 6; ++k) CHECK(fr201.m_of_block(OmegaString::parse("|201"), k) == 0);
    // I = {3, 6, 9, ...}
    for (long pos = 0; pos <= 24; ++pos)
        CHECK(fr201.in_I(OmegaString::parse("|201"), pos) == (pos >= 3 && pos % 3 == 0));

    FrReport fr012 = check_frD(OmegaString::parse("|012"), 3);
    CHECK_FALSE(fr012.ok);
    CHECK(fr012.fail_block == 0);
    auto norm = normalize_frD(OmegaString::parse("|012"), 3);
    REQUIRE(norm.has_value());
    CHECK(norm->report.shift == 2);
    CHECK(norm->omega.str() == "|201");

    FrReport fr0 = check_frD(OmegaString::parse("|0"), 3);
    CHECK_FALSE(fr0.ok);
    CHECK(fr0.fail_block == 0);
    CHECK_FALSE(normalize_frD(OmegaString::parse("|0"), 3).has_value());

    CHECK(check_frD(OmegaString::parse("|201211"), 3).ok);
    CHECK(check_frD(OmegaString::parse("|201211"), 6).ok);
    CHECK_THROWS(check_frD(OmegaString::parse("|201"), 2));
}

TEST_CASE("W sets") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    auto free = w_free_positions(G.omega(), fr, 0, 6);
    CHECK(free == std::vector<int>{3, 6});
    auto W = build_Wk(G.omega(), fr, 0, 6);
    CHECK(W.size() == 4);
    std::set<Vertex> ws(W.begin(), W.end());
    CHECK(ws == std::set<Vertex>{"110110", "110111", "111110", "111111"});
    for (long n : {3L, 6L})
        CHECK(build_Wk(G.omega(), fr, n, 6).size() == 4);
    CHECK_THROWS(build_Wk(G.omega(), fr, 1, 6));
    CHECK_THROWS(build_Wk(G.omega(), fr, 0, 4));
}

TEST_CASE("V sets") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    for (long j : {0L, 1L, 2L, 4L, 5L}) {
        for (long k : {3L, 6L, 9L}) {
            auto V = build_Vk(G.omega(), fr, j, k);
            CHECK(V.size() == (size_t(1) << (k / 3)));
            for (auto& iv : V) {
                REQUIRE(!iv.v.empty());
                CHECK(iv.v.back() == '0');
                // every zero sits three digits after a 2 in omega
                for (size_t t = 0; t < iv.v.size(); ++t)
                    if (iv.v[t] == '0') CHECK(G.digit(j + long(t + 1) - 3) == 2);
            }
        }
    }
    // mixed 201/211 blocks exercise the m_k bookkeeping
    Grig Gm(OmegaString::parse("|201211"));
    FrReport frm = check_frD(Gm.omega(), 3);
    for (long j : {0L, 1L, 3L}) {
        auto V = build_Vk(Gm.omega(), frm, j, 6);
        CHECK(V.size() == 4);
        for (auto& iv : V)
            for (size_t t = 0; t < iv.v.size(); ++t)
                if (iv.v[t] == '0') CHECK(Gm.digit(j + long(t + 1) - 3) == 2);
    }
}

TEST_CASE("conjugator ladder") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    OrbitPoint o;
    // all-ones indices give trivial conjugators
    CHECK(conjugator_h(G, 0, "111111111110", 1).word.empty());
    for (long k : {3L, 6L}) {
        for (auto& iv : build_Vk(G.omega(), fr, 0, k)) {
            for (long i = 1; i <= (long)iv.v.size(); ++i) {
                Element h = conjugator_h(G, 0, iv.v, i);
                if (iv.v[size_t(i - 1)] == '1') {
                    CHECK(h.word.empty());
                } else {
                    CHECK(BigUint(uint64_t(h.word.size())) <= BigUint::pow2(size_t(i)));
                }
            }
            // cumulative action moves the basepoint ray to v 1^infty
            Element ladder = conjugator_ladder(G, 0, iv.v);
            CHECK(act_ray(o, ladder) == ray_of_vertex(iv.v));
        }
    }
    // and at a level with nonzero residue
    for (auto& iv : build_Vk(G.omega(), fr, 1, 3)) {
        Element ladder = conjugator_ladder(G, 1, iv.v);
        CHECK(act_ray(o, ladder) == ray_of_vertex(iv.v));
    }
}

TEST_CASE("conjugated generator portrait") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    // degenerate all-ones vertex: empty conjugation gives the letter itself
    Element plain = build_ckv_word(G, 0, "111");
    CHECK(equal_elements(plain, Element{&G, "c", 0}));

    OrbitPoint o;
    for (auto& iv : build_Vk(G.omega(), fr, 0, 3)) {
        Element ck = build_ckv_word(G, 0, iv.v);
        CHECK(act_vertex(iv.v, ck) == iv.v);
        auto port = portrait_along_ray(ck, iv.v);
        CPortrait cp = build_ck_portrait(G, 0, iv.v);
        long kprime = (long)iv.v.size();
        for (long t = 1; t <= kprime; ++t) {
            const Element& sec = port[size_t(t - 1)].section;
            std::string expect;
            if (iv.v[size_t(t - 1)] == '1') {
                switch (cp.sib[size_t(t - 1)]) {
                    case CPortrait::Sib::None: expect = ""; break;
                    case CPortrait::Sib::A: expect = "a"; break;
                    case CPortrait::Sib::BAB: expect = "bab"; break;
                }
            }
            CHECK(equal_elements(sec, Element{&G, expect, t}));
            // nontrivial siblings appear exactly where omega allows them
            bool listed = iv.v[size_t(t - 1)] == '1' && G.digit(t - 1) != 1;
            CHECK((expect.empty()) == !listed);
        }
        CHECK(equal_elements(port.back().section, Element{&G, "c", kprime}));
        // germ values: c along v, trivial at the basepoint
        CHECK(germ_at(ck, ray_of_vertex(iv.v)) == Klein::C);
        CHECK(germ_at(ck, o) == Klein::Id);
    }
}

TEST_CASE("portrait object against the word form") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    std::mt19937_64 rng(1);
    for (long j : {0L, 1L}) {
        for (auto& iv : build_Vk(G.omega(), fr, j, 6)) {
            Element ck = build_ckv_word(G, j, iv.v);
            CPortrait cp = build_ck_portrait(G, j, iv.v);
            for (int t = 0; t < 150; ++t) {
                OrbitPoint x;
                for (long p = 1; p <= 20; ++p)
                    if (rng() % 3 == 0) x.zeros.push_back(p);
                OrbitPoint byword = act_ray(x, Element{&G, ck.word, j});
                OrbitPoint byport = x;
                cp.act_tail(byport, 1);
                CHECK(byword == byport);
                CHECK(germ_at(Element{&G, ck.word, j}, x) == cp.germ_tail(x, 1));
            }
        }
    }
}

TEST_CASE("modified generators") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    long j = 4, n = 6, kn = 3;
    CHECK(fjn_modified(G.omega(), j, n, kn));
    CHECK_FALSE(fjn_modified(G.omega(), 2, n, kn));  // omega_1 != 2
    CHECK_FALSE(fjn_modified(G.omega(), 1, n, kn));  // outside (n-kn, n]

    auto idx = fjn_index(G.omega(), fr, j, n, kn);
    CHECK(BigUint(uint64_t(idx.size())) == fjn_cardinality(G.omega(), fr, j, n, kn));
    // (2 kn - (n - j + jbar)) / D free bits
    CHECK(idx.size() == 2);

    Element gj = build_gn(G, j);
    std::mt19937_64 rng(2);
    for (auto& iv : idx) {
        // prefix constraint against the basepoint ray
        CHECK(iv.v.substr(0, size_t(n - j + 3)) == std::string(size_t(n - j + 3), '1'));
        Element gjv = build_gjv_word(G, j, iv.v);
        // same action as g_j on the finite level n + D + 1
        for (int t = 0; t < 300; ++t) {
            Vertex v;
            for (long b = 0; b < n + 3 + 1; ++b) v.push_back(rng() & 1 ? '1' : '0');
            CHECK(act_vertex(v, gjv) == act_vertex(v, gj));
        }
        // stabilizes level j
        for (int t = 0; t < 50; ++t) {
            Vertex v;
            for (long b = 0; b < j; ++b) v.push_back(rng() & 1 ? '1' : '0');
            CHECK(act_vertex(v, gjv) == v);
        }
        // factor form against the word
        GjvFactor f = gjv_factor(G, j, iv.v);
        for (int t = 0; t < 100; ++t) {
            OrbitPoint x;
            for (long p = 1; p <= 25; ++p)
                if (rng() % 3 == 0) x.zeros.push_back(p);
            OrbitPoint byword = act_ray(x, gjv);
            OrbitPoint byfac = x;
            f.act_point(byfac);
            CHECK(byword == byfac);
            CHECK(germ_at(gjv, x) == f.germ_letter(x));
            OrbitPoint invw = act_ray(x, inverse(gjv));
            OrbitPoint invf = x;
            f.inverse().act_point(invf);
            CHECK(invw == invf);
        }
        // bad germ locations: 2^j rays with the odd-parity prefix constraint
        auto bad = bad_germ_support(gjv, 64);
        CHECK(bad.size() == (size_t(1) << j));
        auto expect = expected_bad_locations(G, j, iv.v);
        CHECK(bad == expect);
        for (auto& x : bad) {
            long ones = 0;
            for (long p = 1; p <= j + 1; ++p) ones += x.digit(p);
            CHECK((j + 1 + ones) % 2 == 1);
        }
        // length bound dominates the materialized word
        CHECK(BigUint(uint64_t(gjv.word.size())) <= gjv_length_bound(G.omega(), j, iv.v));
    }
}

TEST_CASE("displacement of modified generators") {
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    long j = 4, n = 6, kn = 3;
    auto idx = fjn_index(G.omega(), fr, j, n, kn);
    std::mt19937_64 rng(3);
    for (auto& iv : idx) {
        GjvFactor f = gjv_factor(G, j, iv.v);
        OrbitPoint sv = ray_of_vertex(iv.v).shifted(1);
        for (int t = 0; t < 200; ++t) {
            OrbitPoint x;
            for (long p = 1; p <= 22; ++p)
                if (rng() % 3 == 0) x.zeros.push_back(p);
            OrbitPoint y = x;
            f.act_point(y);
            BigUint d = schreier_distance(x, y);
            // common prefix of the shifted ray with the shifted index vertex
            long match = 0;
            OrbitPoint sx = x.shifted(j + 1);
            while (match < (long)iv.v.size() - 1 && sx.digit(match + 1) == (sv.digit(match + 1)))
                ++match;
            if (match >= n - j + 3)
                CHECK(d <= BigUint::pow2(size_t(j + match + 4)));
            else
                CHECK(d <= BigUint::pow2(size_t(j + 2)));
        }
    }
}

TEST_CASE("upsilon tail bound per level") {
    // the uniform measure on F_{j,n} concentrates displacement near 2^j
    Grig& G = shifted_group();
    FrReport fr = check_frD(G.omega(), 3);
    long j = 4, n = 6, kn = 3;
    auto idx = fjn_index(G.omega(), fr, j, n, kn);
    OrbitPoint o;
    for (long ell = n; ell <= j + 2 * kn + 2 * 3 + 4; ++ell) {
        long over = 0;
        for (auto& iv : idx) {
            GjvFactor f = gjv_factor(G, j, iv.v);
            OrbitPoint y = o;
            f.act_point(y);
            if (schreier_distance(o, y) >= BigUint::pow2(size_t(ell))) ++over;
        }
        double frac = double(over) / double(idx.size());
        double bound = std::pow(2.0, -double(ell - n) / 3.0 + 2);
        CHECK(frac <= bound);
    }
}
