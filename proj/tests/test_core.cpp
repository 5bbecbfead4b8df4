#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "grig/core.hpp"
#include "grig/orbit.hpp"
#include "grig/subst.hpp"

using namespace grig;

namespace {

Grig& first_group() {
    static Grig G(OmegaString::parse("|012"));
    return G;
}

std::string random_reduced(std::mt19937_64& rng, int len) {
    std::string raw;
    for (int i = 0; i < len; ++i) raw.push_back("abcd"[rng() % 4]);
    return reduce_word(raw);
}

} // namespace

TEST_CASE("word reduction") {
    CHECK(reduce_word("aa") == "");
    CHECK(reduce_word("bc") == "d");
    CHECK(reduce_word("cd") == "b");
    CHECK(reduce_word("bd") == "c");
    CHECK(reduce_word("abba") == "");
    CHECK(reduce_word("abab") == "abab");
    CHECK(reduce_word("dbc") == "");  // db = c, cc = id
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        std::string w = random_reduced(rng, 30);
        CHECK(reduce_word(w) == w);  // idempotent
        for (size_t i = 1; i < w.size(); ++i) {
            bool both_klein = w[i - 1] != 'a' && w[i] != 'a';
            bool both_a = w[i - 1] == 'a' && w[i] == 'a';
            CHECK_FALSE(both_klein);
            CHECK_FALSE(both_a);
        }
    }
    CHECK_THROWS(reduce_word("abx"));
}

TEST_CASE("klein group") {
    CHECK(klein_mul(Klein::B, Klein::C) == Klein::D);
    CHECK(klein_mul(Klein::C, Klein::D) == Klein::B);
    CHECK(klein_mul(Klein::B, Klein::D) == Klein::C);
    for (Klein k : {Klein::Id, Klein::B, Klein::C, Klein::D})
        CHECK(klein_mul(k, k) == Klein::Id);
}

TEST_CASE("omega strings") {
    OmegaString om = OmegaString::parse("01|201");
    CHECK(om.digit(0) == 0);
    CHECK(om.digit(1) == 1);
    CHECK(om.digit(2) == 2);
    CHECK(om.digit(5) == 2);  // period wraps
    OmegaString p = OmegaString::parse("|012");
    CHECK(p.digit(4) == 1);
    CHECK(OmegaString::parse("|201").digit(3) == 2);
    CHECK(p.torsion_type());
    CHECK_FALSE(OmegaString::parse("|0").torsion_type());
    CHECK(OmegaString::parse("|0").eventually_constant());
    CHECK(om.shifted(2).str() == "|201");
    CHECK(om.shifted(4).str() == "|120");
    CHECK(om.shifted(3).digit(0) == 0);
    CHECK_THROWS(OmegaString::parse("01|"));
    CHECK_THROWS(OmegaString::parse("|031"));
}

TEST_CASE("one_step recursion") {
    Grig& G = first_group();
    Element b = make_element(G, "b");
    OneStep s = one_step(b);
    CHECK(s.left.word == "a");
    CHECK(s.right.word == "b");
    CHECK(s.right.level == 1);
    CHECK_FALSE(s.swap);
    // in the usual first-group notation the right section reads c
    CHECK(general_to_classical(s.right.word, 1) == "c");

    Element a = make_element(G, "a");
    s = one_step(a);
    CHECK(s.left.word.empty());
    CHECK(s.right.word.empty());
    CHECK(s.swap);

    Element abab = make_element(G, "abab");
    s = one_step(abab);
    CHECK_FALSE(s.swap);
    CHECK(general_to_classical(s.left.word, 1) == "ca");
    CHECK(general_to_classical(s.right.word, 1) == "ac");

    // zeta(ab) = abadac decomposes as (b, aba) with a root swap
    Element z = make_element(G, "abadac");
    s = one_step(z);
    CHECK(s.swap);
    CHECK(general_to_classical(s.left.word, 1) == "b");
    CHECK(general_to_classical(s.right.word, 1) == "aba");
}

TEST_CASE("sections") {
    Grig& G = first_group();
    CHECK(same_action(section(make_element(G, "b"), "1"), make_element(G, "c")));
    CHECK(section(make_element(G, ""), "0110").word.empty());

    // [a,b] c [a,b]^{-1} = abab c baba, portrait along 10
    Element g = make_element(G, "ababcbaba");
    CHECK(g.word == "abacaba");
    Element s10 = section(g, "10");
    CHECK(same_action(s10, make_element(G, "b")));
    Element s0 = section(g, "0");
    CHECK(general_to_classical(s0.word, 1) == "cac");
    CHECK(section(g, "11").word.empty());
}

TEST_CASE("vertex action") {
    Grig& G = first_group();
    CHECK(act_vertex("1", make_element(G, "a")) == "0");
    CHECK(act_vertex("0110", make_element(G, "")) == "0110");
    // abab = [a,b] sends 1^infty to 1001^infty, so the depth-3 prefix moves
    CHECK(act_vertex("111", make_element(G, "abab")) == "100");
    std::mt19937_64 rng(2);
    for (int t = 0; t < 100; ++t) {
        Element g = Element{&G, random_reduced(rng, 25), 0};
        // bijective and length preserving on level 4
        std::set<Vertex> image;
        for (int m = 0; m < 16; ++m) {
            Vertex v;
            for (int b = 3; b >= 0; --b) v.push_back((m >> b) & 1 ? '1' : '0');
            Vertex w = act_vertex(v, g);
            CHECK(w.size() == 4);
            image.insert(w);
        }
        CHECK(image.size() == 16);
    }
}

TEST_CASE("multiply and inverse") {
    Grig& G = first_group();
    CHECK(multiply(make_element(G, "a"), make_element(G, "a")).word.empty());
    CHECK(inverse(make_element(G, "abad")).word == "daba");
    CHECK(multiply(make_element(G, "b"), make_element(G, "c")).word == "d");
    Element lvl1{&G, "ab", 1};
    CHECK_THROWS(multiply(make_element(G, "a"), lvl1));
}

TEST_CASE("identity oracle") {
    Grig& G = first_group();
    CHECK(is_identity(power(make_element(G, "ad"), 4)));
    CHECK_FALSE(is_identity(power(make_element(G, "ad"), 2)));
    CHECK_FALSE(is_identity(power(make_element(G, "ab"), 8)));
    CHECK(is_identity(power(make_element(G, "ab"), 16)));
    CHECK(is_identity(make_element(G, "dbc")));
    CHECK_FALSE(is_identity(make_element(G, "b")));

    // degenerate string: d acts trivially when every digit kills it
    Grig D0(OmegaString::parse("|0"));
    CHECK(is_identity(make_element(D0, "d")));
    CHECK_FALSE(is_identity(make_element(D0, "b")));
}

TEST_CASE("element order") {
    Grig& G = first_group();
    CHECK(element_order(make_element(G, "a"), 4) == 2);
    CHECK(element_order(make_element(G, "ad"), 8) == 4);
    CHECK(element_order(make_element(G, "ab"), 64) == 16);
    CHECK(element_order(make_element(G, "ac"), 64) == 8);
    CHECK_FALSE(element_order(make_element(G, "ab"), 8).has_value());
    // orders found on torsion strings are powers of two
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        Element g{&G, random_reduced(rng, 8), 0};
        auto ord = element_order(g, 256);
        if (ord) CHECK((*ord & (*ord - 1)) == 0);
    }
}

TEST_CASE("same_action across levels") {
    Grig& G = first_group();
    // the letter identification of the first group, all letters and levels
    for (long lvl = 0; lvl <= 6; ++lvl) {
        for (std::string cls : {"b", "c", "d", "ab", "acab"}) {
            Element general{&G, reduce_word(classical_to_general(cls, lvl)), lvl};
            Element classical = make_element(G, cls, 0);
            CHECK(same_action(general, classical));
        }
    }
    CHECK_FALSE(same_action(make_element(G, "b"), make_element(G, "c")));
    CHECK_FALSE(same_action(Element{&G, "b", 1}, make_element(G, "b")));
}

TEST_CASE("iota rigid stabilizer embedding") {
    Grig& G = first_group();
    // root case: the commutator word itself
    CHECK(iota(G, 'b', "").word == "baba");

    Element i3 = iota(G, 'b', "111");
    CHECK(i3.word.size() <= 32);
    // sections away from the defining vertex vanish
    for (int m = 0; m < 8; ++m) {
        Vertex v;
        for (int b = 2; b >= 0; --b) v.push_back((m >> b) & 1 ? '1' : '0');
        Element sec = section(i3, v);
        if (v == "111")
            CHECK(same_action(sec, Element{&G, reduce_word("baba"), 3}));
        else
            CHECK(is_identity(sec));
    }
    // orbit displacement of the inverse commutator direction
    OrbitPoint moved = act_ray(OrbitPoint{}, inverse(i3));
    CHECK(moved.str() == "z:5,6");  // 1^4 0 0 1^infty

    // agreement with the substitution form on the first group
    std::string s3 = classical_sigma(classical_sigma(classical_sigma("abab")));
    CHECK(same_action(make_element(G, s3), inverse(i3)));

    Element i110 = iota(G, 'b', "110");
    for (int m = 0; m < 8; ++m) {
        Vertex v;
        for (int b = 2; b >= 0; --b) v.push_back((m >> b) & 1 ? '1' : '0');
        if (v != "110") CHECK(is_identity(section(i110, v)));
    }
    CHECK_THROWS(iota(G, 'c', "111"));  // digit 2 kills b, not c
}

TEST_CASE("iota length bound across depths") {
    Grig& G = first_group();
    Grig G2(OmegaString::parse("|201"));
    for (const Grig* g : {&G, &G2}) {
        for (long n = 1; n <= 7; ++n) {
            char gamma = g->kills(n - 1);
            Vertex v;
            std::mt19937_64 rng(uint64_t(n) * 7 + 1);
            for (long i = 0; i < n; ++i) v.push_back(rng() & 1 ? '1' : '0');
            Element e = iota(*g, gamma, v);
            CHECK(BigUint(uint64_t(e.word.size())) <= BigUint::pow2(size_t(n) + 2));
        }
    }
}

TEST_CASE("portrait along a ray") {
    Grig& G = first_group();
    Element d = make_element(G, "d");
    auto port = portrait_along_ray(d, "1");
    REQUIRE(port.size() == 2);
    CHECK(port[0].at == "0");
    CHECK(is_identity(port[0].section));
    CHECK(port[1].at == "1");
    CHECK(same_action(port[1].section, make_element(G, "b")));

    for (auto& e : portrait_along_ray(make_element(G, ""), "0101"))
        CHECK(is_identity(e.section));

    Element g = make_element(G, "ababcbaba");
    auto p = portrait_along_ray(g, "10");
    REQUIRE(p.size() == 3);
    CHECK(general_to_classical(p[0].section.word, 1) == "cac");  // at 0
    CHECK(is_identity(p[1].section));                            // at 11
    CHECK(same_action(p[2].section, make_element(G, "b")));      // at 10

    CHECK_THROWS(portrait_along_ray(make_element(G, "a"), "1"));
}

TEST_CASE("involution property of generators") {
    for (const char* om : {"|012", "|201", "01|201", "|211201"}) {
        Grig G(OmegaString::parse(om));
        for (long lvl = 0; lvl <= 4; ++lvl)
            for (char s : {'a', 'b', 'c', 'd'}) {
                Element g{&G, std::string(1, s), lvl};
                CHECK(is_identity(multiply(g, g)));
            }
    }
}

TEST_CASE("recursion soundness of the action") {
    Grig& G = first_group();
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
        Element g{&G, random_reduced(rng, 40), 0};
        Element h{&G, random_reduced(rng, 20), 0};
        for (int m = 0; m < 16; ++m) {
            Vertex v;
            for (int b = 0; b < 6; ++b) v.push_back(rng() & 1 ? '1' : '0');
            // action through an intermediate split equals the direct action
            Vertex u = v.substr(0, 3), w = v.substr(3);
            Vertex lhs = act_vertex(v, g);
            Vertex rhs = act_vertex(u, g) + act_vertex(w, section(g, u));
            CHECK(lhs == rhs);
            // composition law
            CHECK(act_vertex(v, multiply(g, h)) == act_vertex(act_vertex(v, g), h));
        }
    }
}

TEST_CASE("contraction of sections") {
    Grig& G = first_group();
    Grig G2(OmegaString::parse("|201"));
    std::mt19937_64 rng(5);
    for (int t = 0; t < 300; ++t) {
        const Grig* g = (t & 1) ? &G : &G2;
        std::string w = random_reduced(rng, 200);
        if (w.size() < 2) continue;
        OneStep s = one_step(Element{g, w, 0});
        size_t bound = (w.size() + 2) / 2;  // ceil((|g|+1)/2)
        CHECK(s.left.word.size() <= bound);
        CHECK(s.right.word.size() <= bound);
    }
}

TEST_CASE("section homomorphism") {
    Grig& G = first_group();
    std::mt19937_64 rng(6);
    for (int t = 0; t < 100; ++t) {
        Element g{&G, random_reduced(rng, 16), 0};
        Element h{&G, random_reduced(rng, 16), 0};
        for (int depth = 1; depth <= 4; ++depth) {
            Vertex v;
            for (int b = 0; b < depth; ++b) v.push_back(rng() & 1 ? '1' : '0');
            Element lhs = section(multiply(g, h), v);
            Element rhs = multiply(section(g, v), section(h, act_vertex(v, g)));
            CHECK(equal_elements(lhs, rhs));
        }
    }
}
