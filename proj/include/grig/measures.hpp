#pragma once

#include <memory>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "grig/bigint.hpp"
#include "grig/construction.hpp"
#include "grig/core.hpp"
#include "grig/germs.hpp"
#include "grig/orbit.hpp"
#include "grig/subst.hpp"

namespace grig {

// One multiplicative factor of a sampled element, with closed-form action.
struct WordFactor {
    const Grig* G = nullptr;
    std::string word;
    long level = 0;

    void act_point(OrbitPoint& x) const { apply_word_ray(*G, x, word, level, 1); }
    Klein germ_letter(const OrbitPoint& x) const { return germ_at(Element{G, word, level}, x); }
    WordFactor inverse() const {
        return WordFactor{G, std::string(word.rbegin(), word.rend()), level};
    }
};

using Factor = std::variant<WordFactor, GnFactor, HnFactor, GjvFactor>;

void factor_act(const Factor& f, OrbitPoint& x);
Klein factor_germ(const Factor& f, const OrbitPoint& x);
Factor factor_inverse(const Factor& f);

// A sampled group element as an ordered product of factors (leftmost acts
// first under the right action), with its construction length.
struct SampleElement {
    std::vector<Factor> factors;
    BigUint conlen;
    long component_n = 0;      // mixture component that produced it (0 = atom)
    bool inverse_part = false;

    OrbitPoint act(const OrbitPoint& x) const;
    Klein germ_letter(const OrbitPoint& x) const;  // cocycle over the factors
};

// Precomputed construction lengths, shared by all samples of a mixture.
struct LengthTables {
    std::vector<BigUint> gn;         // |g_j| exact, index j
    std::vector<BigUint> hn;         // |h_j| exact, index j (first group)
    std::vector<BigUint> chain_max;  // worst per-syllable chain growth, index j
};
std::shared_ptr<const LengthTables> make_length_tables(const Grig& G, long n_max, bool with_h);

// Weighted mixture of element samplers. Components are paired with their
// inverses at equal weight in symmetric mode.
class MixtureSampler {
public:
    struct Component {
        double weight = 0;
        long n = 0;
        bool inverse = false;
        bool hb_supported = false;  // germs provably in {id,b} for all draws
        enum class Kind { UniformS, Atom, QuasiCubeG, QuasiCubeH, Upsilon } kind;
        std::string atom_word;  // Kind::Atom
        long kn = 0;            // Kind::Upsilon
    };

    MixtureSampler(const Grig& G, std::vector<Component> comps, std::string name,
                   std::shared_ptr<const FrReport> fr = nullptr,
                   std::shared_ptr<const LengthTables> lens = nullptr);

    SampleElement sample(std::mt19937_64& rng) const;
    const std::vector<Component>& components() const { return comps_; }
    const std::string& name() const { return name_; }
    const Grig& group() const { return *G_; }

    // Monte-Carlo weight of {g : germ of g at x not in {id,b}}; exact for
    // uniform-on-S and atom components.
    double bad_germ_weight(const OrbitPoint& x, std::mt19937_64& rng, int samples_per_comp) const;
    bool fully_hb_supported() const;

    std::string describe_json() const;

private:
    const Grig* G_;
    std::vector<Component> comps_;
    std::vector<double> cdf_;
    std::string name_;
    std::shared_ptr<const FrReport> fr_;
    std::shared_ptr<const LengthTables> lens_;

    SampleElement sample_component(const Component& c, std::mt19937_64& rng) const;
};

struct MuBetaParams {
    double beta = 0.9;
    long A = 6;
    long N_max = 24;
    bool theorem_faithful = false;  // require the A-bound of the stabilization theorem
};

struct MuBetaBuild {
    MixtureSampler sampler;
    bool faithful_ok = false;
    double a_lower_bound = 0;  // D(1+beta)/(2(1-beta))
    std::vector<long> kn_values;
};

// mu_beta = 1/2 u_S + 1/2 sum_{D|n<=N} C 2^{-n beta} (upsilon_n + inverse),
// with k_n = A floor(log2 n).
MuBetaBuild build_mu_beta(const Grig& G, const FrReport& fr, const MuBetaParams& p);

// eta_0: quasi-cubic mixture over (g_n), weights ~ n^{1+eps} 2^{-n}.
MixtureSampler build_eta0(const Grig& G, double eps, long N_max);
// eta_2: same over the b-germ sequence (h_n); first group only.
MixtureSampler build_eta2(const Grig& G, double eps, long N_max);
// Uniform on the generating set.
MixtureSampler build_uniform_s(const Grig& G);
// Uniform on F_1 and its inverse (one-dimensional contrast walk).
MixtureSampler build_f1_only(const Grig& G);
// Point mass at a single word.
MixtureSampler build_atom(const Grig& G, const std::string& word);

long kn_of(long A, long n);  // A * floor(log2 n)

// Exhaustive support of upsilon_n when |Lambda_n| fits the given cap:
// one materialized element per (eps, gamma) tuple.
struct UpsilonSupport {
    std::vector<Element> elements;            // theta_n images, materialized
    std::vector<std::vector<int>> eps;        // the eps tuple per entry
    bool truncated = false;
};
UpsilonSupport enumerate_upsilon_support(const Grig& G, const FrReport& fr, long n, long kn,
                                         uint64_t cap = uint64_t(1) << 20);

// Factor form of one upsilon_n draw. Length tables, when given, replace the
// per-draw exact length computation by the precomputed bound.
SampleElement sample_upsilon(const Grig& G, const FrReport& fr, long n, long kn,
                             std::mt19937_64& rng, const LengthTables* lens = nullptr);

} // namespace grig
