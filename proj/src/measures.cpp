#include "grig/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace grig {

void factor_act(const Factor& f, OrbitPoint& x) {
    std::visit([&](const auto& v) { v.act_point(x); }, f);
}

Klein factor_germ(const Factor& f, const OrbitPoint& x) {
    return std::visit([&](const auto& v) { return v.germ_letter(x); }, f);
}

Factor factor_inverse(const Factor& f) {
    return std::visit([](const auto& v) -> Factor { return v.inverse(); }, f);
}

OrbitPoint SampleElement::act(const OrbitPoint& x) const {
    OrbitPoint y = x;
    for (const Factor& f : factors) factor_act(f, y);
    return y;
}

Klein SampleElement::germ_letter(const OrbitPoint& x) const {
    // germ of a product: multiply factor germs at the moving point
    Klein acc = Klein::Id;
    OrbitPoint y = x;
    for (const Factor& f : factors) {
        acc = klein_mul(acc, factor_germ(f, y));
        factor_act(f, y);
    }
    return acc;
}

long kn_of(long A, long n) {
    long f = 0;
    while ((long(1) << (f + 1)) <= n) ++f;
    return A * f;
}

std::shared_ptr<const LengthTables> make_length_tables(const Grig& G, long n_max, bool with_h) {
    auto t = std::make_shared<LengthTables>();
    t->gn.resize(size_t(n_max) + 1);
    t->chain_max.resize(size_t(n_max) + 1);
    for (long j = 1; j <= n_max; ++j) {
        t->gn[size_t(j)] = chain_word_length(G.omega(), j, gn_seed_letter(G, j));
        BigUint worst;
        for (char g : {'b', 'c', 'd'}) {
            BigUint len = chain_word_length(G.omega(), j, g);
            if (len > worst) worst = len;
        }
        t->chain_max[size_t(j)] = worst;
    }
    if (with_h) {
        t->hn.resize(size_t(n_max) + 1);
        MatB MM = matrix_M(), AA = matrix_A();
        MatB step = MM * MM * AA;
        MatB acc = MatB::identity();
        for (long j = 1; j <= n_max; ++j) {
            long k = (j + 1) / 2;
            if (j % 2 == 1 && j > 1) acc = acc * step;  // (M^2 A)^{k-1}
            VecB seed;
            seed[1] = BigUint(1);
            VecB v = acc * (MM * seed);
            BigUint hl = (v[0] + v[1] + v[2]) * BigUint(2);
            if (j % 2 == 0) hl += hl;
            t->hn[size_t(j)] = hl;
            (void)k;
        }
    }
    return t;
}

MixtureSampler::MixtureSampler(const Grig& G, std::vector<Component> comps, std::string name,
                               std::shared_ptr<const FrReport> fr,
                               std::shared_ptr<const LengthTables> lens)
    : G_(&G), comps_(std::move(comps)), name_(std::move(name)), fr_(std::move(fr)),
      lens_(std::move(lens)) {
    double total = 0;
    for (auto& c : comps_) total += c.weight;
    if (total <= 0) throw std::invalid_argument("MixtureSampler: zero total weight");
    double acc = 0;
    for (auto& c : comps_) {
        c.weight /= total;
        acc += c.weight;
        cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;
}

bool MixtureSampler::fully_hb_supported() const {
    for (auto& c : comps_)
        if (!c.hb_supported) return false;
    return true;
}

SampleElement MixtureSampler::sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double u = U(rng);
    size_t idx = size_t(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
    if (idx >= comps_.size()) idx = comps_.size() - 1;
    return sample_component(comps_[idx], rng);
}

namespace {

SampleElement quasi_cube_sample(const Grig& G, long n, bool use_h, bool inverse,
                                std::mt19937_64& rng, const LengthTables& lens) {
    SampleElement s;
    s.component_n = n;
    s.inverse_part = inverse;
    BigUint len;
    std::vector<Factor> fs;
    for (long j = n; j >= 1; --j) {
        if (!(rng() & 1)) continue;
        if (use_h) {
            fs.push_back(HnFactor{&G, j, false});
            len += lens.hn[size_t(j)];
        } else {
            fs.push_back(gn_factor(G, j));
            len += lens.gn[size_t(j)];
        }
    }
    if (inverse) {
        std::reverse(fs.begin(), fs.end());
        for (auto& f : fs) f = factor_inverse(f);
    }
    s.factors = std::move(fs);
    s.conlen = std::move(len);
    return s;
}

BigUint zero_syllable_bound(const Vertex& v) {
    BigUint syllables(1);
    for (long i = 1; i <= (long)v.size(); ++i)
        if (v[size_t(i - 1)] == '0') syllables += BigUint::pow2(size_t(i));
    return syllables;
}

} // namespace

SampleElement sample_upsilon(const Grig& G, const FrReport& fr, long n, long kn,
                             std::mt19937_64& rng, const LengthTables* lens) {
    SampleElement s;
    s.component_n = n;
    std::vector<Factor> fs;
    BigUint len;
    for (long j = n; j >= 1; --j) {
        bool eps = rng() & 1;
        bool modified = fjn_modified(G.omega(), j, n, kn);
        if (!eps) {
            if (modified) sample_fjn_index(G.omega(), fr, j, n, kn, rng);  // keep draws aligned
            continue;
        }
        if (modified) {
            IndexVertex iv = sample_fjn_index(G.omega(), fr, j, n, kn, rng);
            if (lens)
                len += zero_syllable_bound(iv.v) * lens->chain_max[size_t(j)];
            else
                len += gjv_length_bound(G.omega(), j, iv.v);
            fs.push_back(gjv_factor(G, j, iv.v));
        } else {
            if (lens)
                len += lens->gn[size_t(j)];
            else
                len += chain_word_length(G.omega(), j, gn_seed_letter(G, j));
            fs.push_back(gn_factor(G, j));
        }
    }
    s.factors = std::move(fs);
    s.conlen = std::move(len);
    return s;
}

SampleElement MixtureSampler::sample_component(const Component& c, std::mt19937_64& rng) const {
    switch (c.kind) {
        case Component::Kind::UniformS: {
            SampleElement s;
            static const char* gens[4] = {"a", "b", "c", "d"};
            s.factors.push_back(WordFactor{G_, gens[rng() % 4], 0});
            s.conlen = BigUint(1);
            return s;
        }
        case Component::Kind::Atom: {
            SampleElement s;
            s.factors.push_back(WordFactor{G_, c.atom_word, 0});
            s.conlen = BigUint(uint64_t(c.atom_word.size()));
            return s;
        }
        case Component::Kind::QuasiCubeG:
            return quasi_cube_sample(*G_, c.n, false, c.inverse, rng, *lens_);
        case Component::Kind::QuasiCubeH:
            return quasi_cube_sample(*G_, c.n, true, c.inverse, rng, *lens_);
        case Component::Kind::Upsilon: {
            if (!fr_) throw std::logic_error("upsilon component without Fr(D) report");
            SampleElement s = sample_upsilon(*G_, *fr_, c.n, c.kn, rng, lens_.get());
            if (c.inverse) {
                std::reverse(s.factors.begin(), s.factors.end());
                for (auto& f : s.factors) f = factor_inverse(f);
                s.inverse_part = true;
            }
            return s;
        }
    }
    throw std::logic_error("unreachable");
}

double MixtureSampler::bad_germ_weight(const OrbitPoint& x, std::mt19937_64& rng,
                                       int samples_per_comp) const {
    double total = 0;
    for (const auto& c : comps_) {
        if (c.hb_supported) continue;
        if (c.kind == Component::Kind::UniformS) {
            // letters c and d carry the only bad germs, at the basepoint
            if (x.is_basepoint() && !G_->letter_is_trivial('c', 0)) total += c.weight * 0.5;
            continue;
        }
        if (c.kind == Component::Kind::Atom) {
            Element g = make_element(*G_, c.atom_word, 0);
            if (nontrivial_b_coset(germ_at(g, x))) total += c.weight;
            continue;
        }
        int bad = 0;
        for (int t = 0; t < samples_per_comp; ++t) {
            SampleElement s = sample_component(c, rng);
            if (nontrivial_b_coset(s.germ_letter(x))) ++bad;
        }
        total += c.weight * double(bad) / double(samples_per_comp);
    }
    return total;
}

std::string MixtureSampler::describe_json() const {
    std::ostringstream os;
    os << "{\"name\":\"" << name_ << "\",\"omega\":\"" << G_->omega().str()
       << "\",\"components\":[";
    for (size_t i = 0; i < comps_.size(); ++i) {
        const auto& c = comps_[i];
        if (i) os << ",";
        const char* kind = "";
        switch (c.kind) {
            case Component::Kind::UniformS: kind = "uniform_s"; break;
            case Component::Kind::Atom: kind = "atom"; break;
            case Component::Kind::QuasiCubeG: kind = "quasi_cube_g"; break;
            case Component::Kind::QuasiCubeH: kind = "quasi_cube_h"; break;
            case Component::Kind::Upsilon: kind = "upsilon"; break;
        }
        os << "{\"kind\":\"" << kind << "\",\"weight\":" << c.weight << ",\"n\":" << c.n
           << ",\"kn\":" << c.kn << ",\"inverse\":" << (c.inverse ? "true" : "false") << "}";
    }
    os << "]}";
    return os.str();
}

MuBetaBuild build_mu_beta(const Grig& G, const FrReport& fr, const MuBetaParams& p) {
    if (!(p.beta > 0 && p.beta < 1))
        throw std::invalid_argument("mu_beta: beta must lie in (0,1)");
    double bound = fr.D * (1 + p.beta) / (2 * (1 - p.beta));
    bool faithful_ok = double(p.A) > bound && p.A % fr.D == 0 && p.beta > 1.0 - 1.0 / fr.D;
    if (p.theorem_faithful && !faithful_ok)
        throw std::invalid_argument("mu_beta: parameters below the stabilization theorem bound");

    std::vector<MixtureSampler::Component> comps;
    comps.push_back({0.5, 0, false, false, MixtureSampler::Component::Kind::UniformS, "", 0});
    std::vector<long> kns;
    double tail_total = 0;
    for (long n = fr.D; n <= p.N_max; n += fr.D) tail_total += std::pow(2.0, -p.beta * double(n));
    for (long n = fr.D; n <= p.N_max; n += fr.D) {
        long kn = kn_of(p.A, n);
        if (kn % fr.D != 0)
            throw std::invalid_argument("mu_beta: k_n not divisible by D (choose D | A)");
        kns.push_back(kn);
        double w = 0.5 * std::pow(2.0, -p.beta * double(n)) / tail_total / 2.0;
        comps.push_back({w, n, false, false, MixtureSampler::Component::Kind::Upsilon, "", kn});
        comps.push_back({w, n, true, false, MixtureSampler::Component::Kind::Upsilon, "", kn});
    }
    auto frp = std::make_shared<const FrReport>(fr);
    auto lens = make_length_tables(G, p.N_max, false);
    MuBetaBuild out{MixtureSampler(G, std::move(comps), "mu_beta", frp, lens), faithful_ok, bound,
                    std::move(kns)};
    return out;
}

namespace {

MixtureSampler build_quasi_cubic_mixture(const Grig& G, double eps, long N_max, bool use_h,
                                         const char* name) {
    std::vector<MixtureSampler::Component> comps;
    auto kind = use_h ? MixtureSampler::Component::Kind::QuasiCubeH
                      : MixtureSampler::Component::Kind::QuasiCubeG;
    for (long n = 1; n <= N_max; ++n) {
        double w = std::pow(double(n), 1.0 + eps) * std::pow(2.0, -double(n)) / 2.0;
        comps.push_back({w, n, false, use_h, kind, "", 0});
        comps.push_back({w, n, true, use_h, kind, "", 0});
    }
    return MixtureSampler(G, std::move(comps), name, nullptr, make_length_tables(G, N_max, use_h));
}

} // namespace

MixtureSampler build_eta0(const Grig& G, double eps, long N_max) {
    return build_quasi_cubic_mixture(G, eps, N_max, false, "eta0");
}

MixtureSampler build_eta2(const Grig& G, double eps, long N_max) {
    if (G.omega().str() != "|012")
        throw std::invalid_argument("eta2 is defined on the first group (|012)");
    return build_quasi_cubic_mixture(G, eps, N_max, true, "eta2");
}

MixtureSampler build_uniform_s(const Grig& G) {
    std::vector<MixtureSampler::Component> comps;
    comps.push_back({1.0, 0, false, false, MixtureSampler::Component::Kind::UniformS, "", 0});
    return MixtureSampler(G, std::move(comps), "uniform_s");
}

MixtureSampler build_f1_only(const Grig& G) {
    Element g1 = build_gn(G, 1);
    std::vector<MixtureSampler::Component> comps;
    comps.push_back({0.5, 1, false, false, MixtureSampler::Component::Kind::Atom, "", 0});
    comps.push_back({0.25, 1, false, false, MixtureSampler::Component::Kind::Atom, g1.word, 0});
    comps.push_back({0.25, 1, true, false, MixtureSampler::Component::Kind::Atom,
                     inverse(g1).word, 0});
    return MixtureSampler(G, std::move(comps), "uF1");
}

MixtureSampler build_atom(const Grig& G, const std::string& word) {
    std::vector<MixtureSampler::Component> comps;
    comps.push_back({1.0, 0, false, false, MixtureSampler::Component::Kind::Atom,
                     reduce_word(word), 0});
    bool hb = false;
    Element g = make_element(G, word, 0);
    auto r = in_Hb(g);
    hb = r.verdict == HbVerdict::Yes;
    comps.back().hb_supported = hb;
    return MixtureSampler(G, std::move(comps), "atom:" + word);
}

UpsilonSupport enumerate_upsilon_support(const Grig& G, const FrReport& fr, long n, long kn,
                                         uint64_t cap) {
    UpsilonSupport out;
    // enumerate per-level choice counts
    std::vector<std::vector<Element>> choices(size_t(n) + 1);
    BigUint lam(1);
    for (long j = 1; j <= n; ++j) {
        if (fjn_modified(G.omega(), j, n, kn)) {
            for (auto& iv : fjn_index(G.omega(), fr, j, n, kn))
                choices[size_t(j)].push_back(build_gjv_word(G, j, iv.v));
        } else {
            choices[size_t(j)].push_back(build_gn(G, j));
        }
        lam = lam * BigUint(uint64_t(choices[size_t(j)].size()) * 2);
    }
    if (lam > BigUint(cap)) {
        out.truncated = true;
        return out;
    }
    std::vector<int> eps(size_t(n) + 1, 0), pick(size_t(n) + 1, 0);
    std::function<void(long, Element)> rec = [&](long j, Element acc) {
        if (j == 0) {
            out.elements.push_back(std::move(acc));
            out.eps.push_back(std::vector<int>(eps.begin() + 1, eps.end()));
            return;
        }
        for (int e = 0; e <= 1; ++e) {
            eps[size_t(j)] = e;
            for (size_t t = 0; t < choices[size_t(j)].size(); ++t) {
                pick[size_t(j)] = int(t);
                Element next = e ? multiply(acc, choices[size_t(j)][t]) : acc;
                rec(j - 1, std::move(next));
                if (!e) break;  // gamma choice is irrelevant when eps = 0
            }
        }
    };
    rec(n, Element{&G, "", 0});
    return out;
}

} // namespace grig
