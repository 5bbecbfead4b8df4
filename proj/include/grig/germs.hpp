#pragma once

#include <vector>

#include "grig/core.hpp"
#include "grig/orbit.hpp"

namespace grig {

// Germ value of g at a ray cofinal with 1^infty: the stable nucleus letter
// of the sections of g along prefixes of x (id for finitary behavior).
Klein germ_at(const Element& g, const OrbitPoint& x, long depth_cap = -1);

// Coset of a germ value in the Klein group modulo {id, b}.
inline bool nontrivial_b_coset(Klein k) { return k == Klein::C || k == Klein::D; }

enum class HbVerdict { Yes, No, Undecided };

struct HbResult {
    HbVerdict verdict = HbVerdict::Undecided;
    long decided_level = -1;     // level at which all sections were classified
    bool degenerate_omega = false;  // omega not torsion-type: germ group collapsed
};

// Membership in the subgroup of elements whose germs all lie in {id, b}:
// holds iff some level has every section in {id, a, b}.
HbResult in_Hb(const Element& g, long depth_bound = 64);

// All rays carrying a c- or d-germ, as explicit orbit points. Requires the
// portrait to resolve to nucleus letters within depth_bound.
std::vector<OrbitPoint> bad_germ_support(const Element& g, long depth_bound = 64);

} // namespace grig
