#pragma once

#include "hierlab/calculus.hpp"

#include <string>
#include <vector>

namespace hierlab::hierarchy {

struct RecursionInconsistency : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructureViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Family { AKNS, KdV, Gardner, mKdV, GoodVariable };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::AKNS: return "akns";
        case Family::KdV: return "kdv";
        case Family::Gardner: return "gardner";
        case Family::mKdV: return "mkdv";
        case Family::GoodVariable: return "goodvar";
    }
    return "?";
}

struct Entry {
    DiffPoly alpha, beta, gamma;         // AKNS iterates
    DiffPoly hamiltonian;                // density, integration-by-parts reduced
    std::vector<DiffPoly> gradients;     // KdV/Gardner/mKdV: {dH/du}; AKNS: {dH/dq, dH/dr}
    std::vector<DiffPoly> vector_field;  // KdV/Gardner: {dx dH}; AKNS: {alpha_n, beta_n}
    DiffPoly flux;                       // Gardner only
};

struct HierarchyTable {
    Family family{};
    int order = 0;
    std::vector<Entry> entries;  // indexed by n (meaning depends on family)

    const Entry& at(int n) const { return entries.at(static_cast<std::size_t>(n)); }
};

inline Rational binomial(int n, int k) {
    Rational r(1);
    for (int j = 0; j < k; ++j) r *= Rational(n - j, j + 1);
    return r;
}

}  // namespace hierlab::hierarchy
