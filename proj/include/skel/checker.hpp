#pragma once

#include <cstddef>
#include <stop_token>
#include <vector>

#include "skel/formula.hpp"
#include "skel/statespace.hpp"

namespace skel {

struct CheckOptions {
    // Largest (state x obligation-set) product explored for formulas outside CTL.
    std::size_t productCap = 4'000'000;
    std::stop_token stop;
};

// Truth at the initial state over the infinite paths of the completed
// structure. A formula that is not a state formula is read as A(f).
// Atoms are looked up among k.propositions, directly or by their negation.
// Throws UnsupportedFormula when a product exceeds the cap.
bool check_ctl(const KripkeStructure& k, const Formula& f, const CheckOptions& options = {});

// Per-state truth of a state formula.
std::vector<char> satisfying_states(const KripkeStructure& k, const Formula& f,
                                    const CheckOptions& options = {});

} // namespace skel
