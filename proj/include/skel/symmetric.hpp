#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "skel/expr.hpp"
#include "skel/net.hpp"

namespace skel {

// One summand of a formal sum: `multiplicity` copies of a tuple, subtracted
// when `negative`. An `all` item stands for every colour of the place domain.
struct InscriptionItem {
    Tokens multiplicity = 1;
    bool negative = false;
    bool all = false;
    std::vector<Term> tuple; // one term per domain component; empty for `all`

    bool operator==(const InscriptionItem&) const = default;
};

struct HighLevelArc {
    std::size_t place = 0;
    std::vector<InscriptionItem> items;

    bool operator==(const HighLevelArc&) const = default;
};

struct HighLevelTransition {
    std::string name;
    std::vector<HighLevelArc> inputs;
    std::vector<HighLevelArc> outputs;
    Expr guard = Expr::truth(true);
    std::vector<FiringMode> modes; // extensional guard when `extensional`
    bool extensional = false;
    bool assumedNonFull = false;
    // Local declarations, overriding the net's. Those not bound on an arc
    // become guard-only variables in this order.
    std::vector<GuardVariable> variables;

    bool operator==(const HighLevelTransition&) const = default;
};

// Coloured net as written: arcs carry formal sums of terms. Variable sorts
// are declared here or inferred from the arcs they occur on.
struct SymmetricNet {
    std::vector<ColouredPlace> places;
    std::vector<HighLevelTransition> transitions;
    std::map<std::string, BasicSort> variables;
};

inline constexpr std::size_t kMaxPermutedTerms = 6;

// Rewrites every arc into fresh distinct variables, moving the original
// terms into the guard. Arcs that already list distinct unused variables are
// kept. Sums with more than kMaxPermutedTerms positive terms are bound in
// listed order and mark the transition as assumed non-full. `all` items
// become all-copies arcs and also mark the transition.
// Throws std::invalid_argument on malformed input and UnsupportedConstruct
// for subtraction in sums that are too long to permute.
ColouredNet simplify_inscriptions(const SymmetricNet& net);

// Lifts a simplified net back to inscriptions (one item per token).
SymmetricNet lift(const ColouredNet& net);

} // namespace skel
