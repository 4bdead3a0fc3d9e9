#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "skel/formula.hpp"
#include "skel/net.hpp"

namespace skel {

// Partition of the nodes of a P/T net. Node ids: places 0..P-1, then
// transitions P..P+T-1. Every class is a contiguous range of `nodes`.
struct Partition {
    std::vector<std::size_t> nodes;
    std::vector<std::pair<std::size_t, std::size_t>> bounds; // [begin, end)
    std::size_t placeCount = 0;

    // {P, T}, leaving out empty sides.
    static Partition coarsest(std::size_t places, std::size_t transitions);

    std::size_t size() const noexcept { return bounds.size(); }
    bool is_place_class(std::size_t c) const { return nodes[bounds[c].first] < placeCount; }
    std::vector<std::size_t> members(std::size_t c) const;
    std::vector<std::size_t> class_of() const; // per node

    // Throws std::logic_error on empty, overlapping or missing ranges.
    void check() const;
};

using SplitFunction = std::function<std::int64_t(std::size_t node)>;

// Sorts each class by (f, node id) and cuts where f changes.
Partition split(const Partition& p, const SplitFunction& f);

struct FoldingResult {
    ColouredNet net; // extensional guards, one mode per original transition
    Partition partition;
    std::vector<std::size_t> placeClass;      // original place -> folded place
    std::vector<std::size_t> transitionClass; // original transition -> folded transition
    std::vector<FiringMode> modeOf;           // original transition -> its mode
    Formula formula;                          // atoms rewritten over folded places
};

// Partition refinement by degree, atom coefficients and liberal uniformity,
// then assembly of the coloured net. Transitions named in enabled() atoms
// stay in singleton classes. Throws UnknownPlace for atoms on unknown places.
FoldingResult fold(const PTNet& net, const Formula& f);

// True when places plus transitions of the folded net are fewer than a third
// of the original's.
bool folding_worthwhile(const PTNet& original, const ColouredNet& folded);

} // namespace skel
