#include "skel/injection.hpp"

#include <algorithm>
#include <set>

namespace skel {

Marking ModifiedSkeleton::collapse(MarkingView m) const {
    Marking out(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(basePlaces));
    for (auto [p, bar] : complements) out[p] += m[bar];
    return out;
}

PTSystem ModifiedSkeleton::system() const {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (auto [p, bar] : complements) groups[net.places[p]] = {p, bar};
    std::vector<char> silent(net.transitions.size(), 0);
    for (auto [p, t] : recipients) silent[t] = 1;
    return PTSystem(net, std::move(groups), std::move(silent));
}

ModifiedSkeleton inject_deadlocks(const ColouredNet& net, const SkeletonAnalysis& analysis) {
    ModifiedSkeleton out;
    out.net = skeleton(net);
    out.basePlaces = out.net.places.size();
    out.baseTransitions = out.net.transitions.size();
    out.sourceClasses = analysis.non_full_minimal();

    std::set<std::size_t> places;
    for (auto c : out.sourceClasses)
        for (auto t : analysis.classification.classes[c])
            for (const auto& a : net.transitions[t].inputs) places.insert(a.place);

    std::set<std::string> names(out.net.places.begin(), out.net.places.end());
    names.insert(out.net.transitions.begin(), out.net.transitions.end());
    auto fresh = [&](const std::string& base) {
        auto name = base;
        for (int k = 2; names.count(name); ++k) name = base + "_" + std::to_string(k);
        names.insert(name);
        return name;
    };
    for (auto p : places) {
        const auto name = out.net.places[p];
        auto bar = out.net.add_place(fresh(name + "_bar"));
        auto t = out.net.add_transition(fresh("recv_" + name));
        out.net.add_input(p, t, 1);
        out.net.add_output(t, bar, 1);
        out.complements[p] = bar;
        out.recipients[p] = t;
    }
    out.net.validate();
    return out;
}

ModifiedSkeleton inject_deadlocks(const ColouredNet& net) {
    auto live = prune_dead_transitions(net);
    return inject_deadlocks(live, analyze_skeleton(live));
}

KripkeStructure build_kripke(const ModifiedSkeleton& s, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits) {
    return build_kripke(s.system(), propositions, limits);
}

bool markings_related(const ModifiedSkeleton& s, MarkingView skeletonMarking, MarkingView modified) {
    auto c = s.collapse(modified);
    return std::equal(c.begin(), c.end(), skeletonMarking.begin(), skeletonMarking.end());
}

StateRelation relate_markings(const KripkeStructure& skeleton, const KripkeStructure& modified,
                              const ModifiedSkeleton& s) {
    return relate_by_key(
        skeleton, modified, [](MarkingView m) { return Marking(m.begin(), m.end()); },
        [&](MarkingView m) { return s.collapse(m); });
}

StateRelation stuttering_relation(const KripkeStructure& concrete, const KripkeStructure& modified,
                                  const ModifiedSkeleton& s, const std::function<Marking(MarkingView)>& image) {
    auto sigma = relate_by_key(concrete, modified, image, [&](MarkingView m) { return s.collapse(m); });
    std::erase_if(sigma.pairs, [&](const auto& pair) {
        if (concrete.deadlock[pair.first]) return false;
        auto m = modified.marking(pair.second);
        for (auto [p, bar] : s.complements)
            if (m[bar] != 0) return true;
        return false;
    });
    return sigma;
}

Marking skeleton_image(const ColouredNet& net, MarkingView m) {
    auto offsets = colour_offsets(net);
    Marking out(net.places.size(), 0);
    for (std::size_t p = 0; p < net.places.size(); ++p)
        for (auto i = offsets[p]; i < offsets[p + 1]; ++i) out[p] += m[i];
    return out;
}

} // namespace skel
