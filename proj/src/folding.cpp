#include "skel/folding.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

#include "skel/error.hpp"

namespace skel {

Partition Partition::coarsest(std::size_t places, std::size_t transitions) {
    Partition p;
    p.placeCount = places;
    p.nodes.resize(places + transitions);
    for (std::size_t i = 0; i < p.nodes.size(); ++i) p.nodes[i] = i;
    if (places) p.bounds.emplace_back(0, places);
    if (transitions) p.bounds.emplace_back(places, places + transitions);
    return p;
}

std::vector<std::size_t> Partition::members(std::size_t c) const {
    return {nodes.begin() + static_cast<std::ptrdiff_t>(bounds[c].first),
            nodes.begin() + static_cast<std::ptrdiff_t>(bounds[c].second)};
}

std::vector<std::size_t> Partition::class_of() const {
    std::vector<std::size_t> out(nodes.size());
    for (std::size_t c = 0; c < bounds.size(); ++c)
        for (auto i = bounds[c].first; i < bounds[c].second; ++i) out[nodes[i]] = c;
    return out;
}

void Partition::check() const {
    std::size_t next = 0;
    for (const auto& [b, e] : bounds) {
        if (b != next) throw std::logic_error("partition ranges are not contiguous");
        if (e <= b) throw std::logic_error("empty partition class");
        bool places = nodes[b] < placeCount;
        for (auto i = b; i < e; ++i)
            if ((nodes[i] < placeCount) != places) throw std::logic_error("class mixes places and transitions");
        next = e;
    }
    if (next != nodes.size()) throw std::logic_error("partition does not cover every node");
    std::vector<char> seen(nodes.size(), 0);
    for (auto n : nodes) {
        if (n >= nodes.size() || seen[n]) throw std::logic_error("partition repeats a node");
        seen[n] = 1;
    }
}

Partition split(const Partition& p, const SplitFunction& f) {
    Partition out;
    out.placeCount = p.placeCount;
    out.nodes = p.nodes;
    std::vector<std::int64_t> value(p.nodes.size());
    for (auto n : p.nodes) value[n] = f(n);
    for (const auto& [b, e] : p.bounds) {
        auto first = out.nodes.begin() + static_cast<std::ptrdiff_t>(b);
        auto last = out.nodes.begin() + static_cast<std::ptrdiff_t>(e);
        std::sort(first, last, [&](auto x, auto y) { return std::pair(value[x], x) < std::pair(value[y], y); });
        auto start = b;
        for (auto i = b + 1; i <= e; ++i)
            if (i == e || value[out.nodes[i]] != value[out.nodes[i - 1]]) {
                out.bounds.emplace_back(start, i);
                start = i;
            }
    }
    return out;
}

namespace {

// Names without colour suffixes and trailing indices, joined:
// {th0, ea0, th1} -> "thea", {p.r, p.g} -> "p".
std::string class_name(const std::vector<std::string>& names, const std::string& fallback) {
    std::vector<std::string> stems;
    for (const auto& n : names) {
        auto end = std::min(n.size(), n.find('.'));
        while (end > 0 && (std::isdigit(static_cast<unsigned char>(n[end - 1])) || n[end - 1] == '_' ||
                           n[end - 1] == '.'))
            --end;
        auto stem = n.substr(0, end);
        if (std::find(stems.begin(), stems.end(), stem) == stems.end()) stems.push_back(stem);
    }
    std::string out;
    for (const auto& s : stems) out += s;
    bool identifier = !out.empty() && !std::isdigit(static_cast<unsigned char>(out[0]));
    return identifier ? out : fallback;
}

} // namespace

FoldingResult fold(const PTNet& net, const Formula& f) {
    const auto P = net.places.size();
    const auto T = net.transitions.size();
    const auto atoms = atoms_of(f);
    const auto watched = enabled_transitions_of(f);

    std::vector<std::int64_t> inDegree(P + T, 0), outDegree(P + T, 0);
    for (std::size_t t = 0; t < T; ++t) {
        inDegree[P + t] = static_cast<std::int64_t>(net.pre[t].size());
        outDegree[P + t] = static_cast<std::int64_t>(net.post[t].size());
        for (const auto& a : net.pre[t]) ++outDegree[a.place];
        for (const auto& a : net.post[t]) ++inDegree[a.place];
    }

    auto partition = Partition::coarsest(P, T);
    partition = split(partition, [&](std::size_t x) { return inDegree[x]; });
    partition = split(partition, [&](std::size_t x) { return outDegree[x]; });
    for (const auto& a : atoms) {
        std::vector<std::int64_t> coefficient(P + T, 0);
        for (const auto& term : a.terms) {
            auto p = net.find_place(term.place);
            if (!p) throw UnknownPlace(term.place);
            coefficient[*p] = term.coefficient;
        }
        partition = split(partition, [&](std::size_t x) { return coefficient[x]; });
    }
    for (const auto& name : watched) {
        auto t = net.find_transition(name);
        if (!t) throw std::invalid_argument("unknown transition '" + name + "'");
        partition = split(partition, [&, id = P + *t](std::size_t x) { return x == id ? 1 : 0; });
    }

    // Parallel transitions go to different classes so that no two members
    // of a class share a mode.
    {
        std::map<std::pair<std::vector<Arc>, std::vector<Arc>>, std::int64_t> seen;
        std::vector<std::int64_t> copy(P + T, 0);
        for (std::size_t t = 0; t < T; ++t) copy[P + t] = seen[{net.pre[t], net.post[t]}]++;
        partition = split(partition, [&](std::size_t x) { return copy[x]; });
    }

    // Liberal uniformity, repeated until no class splits.
    for (bool changed = true; changed;) {
        changed = false;
        const auto before = partition.size();
        const auto cls = partition.class_of();
        for (std::size_t c = 0; c < before; ++c) {
            if (!partition.is_place_class(c)) continue;
            auto consume = [&](std::size_t x) -> std::int64_t {
                if (x < P) return 0;
                std::int64_t sum = 0;
                for (const auto& a : net.pre[x - P])
                    if (cls[a.place] == c) sum += a.weight;
                return sum;
            };
            auto produce = [&](std::size_t x) -> std::int64_t {
                if (x < P) return 0;
                std::int64_t sum = 0;
                for (const auto& a : net.post[x - P])
                    if (cls[a.place] == c) sum += a.weight;
                return sum;
            };
            partition = split(partition, consume);
            partition = split(partition, produce);
        }
        changed = partition.size() != before;
    }
    partition.check();

    FoldingResult result;
    result.partition = partition;
    result.placeClass.assign(P, 0);
    result.transitionClass.assign(T, 0);
    result.modeOf.resize(T);

    // Folded places and transitions keep the partition's class order.
    std::vector<std::size_t> placeClasses, transitionClasses;
    for (std::size_t c = 0; c < partition.size(); ++c)
        (partition.is_place_class(c) ? placeClasses : transitionClasses).push_back(c);

    std::set<std::string> used;
    auto unique = [&](std::string name) {
        auto base = name;
        for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
        used.insert(name);
        return name;
    };

    ColouredNet& out = result.net;
    std::vector<std::size_t> colourOf(P, 0); // colour index of an original place in its class
    for (std::size_t i = 0; i < placeClasses.size(); ++i) {
        auto members = partition.members(placeClasses[i]);
        std::vector<std::string> names;
        for (auto p : members) names.push_back(net.places[p]);
        auto name = unique(class_name(names, "P" + std::to_string(i)));
        ColouredPlace place{name, ColourDomain(BasicSort::enumeration(name, names)), Multiset(members.size(), 0)};
        for (std::size_t k = 0; k < members.size(); ++k) {
            result.placeClass[members[k]] = i;
            colourOf[members[k]] = k;
            place.initial[k] = net.initial[members[k]];
        }
        out.places.push_back(std::move(place));
    }

    for (std::size_t i = 0; i < transitionClasses.size(); ++i) {
        auto members = partition.members(transitionClasses[i]);
        std::vector<std::string> names;
        for (auto x : members) names.push_back(net.transitions[x - P]);
        ColouredTransition tr;
        tr.name = unique(class_name(names, "T" + std::to_string(i)));

        // Summed weights per folded place; equal for all members by uniformity.
        const auto representative = members.front() - P;
        std::map<std::size_t, Tokens> inWeight, outWeight;
        for (const auto& a : net.pre[representative]) inWeight[result.placeClass[a.place]] += a.weight;
        for (const auto& a : net.post[representative]) outWeight[result.placeClass[a.place]] += a.weight;
        std::size_t counter = 0;
        for (auto [place, w] : inWeight) {
            ColouredArc arc{place, {}, 0};
            for (Tokens k = 0; k < w; ++k) arc.tokens.push_back({"x" + std::to_string(++counter)});
            tr.inputs.push_back(std::move(arc));
        }
        for (auto [place, w] : outWeight) {
            ColouredArc arc{place, {}, 0};
            for (Tokens k = 0; k < w; ++k) arc.tokens.push_back({"x" + std::to_string(++counter)});
            tr.outputs.push_back(std::move(arc));
        }

        // Each member binds consecutive variables to its places in class order.
        std::vector<FiringMode> modes;
        for (auto x : members) {
            const auto t = x - P;
            result.transitionClass[t] = i;
            FiringMode mode;
            auto bind = [&](const std::vector<Arc>& arcs, const std::map<std::size_t, Tokens>& expected) {
                std::map<std::size_t, std::vector<std::pair<std::size_t, Tokens>>> perClass;
                for (const auto& a : arcs) perClass[result.placeClass[a.place]].emplace_back(colourOf[a.place], a.weight);
                if (perClass.size() != expected.size())
                    throw std::logic_error("folded transition class is not uniform");
                for (auto& [place, list] : perClass) {
                    std::sort(list.begin(), list.end());
                    Tokens total = 0;
                    for (auto [colour, w] : list) {
                        mode.colours.insert(mode.colours.end(), w, colour);
                        total += w;
                    }
                    if (total != expected.at(place)) throw std::logic_error("folded transition class is not uniform");
                }
            };
            bind(net.pre[t], inWeight);
            bind(net.post[t], outWeight);
            result.modeOf[t] = mode;
            modes.push_back(std::move(mode));
        }
        tr.guard.form = std::move(modes);
        out.transitions.push_back(std::move(tr));
    }
    out.validate();

    result.formula = map_atoms(f, [&](const AtomicProposition& a) {
        std::map<std::size_t, std::int64_t> coefficient;
        for (const auto& term : a.terms) coefficient[result.placeClass[*net.find_place(term.place)]] = term.coefficient;
        std::vector<LinearTerm> terms;
        for (auto [place, k] : coefficient) terms.push_back({k, out.places[place].name});
        return AtomicProposition::make(std::move(terms), a.bound);
    });
    result.formula = [&] {
        std::function<Formula(const Formula&)> rename = [&](const Formula& g) {
            Formula h = g;
            if (g.op == Formula::Op::Enabled)
                h.transition = out.transitions[result.transitionClass[*net.find_transition(g.transition)]].name;
            for (auto& a : h.args) a = rename(a);
            return h;
        };
        return rename(result.formula);
    }();
    return result;
}

bool folding_worthwhile(const PTNet& original, const ColouredNet& folded) {
    return 3 * (folded.places.size() + folded.transitions.size()) <
           original.places.size() + original.transitions.size();
}

} // namespace skel
