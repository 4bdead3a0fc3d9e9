#include "skel/fullness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace skel {

InputVector input_vector(const ColouredNet& net, std::size_t transition) {
    InputVector f(net.places.size(), 0);
    for (const auto& a : net.transitions.at(transition).inputs)
        f[a.place] += static_cast<Tokens>(a.tokens.size() + a.allCopies * net.places[a.place].domain.size());
    return f;
}

bool TransitionClassification::below(std::size_t a, std::size_t b) const {
    const auto& x = vectors[a];
    const auto& y = vectors[b];
    bool strict = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > y[i]) return false;
        if (x[i] < y[i]) strict = true;
    }
    return strict;
}

TransitionClassification transition_classes(const ColouredNet& net) {
    TransitionClassification tc;
    std::map<InputVector, std::size_t> index;
    tc.classOf.resize(net.transitions.size());
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        auto f = input_vector(net, t);
        auto [it, fresh] = index.try_emplace(f, tc.classes.size());
        if (fresh) {
            tc.classes.emplace_back();
            tc.vectors.push_back(std::move(f));
        }
        tc.classes[it->second].push_back(t);
        tc.classOf[t] = it->second;
    }
    for (std::size_t c = 0; c < tc.classes.size(); ++c) {
        bool minimal = true;
        for (std::size_t d = 0; d < tc.classes.size() && minimal; ++d)
            if (tc.below(d, c)) minimal = false;
        if (minimal) tc.minimal.push_back(c);
    }
    return tc;
}

namespace {

// Position of each token on each input arc; identity unless reordered.
using TokenOrder = std::vector<std::vector<std::size_t>>;

TokenOrder identity_order(const ColouredTransition& tr) {
    TokenOrder order;
    for (const auto& a : tr.inputs) {
        order.emplace_back(a.tokens.size());
        std::iota(order.back().begin(), order.back().end(), 0);
    }
    return order;
}

std::vector<AutomatonVariable> input_variables(const ColouredNet& net, const ColouredTransition& tr) {
    std::vector<AutomatonVariable> vars;
    for (const auto& a : tr.inputs) {
        const auto& place = net.places[a.place];
        const auto arity = place.domain.arity();
        for (std::size_t k = 0; k < a.tokens.size(); ++k)
            for (std::size_t c = 0; c < arity; ++c) {
                const auto& sort = place.domain.components[c];
                auto name = place.name + "#" + std::to_string(k);
                if (arity > 1) name += "." + std::to_string(c);
                vars.push_back({std::move(name), sort.lo(), sort.hi(), vars.size()});
            }
    }
    return vars;
}

ModeAutomaton member_automaton(const ColouredNet& net, std::size_t t, const TokenOrder& order) {
    const auto& tr = net.transitions[t];
    const auto inputs = input_variables(net, tr);
    const auto n = inputs.size();
    auto layout = variable_layout(net, t);

    std::vector<std::size_t> offsets;
    std::size_t total = 0;
    for (const auto& a : tr.inputs) {
        offsets.push_back(total);
        total += a.tokens.size() * net.places[a.place].domain.arity();
    }
    // Rank of each layout slot.
    std::vector<std::size_t> rank(layout.size());
    for (std::size_t i = 0, extra = n; i < layout.size(); ++i) {
        const auto& s = layout[i];
        if (s.role == VariableSlot::Role::Input) {
            const auto arity = net.places[tr.inputs[s.arc].place].domain.arity();
            rank[i] = offsets[s.arc] + order[s.arc][s.token] * arity + s.component;
        } else {
            rank[i] = extra++;
        }
    }

    if (tr.guard.extensional()) {
        std::vector<std::vector<int>> seqs;
        for (const auto& m : tr.guard.modes()) {
            std::vector<int> seq(n);
            for (std::size_t i = 0; i < layout.size(); ++i)
                if (rank[i] < n) seq[rank[i]] = layout[i].sort->value(m.colours[i]);
            seqs.push_back(std::move(seq));
        }
        return sequence_automaton(inputs, seqs);
    }

    std::map<std::string, AutomatonVariable> vars;
    for (std::size_t i = 0; i < layout.size(); ++i) {
        const auto* sort = layout[i].sort;
        if (rank[i] < n)
            vars.emplace(layout[i].name, inputs[rank[i]]);
        else
            vars.emplace(layout[i].name, AutomatonVariable{layout[i].name, sort->lo(), sort->hi(), rank[i]});
    }
    auto a = expression_automaton(tr.guard.expression(), vars);
    for (const auto& v : inputs)
        if (std::none_of(a.variables.begin(), a.variables.end(), [&](const auto& w) { return w.rank == v.rank; }))
            a = insert_variable(a, v);
    return project_prefix(a, n);
}

bool reorder_tokens(TokenOrder& order) {
    for (auto& arc : order)
        if (std::next_permutation(arc.begin(), arc.end())) return true;
    return false;
}

std::size_t orderings(const ColouredTransition& tr, std::size_t cap) {
    std::size_t total = 1;
    for (const auto& a : tr.inputs)
        for (std::size_t k = 2; k <= a.tokens.size(); ++k) {
            total *= k;
            if (total > cap) return cap + 1;
        }
    return total;
}

} // namespace

ModeAutomaton consumption_automaton(const ColouredNet& net, std::size_t transition) {
    return minimize(member_automaton(net, transition, identity_order(net.transitions.at(transition))));
}

FullnessResult check_fullness(const ColouredNet& net, const std::vector<std::size_t>& members) {
    if (members.empty()) throw std::invalid_argument("empty transition class");
    const auto f = input_vector(net, members.front());
    FullnessResult result;
    for (auto t : members) {
        if (input_vector(net, t) != f) throw std::invalid_argument("class members differ in their input vectors");
        const auto& tr = net.transitions[t];
        bool all = std::any_of(tr.inputs.begin(), tr.inputs.end(), [](const auto& a) { return a.allCopies > 0; });
        if (tr.assumedNonFull || all) {
            result.status = FullnessResult::Status::AssumedNonFull;
            result.reason = "transition '" + tr.name + "' uses an inscription outside the analysed subset";
            return result;
        }
        if (orderings(tr, kMaxTokenOrderings) > kMaxTokenOrderings) {
            result.status = FullnessResult::Status::AssumedNonFull;
            result.reason = "transition '" + tr.name + "' consumes too many tokens to reorder";
            return result;
        }
    }

    std::optional<ModeAutomaton> acc;
    for (auto t : members) {
        auto order = identity_order(net.transitions[t]);
        do {
            auto a = member_automaton(net, t, order);
            acc = acc ? minimize(product(*acc, a, Combiner::disjunction())) : minimize(a);
            if (is_universal(*acc)) break;
        } while (reorder_tokens(order));
        if (is_universal(*acc)) break;
    }
    result.automaton = std::move(*acc);
    result.status = is_universal(result.automaton) ? FullnessResult::Status::Full : FullnessResult::Status::NotFull;
    return result;
}

bool is_full(const ColouredNet& net, const std::vector<std::size_t>& members) {
    return check_fullness(net, members).full();
}

std::vector<std::size_t> SkeletonAnalysis::non_full_minimal() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < classification.minimal.size(); ++i)
        if (!minimalResults[i].full()) out.push_back(classification.minimal[i]);
    return out;
}

SkeletonAnalysis analyze_skeleton(const ColouredNet& net) {
    SkeletonAnalysis s;
    s.classification = transition_classes(net);
    s.preserving = true;
    for (auto c : s.classification.minimal) {
        s.minimalResults.push_back(check_fullness(net, s.classification.classes[c]));
        s.preserving = s.preserving && s.minimalResults.back().full();
    }
    return s;
}

bool has_deadlock_preserving_skeleton(const ColouredNet& net) { return analyze_skeleton(net).preserving; }

bool has_firing_mode(const ColouredNet& net, std::size_t transition) {
    const auto& tr = net.transitions.at(transition);
    if (tr.guard.extensional()) return !tr.guard.modes().empty();
    return !is_empty(consumption_automaton(net, transition));
}

ColouredNet prune_dead_transitions(const ColouredNet& net, std::vector<std::size_t>* kept) {
    ColouredNet out;
    out.places = net.places;
    if (kept) kept->clear();
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        if (has_firing_mode(net, t)) {
            out.transitions.push_back(net.transitions[t]);
            if (kept) kept->push_back(t);
        }
    return out;
}

std::optional<std::uint64_t> multichoose(std::uint64_t n, std::uint64_t k) {
    if (k == 0) return 1;
    if (n == 0) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n + i - 1) is divisible by i; split i across both factors.
        const auto g = std::gcd(r, i);
        const auto top = n + i - 1;
        if (top < n) return std::nullopt;
        if (__builtin_mul_overflow(r / g, top / (i / g), &r)) return std::nullopt;
    }
    return r;
}

Certificate fullness_certificate(const ColouredNet& net, const std::vector<std::size_t>& members,
                                 std::size_t modeCap) {
    if (members.empty()) throw std::invalid_argument("empty transition class");
    Certificate cert;
    const auto f = input_vector(net, members.front());
    std::optional<std::uint64_t> product = 1;
    for (std::size_t p = 0; p < f.size() && product; ++p) {
        auto c = multichoose(net.places[p].domain.size(), f[p]);
        if (!c) product.reset();
        else {
            std::uint64_t r = 0;
            if (__builtin_mul_overflow(*product, *c, &r)) product.reset();
            else product = r;
        }
    }
    cert.distributions = product;

    std::set<std::vector<std::vector<std::size_t>>> patterns;
    for (auto t : members) {
        const auto& tr = net.transitions[t];
        auto layout = variable_layout(net, t);
        for (const auto& mode : firing_modes(net, t, modeCap)) {
            std::vector<std::vector<std::size_t>> consumed;
            for (std::size_t a = 0; a < tr.inputs.size(); ++a) {
                const auto& arc = tr.inputs[a];
                const auto& dom = net.places[arc.place].domain;
                std::vector<std::vector<std::size_t>> comps(arc.tokens.size(),
                                                            std::vector<std::size_t>(dom.arity()));
                for (std::size_t i = 0; i < layout.size(); ++i)
                    if (layout[i].role == VariableSlot::Role::Input && layout[i].arc == a)
                        comps[layout[i].token][layout[i].component] = mode.colours[i];
                std::vector<std::size_t> colours;
                for (const auto& c : comps) colours.push_back(dom.encode(c));
                for (Tokens k = 0; k < arc.allCopies; ++k)
                    for (std::size_t c = 0; c < dom.size(); ++c) colours.push_back(c);
                std::sort(colours.begin(), colours.end());
                consumed.push_back(std::move(colours));
            }
            patterns.insert(std::move(consumed));
        }
    }
    cert.modes = patterns.size();
    if (cert.distributions) cert.certified = *cert.distributions == cert.modes;
    return cert;
}

std::vector<Certificate> folded_fullness_check(const ColouredNet& net) {
    auto tc = transition_classes(net);
    std::vector<Certificate> out;
    for (auto c : tc.minimal) out.push_back(fullness_certificate(net, tc.classes[c]));
    return out;
}

} // namespace skel
