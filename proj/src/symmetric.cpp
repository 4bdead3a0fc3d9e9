#include "skel/symmetric.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "skel/error.hpp"

namespace skel {

namespace {

struct Builder {
    const SymmetricNet& net;
    const HighLevelTransition& tr;
    std::set<std::string> taken;   // every name in use at this transition
    std::set<std::string> onArcs;  // variables bound by an arc so far
    std::map<std::string, BasicSort> sorts;
    std::vector<Expr> extensions;
    std::size_t fresh = 0;
    bool nonFull = false;

    std::string fresh_name() {
        std::string name;
        do name = "_v" + std::to_string(++fresh);
        while (taken.count(name));
        taken.insert(name);
        return name;
    }

    const ColourDomain& domain(std::size_t place) const {
        if (place >= net.places.size())
            throw std::invalid_argument("arc of '" + tr.name + "' has an unknown place");
        return net.places[place].domain;
    }

    void note_sort(const std::string& var, const BasicSort& sort) {
        auto [it, fresh] = sorts.try_emplace(var, sort);
        if (!fresh && it->second.size() != sort.size())
            throw std::invalid_argument("variable '" + var + "' at '" + tr.name + "' is used with two sorts");
    }

    bool plain(const HighLevelArc& arc, std::set<std::string>& seen) const {
        for (const auto& item : arc.items) {
            if (item.all) continue;
            if (item.negative || item.multiplicity != 1) return false;
            for (const auto& term : item.tuple) {
                if (!term.is_variable() || term.shift != 0) return false;
                if (onArcs.count(term.variable) || !seen.insert(term.variable).second) return false;
            }
        }
        return true;
    }

    ColouredArc convert(const HighLevelArc& arc) {
        const auto& dom = domain(arc.place);
        ColouredArc out;
        out.place = arc.place;
        for (const auto& item : arc.items) {
            if (item.multiplicity == 0) continue;
            if (!item.all && item.tuple.size() != dom.arity())
                throw std::invalid_argument("tuple arity mismatch on arc between '" + tr.name + "' and '" +
                                            net.places[arc.place].name + "'");
            for (std::size_t c = 0; !item.all && c < item.tuple.size(); ++c)
                if (item.tuple[c].is_variable()) note_sort(item.tuple[c].variable, dom.components[c]);
        }

        for (const auto& item : arc.items)
            if (item.all) {
                if (item.negative)
                    throw UnsupportedConstruct("subtracted all-colours term at '" + tr.name + "'");
                out.allCopies += item.multiplicity;
                if (item.multiplicity) nonFull = true;
            }

        std::set<std::string> seen;
        if (plain(arc, seen)) {
            for (const auto& item : arc.items)
                if (item.multiplicity && !item.all) {
                    Token tok;
                    for (const auto& term : item.tuple) tok.push_back(term.variable);
                    out.tokens.push_back(std::move(tok));
                }
            onArcs.insert(seen.begin(), seen.end());
            return out;
        }

        std::vector<const std::vector<Term>*> positive;
        std::vector<const std::vector<Term>*> negative;
        for (const auto& item : arc.items) {
            if (item.all) continue;
            for (Tokens k = 0; k < item.multiplicity; ++k)
                (item.negative ? negative : positive).push_back(&item.tuple);
        }
        if (negative.size() > positive.size())
            throw std::invalid_argument("arc between '" + tr.name + "' and '" + net.places[arc.place].name +
                                        "' subtracts more terms than it adds");
        const std::size_t width = positive.size() - negative.size();

        // Slots receiving the positive terms: fresh tokens first, then the
        // subtracted terms, which must be matched by some positive term.
        std::vector<std::vector<Term>> slots;
        for (std::size_t k = 0; k < width; ++k) {
            Token tok;
            std::vector<Term> terms;
            for (std::size_t c = 0; c < dom.arity(); ++c) {
                auto name = fresh_name();
                sorts.emplace(name, dom.components[c]);
                tok.push_back(name);
                terms.push_back(Term::var(name));
            }
            onArcs.insert(tok.begin(), tok.end());
            out.tokens.push_back(std::move(tok));
            slots.push_back(std::move(terms));
        }
        for (const auto* n : negative) slots.push_back(*n);

        auto matching = [&](const std::vector<std::size_t>& perm) {
            std::vector<Expr> eqs;
            for (std::size_t s = 0; s < slots.size(); ++s)
                for (std::size_t c = 0; c < dom.arity(); ++c) {
                    const auto& lhs = slots[s][c];
                    const auto& rhs = (*positive[perm[s]])[c];
                    if (lhs == rhs) continue;
                    eqs.push_back(Expr::comparison(lhs, CompareOp::Eq, rhs));
                }
            return Expr::conjunction(std::move(eqs));
        };

        std::vector<std::size_t> perm(positive.size());
        std::iota(perm.begin(), perm.end(), 0);
        if (positive.size() > kMaxPermutedTerms) {
            if (!negative.empty())
                throw UnsupportedConstruct("formal sum with " + std::to_string(positive.size()) +
                                           " terms and subtraction at '" + tr.name + "'");
            nonFull = true;
            extensions.push_back(matching(perm));
            return out;
        }
        std::vector<Expr> disjuncts;
        do {
            auto e = matching(perm);
            if (std::find(disjuncts.begin(), disjuncts.end(), e) == disjuncts.end()) disjuncts.push_back(std::move(e));
        } while (std::next_permutation(perm.begin(), perm.end()));
        extensions.push_back(Expr::disjunction(std::move(disjuncts)));
        return out;
    }
};

void collect_names(const HighLevelArc& arc, std::set<std::string>& names) {
    for (const auto& item : arc.items)
        for (const auto& t : item.tuple)
            if (t.is_variable()) names.insert(t.variable);
}

std::vector<HighLevelArc> merged(std::vector<HighLevelArc> arcs) {
    std::stable_sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) { return a.place < b.place; });
    std::vector<HighLevelArc> out;
    for (auto& a : arcs) {
        if (!out.empty() && out.back().place == a.place)
            out.back().items.insert(out.back().items.end(), a.items.begin(), a.items.end());
        else
            out.push_back(std::move(a));
    }
    return out;
}

} // namespace

ColouredNet simplify_inscriptions(const SymmetricNet& net) {
    ColouredNet out;
    out.places = net.places;
    for (const auto& tr : net.transitions) {
        Builder b{net, tr, {}, {}, {}, {}, 0, tr.assumedNonFull};
        auto inputs = merged(tr.inputs);
        auto outputs = merged(tr.outputs);
        for (const auto& a : inputs) collect_names(a, b.taken);
        for (const auto& a : outputs) collect_names(a, b.taken);
        for (const auto& v : variables_of(tr.guard)) b.taken.insert(v);

        ColouredTransition ct;
        ct.name = tr.name;
        for (const auto& a : inputs) ct.inputs.push_back(b.convert(a));
        for (const auto& a : outputs) ct.outputs.push_back(b.convert(a));
        auto drop_empty = [](std::vector<ColouredArc>& arcs) {
            std::erase_if(arcs, [](const auto& a) { return a.tokens.empty() && a.allCopies == 0; });
        };
        drop_empty(ct.inputs);
        drop_empty(ct.outputs);
        ct.assumedNonFull = b.nonFull;

        if (tr.extensional) {
            if (!b.extensions.empty())
                throw std::invalid_argument("extensional guard of '" + tr.name + "' needs plain variable arcs");
            ct.guard.form = tr.modes;
        } else {
            std::vector<Expr> parts{tr.guard};
            for (auto& e : b.extensions) parts.push_back(std::move(e));
            ct.guard.form = Expr::conjunction(std::move(parts));
            for (const auto& v : tr.variables)
                if (!b.onArcs.count(v.name)) ct.hidden.push_back(v);
            for (const auto& v : variables_of(ct.guard.expression())) {
                if (b.onArcs.count(v)) continue;
                if (std::any_of(ct.hidden.begin(), ct.hidden.end(), [&](const auto& h) { return h.name == v; }))
                    continue;
                auto declared = net.variables.find(v);
                auto inferred = b.sorts.find(v);
                if (declared != net.variables.end())
                    ct.hidden.push_back({v, declared->second});
                else if (inferred != b.sorts.end())
                    ct.hidden.push_back({v, inferred->second});
                else
                    throw std::invalid_argument("variable '" + v + "' at '" + tr.name + "' has no sort");
            }
        }
        out.transitions.push_back(std::move(ct));
    }
    out.validate();
    return out;
}

SymmetricNet lift(const ColouredNet& net) {
    SymmetricNet out;
    out.places = net.places;
    for (const auto& tr : net.transitions) {
        HighLevelTransition h;
        h.name = tr.name;
        auto arcs = [](const std::vector<ColouredArc>& list) {
            std::vector<HighLevelArc> result;
            for (const auto& a : list) {
                HighLevelArc arc{a.place, {}};
                for (const auto& tok : a.tokens) {
                    InscriptionItem item;
                    for (const auto& v : tok) item.tuple.push_back(Term::var(v));
                    arc.items.push_back(std::move(item));
                }
                if (a.allCopies) arc.items.push_back({a.allCopies, false, true, {}});
                result.push_back(std::move(arc));
            }
            return result;
        };
        h.inputs = arcs(tr.inputs);
        h.outputs = arcs(tr.outputs);
        h.assumedNonFull = tr.assumedNonFull;
        if (tr.guard.extensional()) {
            h.extensional = true;
            h.modes = tr.guard.modes();
        } else {
            h.guard = tr.guard.expression();
        }
        h.variables = tr.hidden;
        out.transitions.push_back(std::move(h));
    }
    return out;
}

} // namespace skel
