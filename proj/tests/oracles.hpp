#pragma once

// Brute-force reference computations, written without the automata and
// exploration code they check.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skel/expr.hpp"
#include "skel/net.hpp"

namespace skel::testing {

struct OracleVariable {
    std::string name;
    const BasicSort* sort;
    int arc = -1; // input arc index, -1 otherwise
    std::size_t component = 0;
    std::size_t token = 0;
};

// Every assignment satisfying the guard, as colour indices per variable.
// Arc variables come first, in arc order; hidden variables last.
inline std::vector<std::vector<std::size_t>> oracle_assignments(const ColouredNet& net, std::size_t t,
                                                                std::vector<OracleVariable>& vars) {
    const auto& tr = net.transitions[t];
    vars.clear();
    for (std::size_t a = 0; a < tr.inputs.size(); ++a) {
        const auto& dom = net.places[tr.inputs[a].place].domain;
        for (std::size_t k = 0; k < tr.inputs[a].tokens.size(); ++k)
            for (std::size_t c = 0; c < dom.arity(); ++c)
                vars.push_back({tr.inputs[a].tokens[k][c], &dom.components[c], static_cast<int>(a), c, k});
    }
    for (const auto& a : tr.outputs) {
        const auto& dom = net.places[a.place].domain;
        for (const auto& tok : a.tokens)
            for (std::size_t c = 0; c < dom.arity(); ++c) vars.push_back({tok[c], &dom.components[c]});
    }
    const auto arcVars = vars.size();
    for (const auto& h : tr.hidden) vars.push_back({h.name, &h.sort});

    std::vector<std::vector<std::size_t>> out;
    if (tr.guard.extensional()) {
        for (const auto& m : tr.guard.modes()) out.push_back(m.colours);
        vars.resize(arcVars);
        return out;
    }
    std::vector<std::size_t> idx(vars.size(), 0);
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < vars.size(); ++i) position[vars[i].name] = i;
    Valuation val = [&](std::string_view n) -> std::optional<VariableValue> {
        auto it = position.find(std::string(n));
        if (it == position.end()) return std::nullopt;
        const auto* s = vars[it->second].sort;
        return VariableValue{s->value(idx[it->second]), s->lo(), s->hi()};
    };
    while (true) {
        if (evaluate(tr.guard.expression(), val).value_or(false)) out.push_back(idx);
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < vars[i].sort->size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return out;
}

// Consumed multiset per input arc (sorted colour lists).
using Consumption = std::vector<std::vector<std::size_t>>;

inline std::set<Consumption> oracle_consumptions(const ColouredNet& net, std::size_t t) {
    std::vector<OracleVariable> vars;
    auto assignments = oracle_assignments(net, t, vars);
    const auto& tr = net.transitions[t];
    std::set<Consumption> out;
    for (const auto& g : assignments) {
        Consumption c(tr.inputs.size());
        std::vector<std::vector<std::vector<std::size_t>>> comps(tr.inputs.size());
        for (std::size_t a = 0; a < tr.inputs.size(); ++a)
            comps[a].assign(tr.inputs[a].tokens.size(),
                            std::vector<std::size_t>(net.places[tr.inputs[a].place].domain.arity()));
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i].arc >= 0) comps[vars[i].arc][vars[i].token][vars[i].component] = g[i];
        for (std::size_t a = 0; a < tr.inputs.size(); ++a) {
            const auto& dom = net.places[tr.inputs[a].place].domain;
            for (const auto& tok : comps[a]) c[a].push_back(dom.encode(tok));
            std::sort(c[a].begin(), c[a].end());
        }
        out.insert(std::move(c));
    }
    return out;
}

// Full-class definition checked directly: every distribution of colours
// matching the input vector is consumed by some member. nullopt when the
// class uses all-colour arcs or has more than `limit` distributions.
inline std::optional<bool> oracle_full(const ColouredNet& net, const std::vector<std::size_t>& members,
                                       std::size_t limit = 100000) {
    const auto& first = net.transitions[members.front()];
    for (auto t : members) {
        const auto& tr = net.transitions[t];
        if (tr.assumedNonFull) return std::nullopt;
        for (const auto& a : tr.inputs)
            if (a.allCopies) return std::nullopt;
    }
    // Per input arc: all sorted colour lists of the arc's size.
    std::vector<std::vector<std::vector<std::size_t>>> choices;
    std::size_t total = 1;
    for (const auto& a : first.inputs) {
        const auto n = net.places[a.place].domain.size();
        std::vector<std::vector<std::size_t>> lists;
        std::vector<std::size_t> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t from) {
            if (cur.size() == a.tokens.size()) {
                lists.push_back(cur);
                return;
            }
            for (std::size_t c = from; c < n; ++c) {
                cur.push_back(c);
                rec(c);
                cur.pop_back();
            }
        };
        rec(0);
        total *= lists.size();
        if (total > limit) return std::nullopt;
        choices.push_back(std::move(lists));
    }
    std::set<Consumption> covered;
    for (auto t : members) {
        auto c = oracle_consumptions(net, t);
        covered.insert(c.begin(), c.end());
    }
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
        Consumption d;
        for (std::size_t a = 0; a < choices.size(); ++a) d.push_back(choices[a][idx[a]]);
        if (!covered.count(d)) return false;
        std::size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return true;
}

} // namespace skel::testing
