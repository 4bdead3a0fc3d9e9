#include "skel/automaton.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace skel {

namespace {

std::vector<AutomatonEdge> merge_edges(std::vector<AutomatonEdge> edges) {
    std::sort(edges.begin(), edges.end(),
              [](const AutomatonEdge& a, const AutomatonEdge& b) { return a.label.lo < b.label.lo; });
    std::vector<AutomatonEdge> out;
    for (const auto& e : edges) {
        if (!out.empty() && out.back().target == e.target && out.back().label.hi + 1 == e.label.lo)
            out.back().label.hi = e.label.hi;
        else
            out.push_back(e);
    }
    return out;
}

// Dead chain from `level` to the last level; returns the state at `level`.
std::uint32_t add_dead_chain(ModeAutomaton& a, std::size_t level) {
    auto next = static_cast<std::uint32_t>(a.states.size());
    a.states.push_back({static_cast<std::uint32_t>(a.variables.size()), false, std::nullopt, {}});
    for (std::size_t l = a.variables.size(); l-- > level;) {
        AutomatonState s;
        s.level = static_cast<std::uint32_t>(l);
        s.edges.push_back({{a.variables[l].lo, a.variables[l].hi}, next});
        next = static_cast<std::uint32_t>(a.states.size());
        a.states.push_back(std::move(s));
    }
    return next;
}

} // namespace

std::uint32_t ModeAutomaton::run(std::span<const int> values) const {
    if (values.size() != variables.size())
        throw std::invalid_argument("automaton expects " + std::to_string(variables.size()) + " values");
    std::uint32_t q = initial;
    for (int v : values) {
        const auto& edges = states[q].edges;
        auto it = std::find_if(edges.begin(), edges.end(), [v](const auto& e) { return e.label.contains(v); });
        if (it == edges.end()) throw std::out_of_range("value " + std::to_string(v) + " outside domain");
        q = it->target;
    }
    return q;
}

bool ModeAutomaton::accepts(std::span<const int> values) const { return states[run(values)].final; }

std::size_t ModeAutomaton::states_at_level(std::size_t level) const {
    return static_cast<std::size_t>(
        std::count_if(states.begin(), states.end(), [level](const auto& s) { return s.level == level; }));
}

void ModeAutomaton::check_invariants() const {
    if (initial >= states.size()) throw std::logic_error("initial state out of range");
    if (states[initial].level != 0) throw std::logic_error("initial state not at level 0");
    for (std::size_t i = 1; i < variables.size(); ++i)
        if (variables[i - 1].rank >= variables[i].rank) throw std::logic_error("variables not sorted by rank");
    const auto n = variables.size();
    for (std::size_t q = 0; q < states.size(); ++q) {
        const auto& s = states[q];
        if (s.level > n) throw std::logic_error("state level out of range");
        if (s.level == n) {
            if (!s.edges.empty()) throw std::logic_error("last-level state with edges");
            continue;
        }
        if (s.final) throw std::logic_error("final state before the last level");
        const auto& var = variables[s.level];
        int expect = var.lo;
        for (const auto& e : s.edges) {
            if (e.label.lo != expect || e.label.hi < e.label.lo)
                throw std::logic_error("edges of state " + std::to_string(q) + " do not partition the domain");
            if (e.target >= states.size() || states[e.target].level != s.level + 1)
                throw std::logic_error("edge skips a level");
            expect = e.label.hi + 1;
        }
        if (expect != var.hi + 1)
            throw std::logic_error("edges of state " + std::to_string(q) + " do not cover the domain");
    }
}

ModeAutomaton constant_automaton(std::vector<AutomatonVariable> variables, bool accept) {
    ModeAutomaton a;
    a.variables = std::move(variables);
    std::uint32_t next = 0;
    a.states.push_back({static_cast<std::uint32_t>(a.variables.size()), accept, std::nullopt, {}});
    for (std::size_t l = a.variables.size(); l-- > 0;) {
        AutomatonState s;
        s.level = static_cast<std::uint32_t>(l);
        s.edges.push_back({{a.variables[l].lo, a.variables[l].hi}, next});
        next = static_cast<std::uint32_t>(a.states.size());
        a.states.push_back(std::move(s));
    }
    a.initial = next;
    return a;
}

ModeAutomaton term_automaton(const Term& term, const AutomatonVariable& variable) {
    ModeAutomaton a;
    if (!term.is_variable()) {
        a.states.push_back({0, true, term.constant + term.shift, {}});
        return a;
    }
    if (variable.hi < variable.lo) throw std::invalid_argument("empty domain for " + variable.name);
    a.variables.push_back(variable);
    a.states.push_back({0, false, std::nullopt, {}});
    for (int v = variable.lo; v <= variable.hi; ++v) {
        auto q = static_cast<std::uint32_t>(a.states.size());
        a.states.push_back({1, true, wrap(v + term.shift, variable.lo, variable.hi), {}});
        a.states[0].edges.push_back({{v, v}, q});
    }
    return a;
}

ModeAutomaton insert_variable(const ModeAutomaton& a, const AutomatonVariable& variable) {
    for (const auto& v : a.variables)
        if (v.rank == variable.rank || v.name == variable.name)
            throw std::invalid_argument("variable " + variable.name + " already read");
    std::size_t pos = 0;
    while (pos < a.variables.size() && a.variables[pos].rank < variable.rank) ++pos;

    ModeAutomaton out;
    out.variables = a.variables;
    out.variables.insert(out.variables.begin() + static_cast<std::ptrdiff_t>(pos), variable);
    out.states = a.states;
    std::vector<std::uint32_t> spine(a.states.size(), UINT32_MAX);
    for (std::uint32_t q = 0; q < a.states.size(); ++q) {
        if (a.states[q].level >= pos) ++out.states[q].level;
        if (a.states[q].level == pos) {
            spine[q] = static_cast<std::uint32_t>(out.states.size());
            out.states.push_back({static_cast<std::uint32_t>(pos), false, std::nullopt,
                                  {{{variable.lo, variable.hi}, q}}});
        }
    }
    for (std::uint32_t q = 0; q < a.states.size(); ++q)
        for (auto& e : out.states[q].edges)
            if (spine[e.target] != UINT32_MAX) e.target = spine[e.target];
    out.initial = spine[a.initial] != UINT32_MAX ? spine[a.initial] : a.initial;
    return out;
}

std::pair<ModeAutomaton, ModeAutomaton> harmonize(const ModeAutomaton& a, const ModeAutomaton& b) {
    auto extend = [](ModeAutomaton x, const ModeAutomaton& other) {
        for (const auto& v : other.variables) {
            bool present = std::any_of(x.variables.begin(), x.variables.end(),
                                       [&](const auto& w) { return w.rank == v.rank; });
            if (!present) x = insert_variable(x, v);
        }
        return x;
    };
    return {extend(a, b), extend(b, a)};
}

ModeAutomaton product(const ModeAutomaton& a, const ModeAutomaton& b, Combiner combiner) {
    if (a.variables.size() != b.variables.size())
        throw std::invalid_argument("product of automata over different variables");
    for (std::size_t i = 0; i < a.variables.size(); ++i)
        if (a.variables[i].rank != b.variables[i].rank || a.variables[i].lo != b.variables[i].lo ||
            a.variables[i].hi != b.variables[i].hi)
            throw std::invalid_argument("product of automata over different variables");

    ModeAutomaton out;
    out.variables = a.variables;
    const auto n = a.variables.size();
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
    auto intern = [&](std::uint32_t p, std::uint32_t q) {
        auto key = (std::uint64_t{p} << 32) | q;
        auto [it, fresh] = index.try_emplace(key, static_cast<std::uint32_t>(out.states.size()));
        if (fresh) {
            AutomatonState s;
            s.level = a.states[p].level;
            if (s.level == n) {
                const auto& sp = a.states[p];
                const auto& sq = b.states[q];
                switch (combiner.kind) {
                case Combiner::Kind::And: s.final = sp.final && sq.final; break;
                case Combiner::Kind::Or: s.final = sp.final || sq.final; break;
                case Combiner::Kind::Compare:
                    if (!sp.value || !sq.value) throw std::invalid_argument("comparison of valueless automata");
                    s.final = sp.final && sq.final && compare(combiner.op, *sp.value, *sq.value);
                    break;
                }
            }
            out.states.push_back(std::move(s));
            queue.emplace_back(p, q);
        }
        return it->second;
    };
    out.initial = intern(a.initial, b.initial);
    while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        auto self = index.at((std::uint64_t{p} << 32) | q);
        std::vector<AutomatonEdge> edges;
        for (const auto& e1 : a.states[p].edges)
            for (const auto& e2 : b.states[q].edges) {
                Interval i{std::max(e1.label.lo, e2.label.lo), std::min(e1.label.hi, e2.label.hi)};
                if (i.lo <= i.hi) edges.push_back({i, intern(e1.target, e2.target)});
            }
        out.states[self].edges = merge_edges(std::move(edges));
    }
    return out;
}

ModeAutomaton minimize(const ModeAutomaton& a) {
    const auto n = a.variables.size();
    std::vector<std::vector<std::uint32_t>> byLevel(n + 1);
    for (std::uint32_t q = 0; q < a.states.size(); ++q) byLevel[a.states[q].level].push_back(q);

    // Class id per state; classes are numbered globally.
    std::vector<std::uint32_t> cls(a.states.size());
    std::vector<std::uint32_t> representative;
    {
        std::map<std::pair<bool, std::optional<int>>, std::uint32_t> keys;
        for (auto q : byLevel[n]) {
            auto [it, fresh] = keys.try_emplace({a.states[q].final, a.states[q].value},
                                                static_cast<std::uint32_t>(representative.size()));
            if (fresh) representative.push_back(q);
            cls[q] = it->second;
        }
    }
    for (std::size_t l = n; l-- > 0;) {
        std::map<std::vector<std::tuple<int, int, std::uint32_t>>, std::uint32_t> keys;
        for (auto q : byLevel[l]) {
            std::vector<AutomatonEdge> mapped;
            for (const auto& e : a.states[q].edges) mapped.push_back({e.label, cls[e.target]});
            std::vector<std::tuple<int, int, std::uint32_t>> key;
            for (const auto& e : merge_edges(std::move(mapped))) key.emplace_back(e.label.lo, e.label.hi, e.target);
            auto [it, fresh] = keys.try_emplace(std::move(key), static_cast<std::uint32_t>(representative.size()));
            if (fresh) representative.push_back(q);
            cls[q] = it->second;
        }
    }

    ModeAutomaton out;
    out.variables = a.variables;
    std::unordered_map<std::uint32_t, std::uint32_t> fresh;
    std::deque<std::uint32_t> queue;
    auto intern = [&](std::uint32_t c) {
        auto [it, added] = fresh.try_emplace(c, static_cast<std::uint32_t>(out.states.size()));
        if (added) {
            const auto& rep = a.states[representative[c]];
            out.states.push_back({rep.level, rep.final, rep.value, {}});
            queue.push_back(c);
        }
        return it->second;
    };
    out.initial = intern(cls[a.initial]);
    while (!queue.empty()) {
        auto c = queue.front();
        queue.pop_front();
        auto self = fresh.at(c);
        std::vector<AutomatonEdge> mapped;
        for (const auto& e : a.states[representative[c]].edges) mapped.push_back({e.label, cls[e.target]});
        mapped = merge_edges(std::move(mapped));
        for (auto& e : mapped) e.target = intern(e.target);
        out.states[self].edges = std::move(mapped);
    }
    return out;
}

ModeAutomaton expression_automaton(const Expr& e, const std::map<std::string, AutomatonVariable>& variables) {
    auto lookup = [&](const Term& t) {
        if (!t.is_variable()) return AutomatonVariable{};
        auto it = variables.find(t.variable);
        if (it == variables.end()) throw std::invalid_argument("unknown guard variable " + t.variable);
        return it->second;
    };
    switch (e.kind) {
    case Expr::Kind::True: return constant_automaton({}, true);
    case Expr::Kind::False: return constant_automaton({}, false);
    case Expr::Kind::Compare: {
        auto [l, r] = harmonize(term_automaton(e.lhs, lookup(e.lhs)), term_automaton(e.rhs, lookup(e.rhs)));
        return minimize(product(l, r, Combiner::comparison(e.op)));
    }
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        auto combiner = e.kind == Expr::Kind::And ? Combiner::conjunction() : Combiner::disjunction();
        std::optional<ModeAutomaton> acc;
        for (const auto& c : e.children) {
            auto part = expression_automaton(c, variables);
            if (!acc) {
                acc = std::move(part);
                continue;
            }
            auto [l, r] = harmonize(*acc, part);
            acc = minimize(product(l, r, combiner));
        }
        return acc ? *acc : constant_automaton({}, e.kind == Expr::Kind::And);
    }
    }
    throw std::logic_error("unreachable expression kind");
}

ModeAutomaton project_prefix(const ModeAutomaton& a, std::size_t keep) {
    const auto n = a.variables.size();
    if (keep > n) throw std::invalid_argument("projection keeps more variables than read");
    // live[q]: an accepting state is reachable from q.
    std::vector<char> live(a.states.size(), 0);
    std::vector<std::uint32_t> order(a.states.size());
    for (std::uint32_t q = 0; q < order.size(); ++q) order[q] = q;
    std::sort(order.begin(), order.end(),
              [&](auto x, auto y) { return a.states[x].level > a.states[y].level; });
    for (auto q : order) {
        const auto& s = a.states[q];
        if (s.level == n) live[q] = s.final;
        else
            for (const auto& e : s.edges) live[q] = live[q] || live[e.target];
    }
    ModeAutomaton out;
    out.variables.assign(a.variables.begin(), a.variables.begin() + static_cast<std::ptrdiff_t>(keep));
    out.states.reserve(a.states.size());
    for (std::uint32_t q = 0; q < a.states.size(); ++q) {
        const auto& s = a.states[q];
        if (s.level > keep) {
            // Placeholder kept for index stability; dropped by minimize.
            out.states.push_back({static_cast<std::uint32_t>(keep), false, std::nullopt, {}});
        } else if (s.level == keep) {
            out.states.push_back({s.level, live[q] != 0, std::nullopt, {}});
        } else {
            out.states.push_back({s.level, false, std::nullopt, s.edges});
        }
    }
    out.initial = a.initial;
    return minimize(out);
}

ModeAutomaton sequence_automaton(std::vector<AutomatonVariable> variables,
                                 const std::vector<std::vector<int>>& accepted) {
    ModeAutomaton a;
    a.variables = std::move(variables);
    const auto n = a.variables.size();
    // Trie with explicit children per value; completed with dead chains afterwards.
    std::vector<std::map<int, std::uint32_t>> children;
    auto node = [&](std::uint32_t level) {
        a.states.push_back({level, false, std::nullopt, {}});
        children.emplace_back();
        return static_cast<std::uint32_t>(a.states.size() - 1);
    };
    a.initial = node(0);
    for (const auto& seq : accepted) {
        if (seq.size() != n) throw std::invalid_argument("sequence length differs from variable count");
        std::uint32_t q = a.initial;
        for (std::size_t l = 0; l < n; ++l) {
            if (seq[l] < a.variables[l].lo || seq[l] > a.variables[l].hi)
                throw std::invalid_argument("sequence value outside domain");
            auto it = children[q].find(seq[l]);
            if (it == children[q].end()) {
                auto c = node(static_cast<std::uint32_t>(l + 1));
                it = children[q].emplace(seq[l], c).first;
            }
            q = it->second;
        }
        a.states[q].final = true;
    }
    std::vector<std::uint32_t> dead(n + 1, UINT32_MAX);
    const auto trieSize = static_cast<std::uint32_t>(a.states.size());
    for (std::uint32_t q = 0; q < trieSize; ++q) {
        auto level = a.states[q].level;
        if (level == n) continue;
        const auto& var = a.variables[level];
        std::vector<AutomatonEdge> edges;
        int next = var.lo;
        for (auto [v, c] : children[q]) {
            if (v > next) {
                if (dead[level + 1] == UINT32_MAX) dead[level + 1] = add_dead_chain(a, level + 1);
                edges.push_back({{next, v - 1}, dead[level + 1]});
            }
            edges.push_back({{v, v}, c});
            next = v + 1;
        }
        if (next <= var.hi) {
            if (dead[level + 1] == UINT32_MAX) dead[level + 1] = add_dead_chain(a, level + 1);
            edges.push_back({{next, var.hi}, dead[level + 1]});
        }
        a.states[q].edges = std::move(edges);
    }
    return minimize(a);
}

bool is_universal(const ModeAutomaton& a) {
    auto m = minimize(a);
    if (m.states.size() != m.levels()) return false;
    for (const auto& s : m.states) {
        if (s.level == m.variables.size()) {
            if (!s.final) return false;
        } else if (s.edges.size() != 1) {
            return false;
        }
    }
    return true;
}

bool is_empty(const ModeAutomaton& a) {
    auto m = minimize(a);
    return std::none_of(m.states.begin(), m.states.end(), [](const auto& s) { return s.final; });
}

std::string to_dot(const ModeAutomaton& a, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n  rankdir=LR;\n";
    for (std::size_t q = 0; q < a.states.size(); ++q) {
        const auto& s = a.states[q];
        out << "  q" << q << " [shape=" << (s.final ? "doublecircle" : "circle") << ", label=\"q" << q;
        if (s.value) out << "\\nV=" << *s.value;
        out << "\"];\n";
    }
    out << "  start [shape=point];\n  start -> q" << a.initial << ";\n";
    for (std::size_t q = 0; q < a.states.size(); ++q)
        for (const auto& e : a.states[q].edges) {
            out << "  q" << q << " -> q" << e.target << " [label=\"";
            if (e.label.lo == e.label.hi) out << e.label.lo;
            else out << '[' << e.label.lo << ',' << e.label.hi << ']';
            out << "\"];\n";
        }
    out << "}\n";
    return out.str();
}

} // namespace skel
