#include "skel/net.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "guard_eval.hpp"
#include "skel/error.hpp"

namespace skel {

namespace {

void accumulate(std::vector<Arc>& arcs, std::size_t place, Tokens weight) {
    if (weight == 0) return;
    auto it = std::lower_bound(arcs.begin(), arcs.end(), place,
                               [](const Arc& a, std::size_t p) { return a.place < p; });
    if (it != arcs.end() && it->place == place) it->weight += weight;
    else arcs.insert(it, Arc{place, weight});
}

Tokens lookup(const std::vector<Arc>& arcs, std::size_t place) {
    auto it = std::lower_bound(arcs.begin(), arcs.end(), place,
                               [](const Arc& a, std::size_t p) { return a.place < p; });
    return it != arcs.end() && it->place == place ? it->weight : 0;
}

template <class Names>
std::optional<std::size_t> find_name(const Names& names, std::string_view name) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

void fail(const std::string& what) { throw std::invalid_argument(what); }

} // namespace

std::size_t PTNet::add_place(std::string name, Tokens tokens) {
    places.push_back(std::move(name));
    initial.push_back(tokens);
    return places.size() - 1;
}

std::size_t PTNet::add_transition(std::string name) {
    transitions.push_back(std::move(name));
    pre.emplace_back();
    post.emplace_back();
    return transitions.size() - 1;
}

void PTNet::add_input(std::size_t place, std::size_t transition, Tokens weight) {
    accumulate(pre.at(transition), place, weight);
}

void PTNet::add_output(std::size_t transition, std::size_t place, Tokens weight) {
    accumulate(post.at(transition), place, weight);
}

Tokens PTNet::weight_in(std::size_t place, std::size_t transition) const {
    return lookup(pre.at(transition), place);
}

Tokens PTNet::weight_out(std::size_t transition, std::size_t place) const {
    return lookup(post.at(transition), place);
}

std::optional<std::size_t> PTNet::find_place(std::string_view name) const {
    return find_name(places, name);
}

std::optional<std::size_t> PTNet::find_transition(std::string_view name) const {
    return find_name(transitions, name);
}

void PTNet::validate() const {
    if (initial.size() != places.size()) fail("initial marking does not cover all places");
    if (pre.size() != transitions.size() || post.size() != transitions.size())
        fail("arc tables do not match the transition count");
    std::unordered_set<std::string_view> seen;
    for (const auto& p : places)
        if (!seen.insert(p).second) fail("duplicate node name '" + p + "'");
    for (const auto& t : transitions)
        if (!seen.insert(t).second) fail("duplicate node name '" + t + "'");
    auto check = [&](const std::vector<Arc>& arcs, const std::string& t) {
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            if (arcs[i].place >= places.size()) fail("arc of '" + t + "' has an unknown place");
            if (arcs[i].weight == 0) fail("arc of '" + t + "' has weight 0");
            if (i && arcs[i - 1].place >= arcs[i].place) fail("arcs of '" + t + "' are not sorted");
        }
    };
    for (std::size_t t = 0; t < transitions.size(); ++t) {
        check(pre[t], transitions[t]);
        check(post[t], transitions[t]);
    }
}

std::optional<std::size_t> ColouredNet::find_place(std::string_view name) const {
    for (std::size_t i = 0; i < places.size(); ++i)
        if (places[i].name == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> ColouredNet::find_transition(std::string_view name) const {
    for (std::size_t i = 0; i < transitions.size(); ++i)
        if (transitions[i].name == name) return i;
    return std::nullopt;
}

void ColouredNet::validate() const {
    std::unordered_set<std::string_view> names;
    for (const auto& p : places) {
        if (!names.insert(p.name).second) fail("duplicate node name '" + p.name + "'");
        if (p.domain.size() == 0) fail("place '" + p.name + "' has an empty colour domain");
        if (p.initial.size() != p.domain.size())
            fail("initial marking of '" + p.name + "' does not match its colour domain");
    }
    for (std::size_t t = 0; t < transitions.size(); ++t) {
        const auto& tr = transitions[t];
        if (!names.insert(tr.name).second) fail("duplicate node name '" + tr.name + "'");
        std::set<std::string> vars;
        auto arcs = [&](const std::vector<ColouredArc>& list) {
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto& a = list[i];
                if (a.place >= places.size()) fail("arc of '" + tr.name + "' has an unknown place");
                if (i && list[i - 1].place >= a.place)
                    fail("arcs of '" + tr.name + "' are not sorted by place or repeat a place");
                for (const auto& tok : a.tokens) {
                    if (tok.size() != places[a.place].domain.arity())
                        fail("token arity mismatch on arc between '" + tr.name + "' and '" +
                             places[a.place].name + "'");
                    for (const auto& v : tok)
                        if (!vars.insert(v).second)
                            fail("variable '" + v + "' occurs twice at '" + tr.name + "'");
                }
            }
        };
        arcs(tr.inputs);
        arcs(tr.outputs);
        const std::size_t arcVars = vars.size();
        for (const auto& h : tr.hidden) {
            if (h.sort.size() == 0) fail("hidden variable '" + h.name + "' has an empty sort");
            if (!vars.insert(h.name).second)
                fail("variable '" + h.name + "' declared twice at '" + tr.name + "'");
        }
        if (tr.guard.extensional()) {
            if (!tr.hidden.empty()) fail("extensional guard of '" + tr.name + "' has hidden variables");
            auto layout = variable_layout(*this, t);
            for (const auto& m : tr.guard.modes()) {
                if (m.colours.size() != arcVars)
                    fail("mode of '" + tr.name + "' does not assign every arc variable");
                for (std::size_t i = 0; i < arcVars; ++i)
                    if (m.colours[i] >= layout[i].sort->size())
                        fail("mode of '" + tr.name + "' uses a colour outside the domain");
            }
        } else {
            for (const auto& v : variables_of(tr.guard.expression()))
                if (!vars.count(v)) fail("guard of '" + tr.name + "' uses unknown variable '" + v + "'");
        }
    }
}

std::vector<std::size_t> colour_offsets(const ColouredNet& net) {
    std::vector<std::size_t> off(net.places.size() + 1, 0);
    for (std::size_t p = 0; p < net.places.size(); ++p)
        off[p + 1] = off[p] + net.places[p].domain.size();
    return off;
}

Marking initial_marking(const ColouredNet& net) {
    Marking m;
    for (const auto& p : net.places) m.insert(m.end(), p.initial.begin(), p.initial.end());
    return m;
}

std::vector<VariableSlot> variable_layout(const ColouredNet& net, std::size_t transition) {
    const auto& tr = net.transitions.at(transition);
    std::vector<VariableSlot> out;
    auto add = [&](const std::vector<ColouredArc>& arcs, VariableSlot::Role role) {
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            const auto& dom = net.places[arcs[a].place].domain;
            for (std::size_t k = 0; k < arcs[a].tokens.size(); ++k)
                for (std::size_t c = 0; c < arcs[a].tokens[k].size(); ++c)
                    out.push_back({arcs[a].tokens[k][c], &dom.components[c], role, a, k, c});
        }
    };
    add(tr.inputs, VariableSlot::Role::Input);
    add(tr.outputs, VariableSlot::Role::Output);
    for (const auto& h : tr.hidden)
        out.push_back({h.name, &h.sort, VariableSlot::Role::Hidden, 0, 0, 0});
    return out;
}

std::size_t arc_variable_count(const ColouredNet& net, std::size_t transition) {
    const auto& tr = net.transitions.at(transition);
    std::size_t n = 0;
    for (const auto* arcs : {&tr.inputs, &tr.outputs})
        for (const auto& a : *arcs)
            n += a.tokens.size() * net.places[a.place].domain.arity();
    return n;
}

namespace detail {

namespace {

CompiledTerm compile(const Term& t, const std::unordered_map<std::string, std::size_t>& slots,
                     const std::vector<VariableSlot>& layout) {
    CompiledTerm c;
    c.shift = t.shift;
    if (!t.is_variable()) {
        c.constant = t.constant + t.shift;
        c.shift = 0;
        return c;
    }
    auto it = slots.find(t.variable);
    if (it == slots.end()) throw std::invalid_argument("unknown guard variable '" + t.variable + "'");
    c.slot = static_cast<int>(it->second);
    c.lo = layout[it->second].sort->lo();
    c.hi = layout[it->second].sort->hi();
    return c;
}

CompiledExpr compile(const Expr& e, const std::unordered_map<std::string, std::size_t>& slots,
                     const std::vector<VariableSlot>& layout) {
    CompiledExpr c;
    c.kind = e.kind;
    c.op = e.op;
    if (e.kind == Expr::Kind::Compare) {
        c.lhs = compile(e.lhs, slots, layout);
        c.rhs = compile(e.rhs, slots, layout);
    }
    for (const auto& ch : e.children) c.children.push_back(compile(ch, slots, layout));
    return c;
}

inline std::optional<int> value_of(const CompiledTerm& t, const std::vector<int>& values,
                                   const std::vector<char>& assigned) {
    if (t.slot < 0) return t.constant;
    if (!assigned[static_cast<std::size_t>(t.slot)]) return std::nullopt;
    int v = values[static_cast<std::size_t>(t.slot)];
    return t.shift == 0 ? v : wrap(v + t.shift, t.lo, t.hi);
}

std::optional<bool> eval(const CompiledExpr& e, const std::vector<int>& values,
                         const std::vector<char>& assigned) {
    switch (e.kind) {
    case Expr::Kind::True: return true;
    case Expr::Kind::False: return false;
    case Expr::Kind::Compare: {
        auto l = value_of(e.lhs, values, assigned);
        if (!l) return std::nullopt;
        auto r = value_of(e.rhs, values, assigned);
        if (!r) return std::nullopt;
        return compare(e.op, *l, *r);
    }
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        const bool isAnd = e.kind == Expr::Kind::And;
        bool unknown = false;
        for (const auto& c : e.children) {
            auto v = eval(c, values, assigned);
            if (!v) unknown = true;
            else if (*v != isAnd) return !isAnd;
        }
        if (unknown) return std::nullopt;
        return isAnd;
    }
    }
    return std::nullopt;
}

} // namespace

BoundGuard::BoundGuard(const ColouredNet& net, std::size_t transition)
    : layout_(variable_layout(net, transition)),
      arcVariables_(arc_variable_count(net, transition)) {
    const auto& guard = net.transitions[transition].guard;
    if (guard.extensional()) throw std::logic_error("BoundGuard needs an expression guard");
    std::unordered_map<std::string, std::size_t> slots;
    for (std::size_t i = 0; i < layout_.size(); ++i) slots.emplace(layout_[i].name, i);
    expr_ = compile(guard.expression(), slots, layout_);
}

std::optional<bool> BoundGuard::partial(const std::vector<int>& values,
                                        const std::vector<char>& assigned) const {
    return eval(expr_, values, assigned);
}

bool BoundGuard::holds(std::vector<int>& values, std::vector<char>& assigned) const {
    for (std::size_t i = arcVariables_; i < layout_.size(); ++i) assigned[i] = 0;
    auto v = eval(expr_, values, assigned);
    if (v) return *v;
    return search_hidden(arcVariables_, values, assigned);
}

bool BoundGuard::search_hidden(std::size_t slot, std::vector<int>& values,
                               std::vector<char>& assigned) const {
    if (slot == layout_.size()) return eval(expr_, values, assigned).value_or(false);
    const auto* sort = layout_[slot].sort;
    assigned[slot] = 1;
    for (std::size_t i = 0; i < sort->size(); ++i) {
        values[slot] = sort->value(i);
        auto v = eval(expr_, values, assigned);
        if (v.value_or(true) && (v.has_value() ? *v : search_hidden(slot + 1, values, assigned))) {
            assigned[slot] = 0;
            return true;
        }
    }
    assigned[slot] = 0;
    return false;
}

} // namespace detail

bool satisfies(const ColouredNet& net, std::size_t transition, const FiringMode& mode) {
    const auto& guard = net.transitions.at(transition).guard;
    if (guard.extensional()) {
        const auto& ms = guard.modes();
        return std::find(ms.begin(), ms.end(), mode) != ms.end();
    }
    detail::BoundGuard bound(net, transition);
    const auto& layout = bound.layout();
    if (mode.colours.size() != bound.arc_variables()) return false;
    std::vector<int> values(layout.size(), 0);
    std::vector<char> assigned(layout.size(), 0);
    for (std::size_t i = 0; i < bound.arc_variables(); ++i) {
        if (mode.colours[i] >= layout[i].sort->size()) return false;
        values[i] = layout[i].sort->value(mode.colours[i]);
        assigned[i] = 1;
    }
    return bound.holds(values, assigned);
}

std::vector<FiringMode> firing_modes(const ColouredNet& net, std::size_t transition,
                                     std::size_t cap) {
    const auto& guard = net.transitions.at(transition).guard;
    if (guard.extensional()) {
        if (guard.modes().size() > cap) throw UnfoldCapExceeded(cap);
        return guard.modes();
    }
    detail::BoundGuard bound(net, transition);
    const auto& layout = bound.layout();
    const std::size_t n = bound.arc_variables();
    std::vector<int> values(layout.size(), 0);
    std::vector<char> assigned(layout.size(), 0);
    FiringMode mode{std::vector<std::size_t>(n, 0)};
    std::vector<FiringMode> out;

    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            if (bound.holds(values, assigned)) {
                if (out.size() == cap) throw UnfoldCapExceeded(cap);
                out.push_back(mode);
            }
            return;
        }
        const auto* sort = layout[i].sort;
        assigned[i] = 1;
        for (std::size_t c = 0; c < sort->size(); ++c) {
            values[i] = sort->value(c);
            mode.colours[i] = c;
            if (bound.partial(values, assigned).value_or(true)) self(self, i + 1);
        }
        assigned[i] = 0;
    };
    rec(rec, 0);
    return out;
}

std::string mode_name(const ColouredNet& net, std::size_t transition, const FiringMode& mode) {
    auto layout = variable_layout(net, transition);
    std::string name = net.transitions[transition].name;
    for (std::size_t i = 0; i < mode.colours.size(); ++i) {
        name += i ? '_' : '.';
        name += layout[i].sort->colours[mode.colours[i]];
    }
    return name;
}

Unfolding unfold(const ColouredNet& net, std::size_t cap) {
    Unfolding u;
    const auto offsets = colour_offsets(net);
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        const auto& pl = net.places[p];
        for (std::size_t c = 0; c < pl.domain.size(); ++c) {
            u.net.add_place(pl.name + "." + pl.domain.colour_name(c), pl.initial[c]);
            u.placeOrigin.emplace_back(p, c);
        }
    }
    std::size_t budget = cap;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        const auto& tr = net.transitions[t];
        auto modes = firing_modes(net, t, budget);
        budget -= modes.size();
        std::map<std::string, std::size_t> seen;
        for (auto& mode : modes) {
            std::string name = mode_name(net, t, mode);
            std::size_t dup = seen[name]++;
            if (dup) name += "#" + std::to_string(dup);
            std::size_t ut = u.net.add_transition(std::move(name));
            std::size_t slot = 0;
            auto connect = [&](const std::vector<ColouredArc>& arcs, bool input) {
                for (const auto& a : arcs) {
                    const auto& dom = net.places[a.place].domain;
                    std::vector<std::size_t> idx(dom.arity());
                    for (std::size_t k = 0; k < a.tokens.size(); ++k) {
                        for (std::size_t c = 0; c < dom.arity(); ++c) idx[c] = mode.colours[slot++];
                        std::size_t up = offsets[a.place] + dom.encode(idx);
                        if (input) u.net.add_input(up, ut, 1);
                        else u.net.add_output(ut, up, 1);
                    }
                    if (a.allCopies)
                        for (std::size_t c = 0; c < dom.size(); ++c) {
                            if (input) u.net.add_input(offsets[a.place] + c, ut, a.allCopies);
                            else u.net.add_output(ut, offsets[a.place] + c, a.allCopies);
                        }
                }
            };
            connect(tr.inputs, true);
            connect(tr.outputs, false);
            u.transitionOrigin.emplace_back(t, std::move(mode));
        }
    }
    return u;
}

PTNet skeleton(const ColouredNet& net) {
    PTNet s;
    for (const auto& p : net.places) {
        Tokens sum = 0;
        for (auto c : p.initial) sum += c;
        s.add_place(p.name, sum);
    }
    for (const auto& tr : net.transitions) {
        std::size_t t = s.add_transition(tr.name);
        auto weight = [&](const ColouredArc& a) {
            return static_cast<Tokens>(a.tokens.size() + a.allCopies * net.places[a.place].domain.size());
        };
        for (const auto& a : tr.inputs) s.add_input(a.place, t, weight(a));
        for (const auto& a : tr.outputs) s.add_output(t, a.place, weight(a));
    }
    return s;
}

NetMorphism induced_morphism(const ColouredNet& net, const Unfolding& unfolding) {
    NetMorphism mu;
    mu.targetPlaces = net.places.size();
    mu.targetTransitions = net.transitions.size();
    for (const auto& [p, c] : unfolding.placeOrigin) mu.placeMap.push_back(p);
    for (const auto& [t, g] : unfolding.transitionOrigin) mu.transitionMap.push_back(t);
    return mu;
}

Marking map_marking(const NetMorphism& morphism, const Marking& m) {
    if (m.size() != morphism.placeMap.size())
        throw std::invalid_argument("marking has " + std::to_string(m.size()) +
                                    " places but the morphism maps " +
                                    std::to_string(morphism.placeMap.size()));
    Marking out(morphism.targetPlaces, 0);
    for (std::size_t i = 0; i < m.size(); ++i) out[morphism.placeMap[i]] += m[i];
    return out;
}

} // namespace skel
