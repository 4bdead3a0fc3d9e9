#include "skel/statespace.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "guard_eval.hpp"
#include "skel/error.hpp"

namespace skel {

PropositionTest TransitionSystem::compile(const Formula& proposition) const {
    if (proposition.op == Formula::Op::Enabled) return enabled_test(proposition.transition);
    if (proposition.op != Formula::Op::Atom)
        throw std::invalid_argument("not a proposition: " + to_string(proposition));
    std::vector<std::pair<std::int64_t, std::vector<std::size_t>>> terms;
    for (const auto& t : proposition.atom.terms) terms.emplace_back(t.coefficient, place_indices(t.place));
    const std::int64_t bound = proposition.atom.bound;
    return [terms = std::move(terms), bound](MarkingView m) {
        std::int64_t sum = 0;
        for (const auto& [k, idx] : terms) {
            std::int64_t count = 0;
            for (auto i : idx) count += m[i];
            sum += k * count;
        }
        return sum <= bound;
    };
}

// ---------------------------------------------------------------- P/T

PTSystem::PTSystem(const PTNet& net) : net_(net) {}

PTSystem::PTSystem(const PTNet& net, std::map<std::string, std::vector<std::size_t>> groups,
                   std::vector<char> silent)
    : net_(net), groups_(std::move(groups)), silent_(std::move(silent)) {}

void PTSystem::successors(MarkingView m, const Emit& emit) const {
    Marking next;
    for (std::size_t t = 0; t < net_.transitions.size(); ++t) {
        bool ok = true;
        for (const auto& a : net_.pre[t])
            if (m[a.place] < a.weight) {
                ok = false;
                break;
            }
        if (!ok) continue;
        next.assign(m.begin(), m.end());
        for (const auto& a : net_.pre[t]) next[a.place] -= a.weight;
        for (const auto& a : net_.post[t]) next[a.place] += a.weight;
        emit(t, next);
    }
}

bool PTSystem::silent(std::size_t action) const {
    return action < silent_.size() && silent_[action] != 0;
}

std::vector<std::size_t> PTSystem::place_indices(const std::string& place) const {
    if (auto it = groups_.find(place); it != groups_.end()) return it->second;
    auto p = net_.find_place(place);
    if (!p) throw UnknownPlace(place);
    return {*p};
}

PropositionTest PTSystem::enabled_test(const std::string& transition) const {
    auto t = net_.find_transition(transition);
    if (!t) throw std::invalid_argument("unknown transition '" + transition + "'");
    std::vector<Arc> pre = net_.pre[*t];
    return [pre](MarkingView m) {
        return std::all_of(pre.begin(), pre.end(), [&](const Arc& a) { return m[a.place] >= a.weight; });
    };
}

// ---------------------------------------------------------------- coloured

namespace {

struct TokenSlot {
    std::size_t place;
    std::size_t firstSlot;
};

struct TransitionPlan {
    bool extensional = false;
    std::optional<detail::BoundGuard> guard;
    std::vector<VariableSlot> layout;
    std::vector<TokenSlot> inputs;
    std::vector<TokenSlot> outputs;
    std::vector<std::pair<std::size_t, Tokens>> inputAll;  // (place, copies)
    std::vector<std::pair<std::size_t, Tokens>> outputAll;
    // Extensional guards: flat (index, count) effects per mode.
    std::vector<std::vector<std::pair<std::size_t, Tokens>>> consume;
    std::vector<std::vector<std::pair<std::size_t, Tokens>>> produce;
    std::size_t firstAction = 0; // extensional modes have fixed action ids
};

} // namespace

struct ColouredSystem::Impl {
    const ColouredNet& net;
    std::vector<std::size_t> offsets;
    std::vector<std::vector<std::vector<std::size_t>>> decoded; // place, colour -> component indices
    std::vector<TransitionPlan> plans;

    // Action interning happens during exploration; a system instance is not
    // meant to be shared between concurrent explorations.
    mutable std::vector<std::map<std::vector<std::size_t>, std::size_t>> interned;
    mutable std::vector<std::pair<std::size_t, FiringMode>> actions;
    std::vector<std::string> fixedNames;

    explicit Impl(const ColouredNet& n) : net(n), offsets(colour_offsets(n)) {
        for (const auto& p : net.places) {
            std::vector<std::vector<std::size_t>> table;
            for (std::size_t c = 0; c < p.domain.size(); ++c) table.push_back(p.domain.decode(c));
            decoded.push_back(std::move(table));
        }
        interned.resize(net.transitions.size());
        for (std::size_t t = 0; t < net.transitions.size(); ++t) plans.push_back(plan(t));
    }

    TransitionPlan plan(std::size_t t) {
        const auto& tr = net.transitions[t];
        TransitionPlan pl;
        pl.extensional = tr.guard.extensional();
        pl.layout = variable_layout(net, t);
        std::size_t slot = 0;
        for (const auto& a : tr.inputs) {
            for (std::size_t k = 0; k < a.tokens.size(); ++k) {
                pl.inputs.push_back({a.place, slot});
                slot += net.places[a.place].domain.arity();
            }
            if (a.allCopies) pl.inputAll.emplace_back(a.place, a.allCopies);
        }
        for (const auto& a : tr.outputs) {
            for (std::size_t k = 0; k < a.tokens.size(); ++k) {
                pl.outputs.push_back({a.place, slot});
                slot += net.places[a.place].domain.arity();
            }
            if (a.allCopies) pl.outputAll.emplace_back(a.place, a.allCopies);
        }
        if (!pl.extensional) {
            pl.guard.emplace(net, t);
            return pl;
        }
        pl.firstAction = actions.size();
        std::map<std::string, std::size_t> seen;
        for (const auto& mode : tr.guard.modes()) {
            std::map<std::size_t, Tokens> in, out;
            effect(pl, mode, in, out);
            pl.consume.emplace_back(in.begin(), in.end());
            pl.produce.emplace_back(out.begin(), out.end());
            std::string name = mode_name(net, t, mode);
            if (std::size_t dup = seen[name]++) name += "#" + std::to_string(dup);
            fixedNames.push_back(std::move(name));
            actions.emplace_back(t, mode);
        }
        return pl;
    }

    std::size_t colour_of(const TokenSlot& tok, const FiringMode& mode) const {
        const auto& dom = net.places[tok.place].domain;
        std::size_t c = 0;
        for (std::size_t i = 0; i < dom.arity(); ++i)
            c = c * dom.components[i].size() + mode.colours[tok.firstSlot + i];
        return c;
    }

    void effect(const TransitionPlan& pl, const FiringMode& mode, std::map<std::size_t, Tokens>& in,
                std::map<std::size_t, Tokens>& out) const {
        for (const auto& tok : pl.inputs) ++in[offsets[tok.place] + colour_of(tok, mode)];
        for (const auto& tok : pl.outputs) ++out[offsets[tok.place] + colour_of(tok, mode)];
        for (auto [p, k] : pl.inputAll)
            for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i) in[i] += k;
        for (auto [p, k] : pl.outputAll)
            for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i) out[i] += k;
    }

    std::size_t intern(std::size_t t, const std::vector<std::size_t>& colours) const {
        auto [it, inserted] = interned[t].emplace(colours, actions.size());
        if (inserted) actions.emplace_back(t, FiringMode{colours});
        return it->second;
    }

    // Calls visit(action, next) for every enabled mode of t; stops early when
    // visit returns false. Returns false if stopped.
    template <class Visit>
    bool explore(std::size_t t, MarkingView m, Visit&& visit) const {
        const auto& pl = plans[t];
        Marking next;
        if (pl.extensional) {
            for (std::size_t i = 0; i < pl.consume.size(); ++i) {
                bool ok = std::all_of(pl.consume[i].begin(), pl.consume[i].end(),
                                      [&](const auto& e) { return m[e.first] >= e.second; });
                if (!ok) continue;
                next.assign(m.begin(), m.end());
                for (auto [idx, k] : pl.consume[i]) next[idx] -= k;
                for (auto [idx, k] : pl.produce[i]) next[idx] += k;
                if (!visit(pl.firstAction + i, next)) return false;
            }
            return true;
        }
        Marking remaining(m.begin(), m.end());
        for (auto [p, k] : pl.inputAll)
            for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i) {
                if (remaining[i] < k) return true;
                remaining[i] -= k;
            }
        const auto& guard = *pl.guard;
        const std::size_t arcVars = guard.arc_variables();
        std::vector<int> values(pl.layout.size(), 0);
        std::vector<char> assigned(pl.layout.size(), 0);
        std::vector<std::size_t> colours(arcVars, 0);
        std::vector<std::size_t> produced(pl.outputs.size(), 0);
        bool keepGoing = true;

        auto assign = [&](const TokenSlot& tok, std::size_t colour) {
            const auto& idx = decoded[tok.place][colour];
            for (std::size_t i = 0; i < idx.size(); ++i) {
                std::size_t s = tok.firstSlot + i;
                values[s] = pl.layout[s].sort->value(idx[i]);
                assigned[s] = 1;
                colours[s] = idx[i];
            }
        };
        auto unassign = [&](const TokenSlot& tok) {
            for (std::size_t i = 0; i < decoded[tok.place][0].size(); ++i) assigned[tok.firstSlot + i] = 0;
        };

        auto finish = [&] {
            if (!guard.holds(values, assigned)) return;
            next = remaining;
            for (std::size_t k = 0; k < pl.outputs.size(); ++k)
                ++next[offsets[pl.outputs[k].place] + produced[k]];
            for (auto [p, c] : pl.outputAll)
                for (std::size_t i = offsets[p]; i < offsets[p + 1]; ++i) next[i] += c;
            if (!visit(intern(t, colours), next)) keepGoing = false;
        };

        auto outputs = [&](auto&& self, std::size_t k) -> void {
            if (!keepGoing) return;
            if (k == pl.outputs.size()) {
                finish();
                return;
            }
            const auto& tok = pl.outputs[k];
            for (std::size_t c = 0; c < decoded[tok.place].size() && keepGoing; ++c) {
                assign(tok, c);
                produced[k] = c;
                if (guard.partial(values, assigned).value_or(true)) self(self, k + 1);
            }
            unassign(tok);
        };

        auto inputs = [&](auto&& self, std::size_t k) -> void {
            if (!keepGoing) return;
            if (k == pl.inputs.size()) {
                outputs(outputs, 0);
                return;
            }
            const auto& tok = pl.inputs[k];
            const std::size_t base = offsets[tok.place];
            for (std::size_t c = 0; c < decoded[tok.place].size() && keepGoing; ++c) {
                if (remaining[base + c] == 0) continue;
                assign(tok, c);
                if (!guard.partial(values, assigned).value_or(true)) continue;
                --remaining[base + c];
                self(self, k + 1);
                ++remaining[base + c];
            }
            unassign(tok);
        };
        inputs(inputs, 0);
        return keepGoing;
    }
};

ColouredSystem::ColouredSystem(const ColouredNet& net) : impl_(std::make_unique<Impl>(net)) {}
ColouredSystem::~ColouredSystem() = default;

std::size_t ColouredSystem::width() const { return impl_->offsets.back(); }
Marking ColouredSystem::initial() const { return initial_marking(impl_->net); }

void ColouredSystem::successors(MarkingView m, const Emit& emit) const {
    for (std::size_t t = 0; t < impl_->net.transitions.size(); ++t)
        impl_->explore(t, m, [&](std::size_t action, const Marking& next) {
            emit(action, next);
            return true;
        });
}

std::size_t ColouredSystem::action_count() const { return impl_->actions.size(); }

std::string ColouredSystem::action_name(std::size_t action) const {
    if (action < impl_->fixedNames.size()) return impl_->fixedNames[action];
    const auto& [t, mode] = impl_->actions.at(action);
    return mode_name(impl_->net, t, mode);
}

std::vector<std::size_t> ColouredSystem::place_indices(const std::string& place) const {
    auto p = impl_->net.find_place(place);
    if (!p) throw UnknownPlace(place);
    std::vector<std::size_t> out;
    for (std::size_t i = impl_->offsets[*p]; i < impl_->offsets[*p + 1]; ++i) out.push_back(i);
    return out;
}

PropositionTest ColouredSystem::enabled_test(const std::string& transition) const {
    auto t = impl_->net.find_transition(transition);
    if (!t) throw std::invalid_argument("unknown transition '" + transition + "'");
    const Impl* impl = impl_.get();
    return [impl, t = *t](MarkingView m) {
        return !impl->explore(t, m, [](std::size_t, const Marking&) { return false; });
    };
}

std::vector<std::pair<std::size_t, FiringMode>> ColouredSystem::enabled_modes(MarkingView m) const {
    std::vector<std::pair<std::size_t, FiringMode>> out;
    for (std::size_t t = 0; t < impl_->net.transitions.size(); ++t)
        impl_->explore(t, m, [&](std::size_t action, const Marking&) {
            out.push_back(impl_->actions[action]);
            return true;
        });
    return out;
}

// ---------------------------------------------------------------- Kripke

namespace {

std::uint64_t hash_marking(MarkingView m) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto v : m) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return h ^ (h >> 33);
}

class MarkingStore {
public:
    explicit MarkingStore(std::size_t width) : width_(width), table_(1024, kEmpty) {}

    std::size_t size() const noexcept { return count_; }
    MarkingView at(std::size_t i) const { return {data_.data() + i * width_, width_}; }

    // Returns (index, inserted).
    std::pair<std::size_t, bool> intern(MarkingView m) {
        std::size_t mask = table_.size() - 1;
        std::size_t i = hash_marking(m) & mask;
        while (table_[i] != kEmpty) {
            auto other = at(table_[i]);
            if (std::equal(other.begin(), other.end(), m.begin())) return {table_[i], false};
            i = (i + 1) & mask;
        }
        if (count_ >= std::numeric_limits<std::uint32_t>::max() - 1)
            throw std::length_error("too many states");
        data_.insert(data_.end(), m.begin(), m.end());
        table_[i] = static_cast<std::uint32_t>(count_);
        ++count_;
        if (count_ * 2 > table_.size()) grow();
        return {count_ - 1, true};
    }

    std::vector<Tokens> release() { return std::move(data_); }

private:
    static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

    void grow() {
        std::vector<std::uint32_t> table(table_.size() * 2, kEmpty);
        std::size_t mask = table.size() - 1;
        for (std::size_t s = 0; s < count_; ++s) {
            std::size_t i = hash_marking(at(s)) & mask;
            while (table[i] != kEmpty) i = (i + 1) & mask;
            table[i] = static_cast<std::uint32_t>(s);
        }
        table_.swap(table);
    }

    std::size_t width_;
    std::size_t count_ = 0;
    std::vector<Tokens> data_;
    std::vector<std::uint32_t> table_;
};

} // namespace

std::optional<std::size_t> KripkeStructure::find(MarkingView m) const {
    for (std::size_t s = 0; s < size(); ++s) {
        auto x = marking(s);
        if (std::equal(x.begin(), x.end(), m.begin(), m.end())) return s;
    }
    return std::nullopt;
}

std::vector<std::vector<std::size_t>> KripkeStructure::predecessors() const {
    std::vector<std::vector<std::size_t>> pre(size());
    for (std::size_t s = 0; s < size(); ++s)
        for (const auto& e : successors(s)) pre[e.target].push_back(s);
    return pre;
}

KripkeStructure build_kripke(const TransitionSystem& system, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits) {
    if (limits.stateCap == 0) throw std::invalid_argument("state cap must be positive");
    std::vector<PropositionTest> tests;
    for (const auto& p : propositions) tests.push_back(system.compile(p));

    KripkeStructure k;
    k.width = system.width();
    k.propositions = propositions;
    MarkingStore store(k.width);
    Marking init = system.initial();
    if (init.size() != k.width) throw std::invalid_argument("initial marking has the wrong width");
    store.intern(init);
    k.edgeOffsets.push_back(0);

    Marking current;
    std::size_t s = 0;
    auto emit = [&](std::size_t action, MarkingView next) {
        auto [idx, inserted] = store.intern(next);
        if (inserted && store.size() > limits.stateCap)
            throw StateCapExceeded(limits.stateCap, store.size() - s - 1);
        k.edges.push_back({static_cast<std::uint32_t>(action + 1), static_cast<std::uint32_t>(idx)});
    };
    for (; s < store.size(); ++s) {
        if ((s & 255) == 0) {
            if (limits.stop.stop_requested()) throw Interrupted("exploration cancelled");
            if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline)
                throw Interrupted("time limit reached during exploration");
        }
        auto view = store.at(s);
        current.assign(view.begin(), view.end());
        const std::size_t before = k.edges.size();
        system.successors(current, emit);
        const bool dead = k.edges.size() == before;
        if (dead) k.edges.push_back({0, static_cast<std::uint32_t>(s)});
        k.deadlock.push_back(dead ? 1 : 0);
        k.edgeOffsets.push_back(k.edges.size());
    }
    k.markings = store.release();

    k.actions.push_back("tau");
    k.silentActions.push_back(1);
    for (std::size_t a = 0; a < system.action_count(); ++a) {
        k.actions.push_back(system.action_name(a));
        k.silentActions.push_back(system.silent(a) ? 1 : 0);
    }
    k.labels.resize(k.size() * tests.size());
    for (std::size_t st = 0; st < k.size(); ++st)
        for (std::size_t p = 0; p < tests.size(); ++p) k.labels[st * tests.size() + p] = tests[p](k.marking(st));
    return k;
}

KripkeStructure build_kripke(const PTNet& net, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits) {
    return build_kripke(PTSystem(net), propositions, limits);
}

KripkeStructure build_kripke(const ColouredNet& net, const std::vector<Formula>& propositions,
                             const ExplorationLimits& limits) {
    return build_kripke(ColouredSystem(net), propositions, limits);
}

std::vector<std::size_t> deadlocks(const KripkeStructure& k) {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < k.size(); ++s)
        if (k.deadlock[s]) out.push_back(s);
    return out;
}

bool is_enabled(const PTNet& net, const Marking& m, std::size_t transition) {
    for (const auto& a : net.pre.at(transition))
        if (m.at(a.place) < a.weight) return false;
    return true;
}

std::vector<std::size_t> enabled(const PTNet& net, const Marking& m) {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < net.transitions.size(); ++t)
        if (is_enabled(net, m, t)) out.push_back(t);
    return out;
}

Marking fire(const PTNet& net, const Marking& m, std::size_t transition) {
    if (!is_enabled(net, m, transition))
        throw std::logic_error("transition '" + net.transitions[transition] + "' is not enabled");
    Marking next = m;
    for (const auto& a : net.pre[transition]) next[a.place] -= a.weight;
    for (const auto& a : net.post[transition]) next[a.place] += a.weight;
    return next;
}

std::vector<std::pair<std::size_t, FiringMode>> coloured_enabled(const ColouredNet& net, const Marking& m) {
    return ColouredSystem(net).enabled_modes(m);
}

Marking coloured_fire(const ColouredNet& net, const Marking& m, std::size_t transition,
                      const FiringMode& mode) {
    auto offsets = colour_offsets(net);
    auto layout = variable_layout(net, transition);
    const auto& tr = net.transitions.at(transition);
    if (!satisfies(net, transition, mode)) throw std::logic_error("mode does not satisfy the guard");
    Marking next = m;
    std::size_t slot = 0;
    auto apply = [&](const std::vector<ColouredArc>& arcs, bool input) {
        for (const auto& a : arcs) {
            const auto& dom = net.places[a.place].domain;
            for (std::size_t k = 0; k < a.tokens.size(); ++k) {
                std::vector<std::size_t> idx(mode.colours.begin() + static_cast<std::ptrdiff_t>(slot),
                                             mode.colours.begin() + static_cast<std::ptrdiff_t>(slot + dom.arity()));
                slot += dom.arity();
                Tokens& cell = next[offsets[a.place] + dom.encode(idx)];
                if (input) {
                    if (cell == 0) throw std::logic_error("mode is not enabled");
                    --cell;
                } else {
                    ++cell;
                }
            }
            for (std::size_t c = 0; a.allCopies && c < dom.size(); ++c) {
                Tokens& cell = next[offsets[a.place] + c];
                if (input) {
                    if (cell < a.allCopies) throw std::logic_error("mode is not enabled");
                    cell -= a.allCopies;
                } else {
                    cell += a.allCopies;
                }
            }
        }
    };
    apply(tr.inputs, true);
    apply(tr.outputs, false);
    return next;
}

// ---------------------------------------------------------------- relations

namespace {

using PairSet = std::unordered_set<std::uint64_t>;

std::uint64_t key(std::size_t q, std::size_t r) { return (static_cast<std::uint64_t>(q) << 32) | r; }

bool same_labels(const KripkeStructure& a, std::size_t q, const KripkeStructure& b, std::size_t r) {
    const std::size_t n = a.propositions.size();
    if (b.propositions.size() != n)
        throw std::invalid_argument("structures were built with different proposition lists");
    for (std::size_t p = 0; p < n; ++p)
        if (a.label(q, p) != b.label(r, p)) return false;
    return true;
}

} // namespace

StateRelation relate_by_map(const KripkeStructure& concrete, const KripkeStructure& abstract,
                            const std::function<Marking(MarkingView)>& image) {
    return relate_by_key(concrete, abstract, image,
                         [](MarkingView m) { return Marking(m.begin(), m.end()); });
}

StateRelation relate_by_key(const KripkeStructure& concrete, const KripkeStructure& abstract,
                            const std::function<Marking(MarkingView)>& concreteKey,
                            const std::function<Marking(MarkingView)>& abstractKey) {
    std::map<Marking, std::vector<std::size_t>> index;
    for (std::size_t r = 0; r < abstract.size(); ++r) index[abstractKey(abstract.marking(r))].push_back(r);
    StateRelation sigma;
    for (std::size_t q = 0; q < concrete.size(); ++q) {
        auto it = index.find(concreteKey(concrete.marking(q)));
        if (it == index.end()) continue;
        for (auto r : it->second) sigma.pairs.emplace_back(q, r);
    }
    return sigma;
}

bool check_abstraction(const KripkeStructure& concrete, const KripkeStructure& abstract,
                       const StateRelation& sigma) {
    for (auto [q, r] : sigma.pairs)
        if (!same_labels(concrete, q, abstract, r)) return false;
    return true;
}

SimulationResult check_simulation(const KripkeStructure& concrete, const KripkeStructure& abstract,
                                  const StateRelation& sigma) {
    PairSet rel;
    for (auto [q, r] : sigma.pairs)
        if (same_labels(concrete, q, abstract, r)) rel.insert(key(q, r));
    std::optional<SimulationCounterexample> witness;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [q, r] : sigma.pairs) {
            if (!rel.count(key(q, r))) continue;
            for (const auto& e : concrete.successors(q)) {
                bool matched = false;
                for (const auto& f : abstract.successors(r))
                    if (rel.count(key(e.target, f.target))) {
                        matched = true;
                        break;
                    }
                if (!matched) {
                    rel.erase(key(q, r));
                    if (q == concrete.initial && r == abstract.initial)
                        witness = SimulationCounterexample{q, r, e.action, e.target};
                    changed = true;
                    break;
                }
            }
        }
    }
    SimulationResult result;
    result.holds = rel.count(key(concrete.initial, abstract.initial)) != 0;
    if (!result.holds) {
        if (!witness) {
            bool related = false;
            for (auto [q, r] : sigma.pairs)
                if (q == concrete.initial && r == abstract.initial) related = true;
            if (related) witness = SimulationCounterexample{concrete.initial, abstract.initial, 0, concrete.initial};
        }
        result.counterexample = witness;
    }
    return result;
}

bool check_stuttering_simulation(const KripkeStructure& concrete, const KripkeStructure& abstract,
                                 const StateRelation& sigma) {
    PairSet rel;
    for (auto [q, r] : sigma.pairs)
        if (same_labels(concrete, q, abstract, r)) rel.insert(key(q, r));

    std::vector<char> visited(abstract.size(), 0);
    std::vector<std::size_t> touched;
    std::deque<std::size_t> queue;
    auto answerable = [&](std::size_t q, std::size_t r, std::size_t q1) {
        for (auto s : touched) visited[s] = 0;
        touched.clear();
        queue.clear();
        auto push_successors = [&](std::size_t s) {
            for (const auto& f : abstract.successors(s))
                if (!visited[f.target]) {
                    visited[f.target] = 1;
                    touched.push_back(f.target);
                    queue.push_back(f.target);
                }
        };
        push_successors(r);
        while (!queue.empty()) {
            std::size_t s = queue.front();
            queue.pop_front();
            if (rel.count(key(q1, s))) return true;
            if (rel.count(key(q, s))) push_successors(s);
        }
        return false;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [q, r] : sigma.pairs) {
            if (!rel.count(key(q, r))) continue;
            for (const auto& e : concrete.successors(q))
                if (!answerable(q, r, e.target)) {
                    rel.erase(key(q, r));
                    changed = true;
                    break;
                }
        }
    }
    return rel.count(key(concrete.initial, abstract.initial)) != 0;
}

} // namespace skel
