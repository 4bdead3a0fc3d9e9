#include "skel/verify.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <thread>

#include "skel/error.hpp"
#include "skel/folding.hpp"
#include "skel/fullness.hpp"
#include "skel/injection.hpp"

namespace skel {

std::string_view to_string(Truth t) noexcept {
    switch (t) {
    case Truth::True: return "TRUE";
    case Truth::False: return "FALSE";
    case Truth::Unknown: break;
    }
    return "UNKNOWN";
}

std::string_view to_string(Basis b) noexcept {
    switch (b) {
    case Basis::DeadlockFree: return "deadlock-free";
    case Basis::DeadlockPreserving: return "deadlock-preserving";
    case Basis::Stuttering: return "stuttering";
    case Basis::SafetyAbstraction: return "safety-abstraction";
    case Basis::Direct: return "direct";
    case Basis::None: break;
    }
    return "none";
}

std::string_view to_string(SoundnessClass c) noexcept {
    switch (c) {
    case SoundnessClass::DeadlockFree: return "deadlock-free";
    case SoundnessClass::DeadlockPreserving: return "deadlock-preserving";
    case SoundnessClass::Injectable: return "injectable";
    case SoundnessClass::None: break;
    }
    return "none";
}

SoundnessClass soundness_class(const ColouredNet& net, std::size_t probeCap) {
    try {
        ExplorationLimits limits;
        limits.stateCap = probeCap;
        if (deadlocks(build_kripke(net, {}, limits)).empty()) return SoundnessClass::DeadlockFree;
    } catch (const StateCapExceeded&) {
    }
    try {
        auto live = prune_dead_transitions(net);
        if (analyze_skeleton(live).preserving) return SoundnessClass::DeadlockPreserving;
        return SoundnessClass::Injectable;
    } catch (const UnsupportedConstruct&) {
        return SoundnessClass::None;
    }
}

namespace {

bool qualifies(const FragmentReport& r, Basis basis) {
    switch (basis) {
    case Basis::DeadlockFree:
    case Basis::DeadlockPreserving: return r.isACTLstar;
    case Basis::Stuttering: return r.isACTLstar && r.isXFree;
    case Basis::SafetyAbstraction: return r.isSafety;
    case Basis::Direct: return true;
    case Basis::None: break;
    }
    return false;
}

} // namespace

Verdict transfer(bool abstractResult, const FragmentReport& positive, const FragmentReport& negated, Basis basis) {
    Verdict v;
    v.abstractResult = abstractResult;
    const auto& needed = abstractResult ? positive : negated;
    if (qualifies(needed, basis)) {
        v.value = abstractResult ? Truth::True : Truth::False;
        v.basis = basis;
    } else {
        v.reason = std::string(to_string(basis)) + ": abstract " + (abstractResult ? "TRUE" : "FALSE") +
                   " does not transfer";
    }
    return v;
}

Formula negated_nnf(const Formula& f) {
    const auto& base = is_state_formula(f) ? f : Formula::unary(Formula::Op::A, f);
    return to_nnf(Formula::unary(Formula::Op::Not, base));
}

namespace {

using Clock = std::chrono::steady_clock;

struct Task {
    Formula nnf;
    FragmentReport positive;
    FragmentReport negated;
    std::vector<Formula> propositions;

    explicit Task(const Formula& f)
        : nnf(to_nnf(f)), positive(classify(nnf)), negated(classify(negated_nnf(f))),
          propositions(propositions_of(nnf)) {}
};

struct Run {
    Budgets budgets;
    std::optional<Clock::time_point> deadline;

    ExplorationLimits limits(std::size_t cap, std::stop_token stop) const {
        ExplorationLimits l;
        l.stateCap = cap;
        l.deadline = deadline;
        l.stop = std::move(stop);
        return l;
    }
    bool expired(const std::stop_token& stop) const {
        return stop.stop_requested() || (deadline && Clock::now() > *deadline);
    }
};

bool check(const KripkeStructure& k, const Formula& f, const Run& run, std::stop_token stop) {
    CheckOptions o;
    o.productCap = run.budgets.productCap;
    o.stop = std::move(stop);
    return check_ctl(k, f, o);
}

// Truth of a formula without temporal operators at the initial marking.
bool evaluate_initial(const TransitionSystem& system, const Formula& f, const Marking& m) {
    using Op = Formula::Op;
    switch (f.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom:
    case Op::Enabled: return system.compile(f)(m);
    case Op::Not: return !evaluate_initial(system, f.args[0], m);
    case Op::And:
        for (const auto& a : f.args)
            if (!evaluate_initial(system, a, m)) return false;
        return true;
    case Op::Or:
        for (const auto& a : f.args)
            if (evaluate_initial(system, a, m)) return true;
        return false;
    case Op::A:
    case Op::E: return evaluate_initial(system, f.args[0], m);
    default: break;
    }
    throw std::logic_error("temporal operator in a trivial formula");
}

Verdict trivial_verdict(const TransitionSystem& system, const Formula& nnf) {
    Verdict v;
    v.value = evaluate_initial(system, nnf, system.initial()) ? Truth::True : Truth::False;
    v.basis = Basis::Direct;
    v.states = 1;
    return v;
}

void note(std::string& reason, const std::string& text) {
    if (!reason.empty()) reason += "; ";
    reason += text;
}

// Checks on the skeleton, or on S′, and transfers. `probe` receives the
// coloured state space when the deadlock probe explored it completely.
Verdict abstract_path(const ColouredNet& net, const Task& task, const Run& run, std::stop_token stop,
                      std::shared_ptr<KripkeStructure>* probe) {
    Verdict out;
    if (!enabled_transitions_of(task.nnf).empty()) {
        out.reason = "enabled() propositions are only checked directly";
        return out;
    }
    const bool actl = task.positive.isACTLstar || task.negated.isACTLstar;
    const bool actlX = (task.positive.isACTLstar && task.positive.isXFree) ||
                       (task.negated.isACTLstar && task.negated.isXFree);
    const bool safety = task.positive.isSafety || task.negated.isSafety;
    if (!actl) {
        out.reason = "formula and its negation are outside ACTL*";
        return out;
    }

    const auto live = prune_dead_transitions(net);
    const auto s = skeleton(live);
    std::optional<KripkeStructure> ks;
    std::optional<bool> ksResult;
    bool ksFailed = false;

    // Checks on the skeleton once, then tries to transfer under `basis`.
    auto on_skeleton = [&](Basis basis) -> std::optional<Verdict> {
        if (ksFailed) return std::nullopt;
        try {
            if (!ks) ks = build_kripke(s, task.propositions, run.limits(run.budgets.stateCap, stop));
            if (!ksResult) ksResult = check(*ks, task.nnf, run, stop);
        } catch (const std::exception& e) {
            ksFailed = true;
            note(out.reason, std::string("skeleton: ") + e.what());
            return std::nullopt;
        }
        auto v = transfer(*ksResult, task.positive, task.negated, basis);
        out.abstractResult = ksResult;
        v.states = ks->size();
        if (v.value != Truth::Unknown) return v;
        note(out.reason, v.reason);
        return std::nullopt;
    };

    if (safety)
        if (auto v = on_skeleton(Basis::SafetyAbstraction)) return *v;
    if (run.expired(stop)) return out;

    std::optional<SkeletonAnalysis> analysis;
    try {
        analysis = analyze_skeleton(live);
    } catch (const std::exception& e) {
        note(out.reason, std::string("fullness: ") + e.what());
    }
    if (analysis && analysis->preserving) return on_skeleton(Basis::DeadlockPreserving).value_or(out);
    if (run.expired(stop)) return out;

    try {
        auto u = std::make_shared<KripkeStructure>(
            build_kripke(net, task.propositions, run.limits(run.budgets.probeCap, stop)));
        if (probe) *probe = u;
        if (deadlocks(*u).empty()) return on_skeleton(Basis::DeadlockFree).value_or(out);
    } catch (const StateCapExceeded&) {
        note(out.reason, "deadlock probe: cap reached");
    } catch (const Interrupted&) {
        return out;
    } catch (const std::exception& e) {
        note(out.reason, std::string("deadlock probe: ") + e.what());
    }

    if (!actlX || !analysis) {
        if (!actlX) note(out.reason, "stuttering: formula uses X");
        return out;
    }
    try {
        auto modified = inject_deadlocks(live, *analysis);
        auto k = build_kripke(modified, task.propositions, run.limits(run.budgets.stateCap, stop));
        auto r = check(k, task.nnf, run, stop);
        auto v = transfer(r, task.positive, task.negated, Basis::Stuttering);
        v.states = k.size();
        if (v.value != Truth::Unknown) return v;
        out.abstractResult = r;
        note(out.reason, v.reason);
    } catch (const std::exception& e) {
        note(out.reason, std::string("injection: ") + e.what());
    }
    return out;
}

template <class Net>
Verdict direct_check(const Net& net, const Task& task, const Run& run, std::stop_token stop,
                     std::shared_ptr<KripkeStructure> cached) {
    Verdict v;
    try {
        auto k = cached ? cached : std::make_shared<KripkeStructure>(
                                       build_kripke(net, task.propositions, run.limits(run.budgets.stateCap, stop)));
        v.value = check(*k, task.nnf, run, stop) ? Truth::True : Truth::False;
        v.basis = Basis::Direct;
        v.states = k->size();
    } catch (const StateCapExceeded& e) {
        v.reason = std::string("direct: ") + e.what();
    } catch (const Interrupted& e) {
        v.reason = std::string("direct: ") + e.what();
    } catch (const UnsupportedFormula& e) {
        v.reason = std::string("direct: ") + e.what();
    } catch (const UnfoldCapExceeded& e) {
        v.reason = std::string("direct: ") + e.what();
    }
    return v;
}

using Path = std::function<Verdict(std::stop_token)>;

// Abstract path first, then the direct check; or both at once when racing,
// where the first conclusive verdict cancels the other.
Verdict orchestrate(const Path& abstract, const Path& direct, const Run& run) {
    if (!run.budgets.race || !run.budgets.direct) {
        auto a = abstract({});
        if (a.value != Truth::Unknown || !run.budgets.direct) return a;
        auto d = direct({});
        if (d.value == Truth::Unknown) note(d.reason, a.reason);
        else d.abstractResult = a.abstractResult;
        return d;
    }
    std::mutex mutex;
    std::optional<Verdict> winner, directResult;
    std::stop_source abstractStop;
    std::jthread worker([&](std::stop_token stop) {
        auto d = direct(stop);
        std::lock_guard lock(mutex);
        if (!winner && d.value != Truth::Unknown) {
            winner = d;
            abstractStop.request_stop();
        }
        directResult = d;
    });
    auto a = abstract(abstractStop.get_token());
    {
        std::lock_guard lock(mutex);
        if (!winner && a.value != Truth::Unknown) {
            winner = a;
            worker.request_stop();
        }
    }
    worker.join();
    if (winner) return *winner;
    auto d = directResult.value_or(Verdict{});
    note(d.reason, a.reason);
    return d;
}

Run make_run(const Budgets& budgets) {
    Run run{budgets, std::nullopt};
    if (budgets.timeLimit) run.deadline = Clock::now() + *budgets.timeLimit;
    return run;
}

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

} // namespace

Verdict verify(const ColouredNet& net, const Formula& f, const Budgets& budgets) {
    const auto start = Clock::now();
    const Task task(f);
    const auto run = make_run(budgets);
    if (is_trivial(task.nnf)) {
        auto v = trivial_verdict(ColouredSystem(net), task.nnf);
        v.milliseconds = elapsed_ms(start);
        return v;
    }
    std::shared_ptr<KripkeStructure> probe;
    auto abstract = [&](std::stop_token stop) {
        return abstract_path(net, task, run, stop, budgets.race ? nullptr : &probe);
    };
    auto direct = [&](std::stop_token stop) { return direct_check(net, task, run, stop, probe); };
    auto v = orchestrate(abstract, direct, run);
    v.milliseconds = elapsed_ms(start);
    return v;
}

Verdict verify(const PTNet& net, const Formula& f, const Budgets& budgets) {
    const auto start = Clock::now();
    const Task task(f);
    const auto run = make_run(budgets);
    if (is_trivial(task.nnf)) {
        auto v = trivial_verdict(PTSystem(net), task.nnf);
        v.milliseconds = elapsed_ms(start);
        return v;
    }
    std::optional<FoldingResult> folding;
    if (budgets.fold) {
        auto r = fold(net, f);
        if (folding_worthwhile(net, r.net)) folding = std::move(r);
    }
    auto abstract = [&](std::stop_token stop) {
        if (!folding) {
            Verdict v;
            v.reason = budgets.fold ? "folding not worthwhile" : "folding disabled";
            return v;
        }
        const Task folded(folding->formula);
        return abstract_path(folding->net, folded, run, stop, nullptr);
    };
    auto direct = [&](std::stop_token stop) { return direct_check(net, task, run, stop, nullptr); };
    auto v = orchestrate(abstract, direct, run);
    v.folded = folding.has_value();
    v.milliseconds = elapsed_ms(start);
    return v;
}

} // namespace skel
