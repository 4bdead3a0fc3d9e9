#include "skel/checker.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

#include "skel/error.hpp"

namespace skel {

namespace {

using Set = std::vector<char>;

Set complement(Set s) {
    for (auto& b : s) b = !b;
    return s;
}

Set both(const Set& a, const Set& b) {
    Set out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

Set either(const Set& a, const Set& b) {
    Set out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
    return out;
}

class Checker {
public:
    Checker(const KripkeStructure& k, const CheckOptions& options)
        : k_(k), options_(options), n_(k.size()), pre_(k.predecessors()) {}

    Set eval(const Formula& f) {
        using Op = Formula::Op;
        switch (f.op) {
        case Op::True: return Set(n_, 1);
        case Op::False: return Set(n_, 0);
        case Op::Atom:
        case Op::Enabled: return lookup(f);
        case Op::Not: return complement(eval(f.args[0]));
        case Op::And: {
            Set s = eval(f.args[0]);
            for (std::size_t i = 1; i < f.args.size(); ++i) s = both(s, eval(f.args[i]));
            return s;
        }
        case Op::Or: {
            Set s = eval(f.args[0]);
            for (std::size_t i = 1; i < f.args.size(); ++i) s = either(s, eval(f.args[i]));
            return s;
        }
        case Op::A:
        case Op::E: return quantified(f.op == Op::A, f.args[0]);
        default: throw std::logic_error("path formula outside a path quantifier");
        }
    }

private:
    Set lookup(const Formula& f) {
        const auto& props = k_.propositions;
        const std::size_t np = props.size();
        for (std::size_t p = 0; p < np; ++p) {
            bool direct = props[p] == f;
            bool negated = f.op == Formula::Op::Atom && props[p].op == Formula::Op::Atom &&
                           props[p].atom == negate(f.atom);
            if (!direct && !negated) continue;
            Set s(n_);
            for (std::size_t st = 0; st < n_; ++st) s[st] = k_.label(st, p) != negated;
            return s;
        }
        throw std::invalid_argument("proposition not labelled in the structure: " + to_string(f));
    }

    Set quantified(bool universal, const Formula& g) {
        using Op = Formula::Op;
        if (is_state_formula(g)) return eval(g);
        if (is_temporal(g.op) &&
            std::all_of(g.args.begin(), g.args.end(), [](const Formula& a) { return is_state_formula(a); })) {
            std::vector<Set> a;
            for (const auto& arg : g.args) a.push_back(eval(arg));
            switch (g.op) {
            case Op::X: return universal ? ax(a[0]) : ex(a[0]);
            case Op::F: return universal ? au(Set(n_, 1), a[0]) : eu(Set(n_, 1), a[0]);
            case Op::G: return universal ? complement(eu(Set(n_, 1), complement(a[0]))) : eg(a[0]);
            case Op::U: return universal ? au(a[0], a[1]) : eu(a[0], a[1]);
            case Op::W:
                if (universal) {
                    Set nb = complement(a[1]);
                    return complement(eu(nb, both(complement(a[0]), nb)));
                }
                return either(eu(a[0], a[1]), eg(a[0]));
            case Op::R:
                if (universal) return complement(eu(complement(a[0]), complement(a[1])));
                return either(eu(a[1], both(a[0], a[1])), eg(a[1]));
            default: break;
            }
        }
        if (universal) return complement(exists_path(to_nnf(Formula::unary(Op::Not, g))));
        return exists_path(to_nnf(g));
    }

    Set ex(const Set& a) {
        Set out(n_, 0);
        for (std::size_t s = 0; s < n_; ++s)
            for (const auto& e : k_.successors(s))
                if (a[e.target]) {
                    out[s] = 1;
                    break;
                }
        return out;
    }

    Set ax(const Set& a) {
        Set out(n_, 1);
        for (std::size_t s = 0; s < n_; ++s)
            for (const auto& e : k_.successors(s))
                if (!a[e.target]) {
                    out[s] = 0;
                    break;
                }
        return out;
    }

    Set eu(const Set& a, const Set& b) {
        Set out = b;
        std::deque<std::size_t> queue;
        for (std::size_t s = 0; s < n_; ++s)
            if (b[s]) queue.push_back(s);
        while (!queue.empty()) {
            std::size_t t = queue.front();
            queue.pop_front();
            for (auto s : pre_[t])
                if (!out[s] && a[s]) {
                    out[s] = 1;
                    queue.push_back(s);
                }
        }
        return out;
    }

    Set au(const Set& a, const Set& b) {
        Set out = b;
        std::vector<std::size_t> pending(n_);
        for (std::size_t s = 0; s < n_; ++s) pending[s] = k_.successors(s).size();
        std::deque<std::size_t> queue;
        for (std::size_t s = 0; s < n_; ++s)
            if (b[s]) queue.push_back(s);
        while (!queue.empty()) {
            std::size_t t = queue.front();
            queue.pop_front();
            for (auto s : pre_[t]) {
                if (out[s] || !a[s]) continue;
                if (--pending[s] == 0) {
                    out[s] = 1;
                    queue.push_back(s);
                }
            }
        }
        return out;
    }

    Set eg(const Set& a) {
        Set out = a;
        std::vector<std::size_t> live(n_, 0);
        std::deque<std::size_t> queue;
        for (std::size_t s = 0; s < n_; ++s) {
            if (!out[s]) continue;
            for (const auto& e : k_.successors(s))
                if (out[e.target]) ++live[s];
            if (live[s] == 0) queue.push_back(s);
        }
        while (!queue.empty()) {
            std::size_t t = queue.front();
            queue.pop_front();
            if (!out[t]) continue;
            out[t] = 0;
            for (auto s : pre_[t])
                if (out[s] && --live[s] == 0) queue.push_back(s);
        }
        return out;
    }

    // ------------------------------------------------------------ tableau

    struct Node {
        enum class Kind { Prop, True, False, And, Or, Next, Until, Release };
        Kind kind;
        int a = -1;
        int b = -1;
        int prop = -1; // index into Tableau::props
        int var = -1;  // obligation bit for Next, Until, Release
    };

    struct Tableau {
        std::vector<Node> nodes;
        std::vector<int> vars;
        std::vector<Set> props;
        std::map<std::tuple<int, int, int, int>, int> index;
    };

    int intern(Tableau& tb, Node n) {
        auto key = std::make_tuple(static_cast<int>(n.kind), n.a, n.b, n.prop);
        auto it = tb.index.find(key);
        if (it != tb.index.end()) return it->second;
        if (n.kind == Node::Kind::Next || n.kind == Node::Kind::Until || n.kind == Node::Kind::Release)
            n.var = static_cast<int>(tb.vars.size());
        tb.nodes.push_back(n);
        int id = static_cast<int>(tb.nodes.size()) - 1;
        if (n.var >= 0) tb.vars.push_back(id);
        tb.index.emplace(key, id);
        return id;
    }

    int translate(Tableau& tb, const Formula& f) {
        using Op = Formula::Op;
        using K = Node::Kind;
        if (is_state_formula(f)) {
            if (f.op == Op::True) return intern(tb, {K::True});
            if (f.op == Op::False) return intern(tb, {K::False});
            Set sat = eval(f);
            tb.props.push_back(std::move(sat));
            return intern(tb, {K::Prop, -1, -1, static_cast<int>(tb.props.size()) - 1});
        }
        auto chain = [&](K kind) {
            int acc = translate(tb, f.args[0]);
            for (std::size_t i = 1; i < f.args.size(); ++i) acc = intern(tb, {kind, acc, translate(tb, f.args[i])});
            return acc;
        };
        switch (f.op) {
        case Op::And: return chain(K::And);
        case Op::Or: return chain(K::Or);
        case Op::X: return intern(tb, {K::Next, translate(tb, f.args[0])});
        case Op::F: return intern(tb, {K::Until, intern(tb, {K::True}), translate(tb, f.args[0])});
        case Op::G: return intern(tb, {K::Release, intern(tb, {K::False}), translate(tb, f.args[0])});
        case Op::U: return intern(tb, {K::Until, translate(tb, f.args[0]), translate(tb, f.args[1])});
        case Op::R: return intern(tb, {K::Release, translate(tb, f.args[0]), translate(tb, f.args[1])});
        case Op::W: {
            int a = translate(tb, f.args[0]);
            int b = translate(tb, f.args[1]);
            return intern(tb, {K::Release, b, intern(tb, {K::Or, a, b})});
        }
        default: throw std::logic_error("unexpected operator in path formula: " + to_string(f));
        }
    }

    // Truth of every node at (state, mask); nodes are in dependency order.
    static void values(const Tableau& tb, std::size_t s, std::uint32_t mask, std::vector<char>& v) {
        using K = Node::Kind;
        v.resize(tb.nodes.size());
        for (std::size_t i = 0; i < tb.nodes.size(); ++i) {
            const auto& n = tb.nodes[i];
            const bool bit = n.var >= 0 && ((mask >> n.var) & 1U);
            switch (n.kind) {
            case K::Prop: v[i] = tb.props[static_cast<std::size_t>(n.prop)][s]; break;
            case K::True: v[i] = 1; break;
            case K::False: v[i] = 0; break;
            case K::And: v[i] = v[static_cast<std::size_t>(n.a)] && v[static_cast<std::size_t>(n.b)]; break;
            case K::Or: v[i] = v[static_cast<std::size_t>(n.a)] || v[static_cast<std::size_t>(n.b)]; break;
            case K::Next: v[i] = bit; break;
            case K::Until:
                v[i] = v[static_cast<std::size_t>(n.b)] || (v[static_cast<std::size_t>(n.a)] && bit);
                break;
            case K::Release:
                v[i] = v[static_cast<std::size_t>(n.b)] && (v[static_cast<std::size_t>(n.a)] || bit);
                break;
            }
        }
    }

    Set exists_path(const Formula& g) {
        Tableau tb;
        const int root = translate(tb, g);
        const auto& nodes = tb.nodes;
        const auto& vars = tb.vars;
        const std::size_t k = vars.size();
        if (k > 20) throw UnsupportedFormula("too many temporal subformulas for the product check");
        const std::size_t masks = std::size_t{1} << k;
        if (n_ * masks > options_.productCap)
            throw UnsupportedFormula("product of " + std::to_string(n_) + " states and " +
                                     std::to_string(masks) + " obligation sets exceeds the cap");
        const std::size_t total = n_ * masks;

        std::vector<std::uint32_t> req(total);
        std::vector<char> rootValue(total);
        std::vector<char> fairness; // per node, one flag per until-subformula
        std::vector<int> untils;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].kind == Node::Kind::Until) untils.push_back(static_cast<int>(i));
        fairness.resize(total * untils.size());
        std::vector<char> v;
        for (std::size_t s = 0; s < n_; ++s) {
            if ((s & 1023) == 0 && options_.stop.stop_requested()) throw Interrupted("check cancelled");
            for (std::uint32_t m = 0; m < masks; ++m) {
                values(tb, s, m, v);
                const std::size_t id = s * masks + m;
                std::uint32_t r = 0;
                for (std::size_t x = 0; x < k; ++x) {
                    const auto& n = nodes[static_cast<std::size_t>(vars[x])];
                    bool need = n.kind == Node::Kind::Next ? v[static_cast<std::size_t>(n.a)]
                                                           : v[static_cast<std::size_t>(vars[x])];
                    if (need) r |= 1U << x;
                }
                req[id] = r;
                rootValue[id] = v[static_cast<std::size_t>(root)];
                for (std::size_t u = 0; u < untils.size(); ++u) {
                    const auto& n = nodes[static_cast<std::size_t>(untils[u])];
                    fairness[id * untils.size() + u] =
                        !v[static_cast<std::size_t>(untils[u])] || v[static_cast<std::size_t>(n.b)];
                }
            }
        }
        // Per state, successor masks grouped by the obligation they require.
        std::vector<std::uint32_t> byReq(total);
        for (std::size_t s = 0; s < n_; ++s) {
            auto* first = byReq.data() + s * masks;
            for (std::uint32_t m = 0; m < masks; ++m) first[m] = m;
            std::stable_sort(first, first + masks, [&](std::uint32_t a, std::uint32_t b) {
                return req[s * masks + a] < req[s * masks + b];
            });
        }
        auto bucket = [&](std::size_t s, std::uint32_t need) {
            const auto* first = byReq.data() + s * masks;
            const auto* last = first + masks;
            auto lo = std::partition_point(first, last,
                                           [&](std::uint32_t m) { return req[s * masks + m] < need; });
            auto hi = std::partition_point(lo, last,
                                           [&](std::uint32_t m) { return req[s * masks + m] <= need; });
            return std::make_pair(lo, hi);
        };

        // Iterative Tarjan. An SCC is good when it is fair or reaches a good SCC;
        // successor SCCs complete first, so goodness propagates on completion.
        constexpr std::uint32_t kUnvisited = 0xffffffffU;
        std::vector<std::uint32_t> index(total, kUnvisited), low(total, 0);
        std::vector<char> onStack(total, 0), good(total, 0), done(total, 0);
        std::vector<std::uint32_t> stack;
        struct Frame {
            std::uint32_t node;
            std::size_t edge;
            const std::uint32_t* it;
            const std::uint32_t* end;
        };
        std::vector<Frame> calls;
        std::uint32_t counter = 0;

        auto open = [&](std::uint32_t node) {
            index[node] = low[node] = counter++;
            stack.push_back(node);
            onStack[node] = 1;
            calls.push_back({node, 0, nullptr, nullptr});
        };

        for (std::uint32_t startNode = 0; startNode < total; ++startNode) {
            if (index[startNode] != kUnvisited) continue;
            open(startNode);
            while (!calls.empty()) {
                Frame& fr = calls.back();
                const std::size_t s = fr.node / masks;
                const std::uint32_t m = static_cast<std::uint32_t>(fr.node % masks);
                auto succ = k_.successors(s);
                std::uint32_t nextNode = kUnvisited;
                while (nextNode == kUnvisited) {
                    if (fr.it != fr.end) {
                        std::uint32_t cand = static_cast<std::uint32_t>(succ[fr.edge - 1].target * masks + *fr.it);
                        ++fr.it;
                        if (index[cand] == kUnvisited) {
                            nextNode = cand;
                        } else if (onStack[cand]) {
                            low[fr.node] = std::min(low[fr.node], index[cand]);
                        }
                        continue;
                    }
                    if (fr.edge == succ.size()) break;
                    auto [lo, hi] = bucket(succ[fr.edge].target, m);
                    fr.it = lo;
                    fr.end = hi;
                    ++fr.edge;
                }
                if (nextNode != kUnvisited) {
                    open(nextNode);
                    continue;
                }
                const std::uint32_t node = fr.node;
                calls.pop_back();
                if (!calls.empty()) low[calls.back().node] = std::min(low[calls.back().node], low[node]);
                if (low[node] != index[node]) continue;

                std::vector<std::uint32_t> scc;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    onStack[w] = 0;
                    scc.push_back(w);
                } while (w != node);
                for (auto x : scc) done[x] = 2; // marks membership while classifying
                bool nontrivial = scc.size() > 1;
                bool isGood = false;
                std::vector<char> met(untils.size(), 0);
                for (auto x : scc) {
                    const std::size_t xs = x / masks;
                    const std::uint32_t xm = static_cast<std::uint32_t>(x % masks);
                    for (std::size_t u = 0; u < untils.size(); ++u)
                        if (fairness[x * untils.size() + u]) met[u] = 1;
                    for (const auto& e : k_.successors(xs)) {
                        auto [lo, hi] = bucket(e.target, xm);
                        for (auto it = lo; it != hi; ++it) {
                            std::uint32_t y = static_cast<std::uint32_t>(e.target * masks + *it);
                            if (y == x) nontrivial = true;
                            if (done[y] == 1 && good[y]) isGood = true;
                        }
                    }
                }
                if (nontrivial && std::all_of(met.begin(), met.end(), [](char c) { return c != 0; }))
                    isGood = true;
                for (auto x : scc) {
                    done[x] = 1;
                    good[x] = isGood;
                }
            }
        }

        Set out(n_, 0);
        for (std::size_t s = 0; s < n_; ++s)
            for (std::uint32_t m = 0; m < masks; ++m)
                if (rootValue[s * masks + m] && good[s * masks + m]) {
                    out[s] = 1;
                    break;
                }
        return out;
    }

    const KripkeStructure& k_;
    const CheckOptions& options_;
    std::size_t n_;
    std::vector<std::vector<std::size_t>> pre_;
};

} // namespace

std::vector<char> satisfying_states(const KripkeStructure& k, const Formula& f, const CheckOptions& options) {
    Checker checker(k, options);
    return checker.eval(f);
}

bool check_ctl(const KripkeStructure& k, const Formula& f, const CheckOptions& options) {
    if (k.size() == 0) throw std::invalid_argument("empty Kripke structure");
    const Formula g = is_state_formula(f) ? f : Formula::unary(Formula::Op::A, f);
    return satisfying_states(k, g, options)[k.initial] != 0;
}

} // namespace skel
