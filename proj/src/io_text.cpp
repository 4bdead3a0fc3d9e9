#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "skel/error.hpp"
#include "skel/io.hpp"

namespace skel {

namespace {

// ---------------------------------------------------------------- lexing

struct Lexeme {
    enum class Kind { Ident, Int, String, Punct, End };

    Kind kind = Kind::End;
    std::string text;
    std::size_t column = 0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::vector<Lexeme> tokenize(std::string_view line, std::size_t lineNo) {
    static const char* const pairs[] = {"..", "++", "--", "&&", "||", "<=", ">=", "!=", "=="};
    std::vector<Lexeme> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;
        Lexeme l;
        l.column = i + 1;
        if (ident_start(c)) {
            auto j = i;
            while (j < line.size() && ident_char(line[j])) ++j;
            // A trailing ".." belongs to a range, not to the name.
            while (j > i + 1 && line[j - 1] == '.') --j;
            l.kind = Lexeme::Kind::Ident;
            l.text = std::string(line.substr(i, j - i));
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            auto j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
            l.kind = Lexeme::Kind::Int;
            l.text = std::string(line.substr(i, j - i));
            i = j;
        } else if (c == '"') {
            auto j = i + 1;
            while (j < line.size() && line[j] != '"') ++j;
            if (j == line.size()) throw ParseError("unterminated string", lineNo, i + 1);
            l.kind = Lexeme::Kind::String;
            l.text = std::string(line.substr(i + 1, j - i - 1));
            i = j + 1;
        } else {
            l.kind = Lexeme::Kind::Punct;
            l.text = std::string(1, c);
            for (const char* p : pairs)
                if (line.substr(i, 2) == p) l.text = p;
            if (std::string_view("'(),+-*=:{}<>!@").find(c) == std::string_view::npos && l.text.size() == 1)
                throw ParseError(std::string("unexpected character '") + c + "'", lineNo, i + 1);
            i += l.text.size();
        }
        out.push_back(std::move(l));
    }
    Lexeme end;
    end.column = line.size() + 1;
    out.push_back(end);
    return out;
}

class Cursor {
public:
    Cursor(std::vector<Lexeme> tokens, std::size_t line) : tokens_(std::move(tokens)), line_(line) {}

    const Lexeme& peek(std::size_t ahead = 0) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    bool at_end() const { return peek().kind == Lexeme::Kind::End; }
    bool is(std::string_view punct) const { return peek().kind == Lexeme::Kind::Punct && peek().text == punct; }
    bool is_word(std::string_view word) const {
        return peek().kind == Lexeme::Kind::Ident && peek().text == word;
    }
    bool accept(std::string_view punct) {
        if (!is(punct)) return false;
        ++pos_;
        return true;
    }
    bool accept_word(std::string_view word) {
        if (!is_word(word)) return false;
        ++pos_;
        return true;
    }
    void expect(std::string_view punct) {
        if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
    }
    void expect_word(std::string_view word) {
        if (!accept_word(word)) fail("expected '" + std::string(word) + "'");
    }
    std::string name() {
        const auto& l = peek();
        if (l.kind != Lexeme::Kind::Ident && l.kind != Lexeme::Kind::String) fail("expected a name");
        ++pos_;
        return l.text;
    }
    // Names of colours may also be plain integers.
    std::string colour() {
        if (peek().kind == Lexeme::Kind::Int) return tokens_[pos_++].text;
        return name();
    }
    long long integer() {
        bool negative = accept("-");
        const auto& l = peek();
        if (l.kind != Lexeme::Kind::Int) fail("expected an integer");
        ++pos_;
        try {
            auto v = std::stoll(l.text);
            return negative ? -v : v;
        } catch (const std::out_of_range&) {
            fail("integer out of range");
        }
    }
    void finish() {
        if (!at_end()) fail("unexpected '" + peek().text + "'");
    }
    [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, peek().column); }
    std::size_t line() const { return line_; }
    std::size_t column() const { return peek().column; }

private:
    std::vector<Lexeme> tokens_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

// ---------------------------------------------------------------- shared pieces

const std::set<std::string, std::less<>> kReserved = {"all", "true", "false"};

bool plain_name(std::string_view s) {
    if (s.empty() || !ident_start(s[0]) || s.back() == '.') return false;
    if (kReserved.count(s)) return false;
    return std::all_of(s.begin(), s.end(), ident_char);
}

std::string quoted(const std::string& s) {
    if (s.find('"') != std::string::npos) throw std::invalid_argument("name '" + s + "' contains a quote");
    return plain_name(s) ? s : "\"" + s + "\"";
}

std::string colour_text(const std::string& c) {
    bool digits = !c.empty() && std::all_of(c.begin(), c.end(), [](char x) { return std::isdigit(static_cast<unsigned char>(x)); });
    return digits ? c : quoted(c);
}

struct Scope {
    std::map<std::string, BasicSort> sorts;

    const BasicSort& sort(Cursor& in) const {
        auto column = in.column();
        auto n = in.name();
        auto it = sorts.find(n);
        if (it != sorts.end()) return it->second;
        static const BasicSort dot = BasicSort::dot();
        if (n == "dot") return dot;
        throw ParseError("unknown sort '" + n + "'", in.line(), column);
    }

    int constant(Cursor& in) const {
        auto column = in.column();
        auto c = in.colour();
        std::optional<int> value;
        auto check = [&](const BasicSort& s) {
            if (auto i = s.index_of(c)) {
                if (value && *value != s.value(*i))
                    throw ParseError("colour '" + c + "' is ambiguous", in.line(), column);
                value = s.value(*i);
            }
        };
        for (const auto& [name, s] : sorts) check(s);
        check(BasicSort::dot());
        if (!value) throw ParseError("unknown colour '" + c + "'", in.line(), column);
        return *value;
    }

    Term term(Cursor& in) const {
        Term t;
        if (in.accept("@")) {
            t = Term::value(constant(in));
        } else if (in.peek().kind == Lexeme::Kind::Int || in.is("-")) {
            t = Term::value(static_cast<int>(in.integer()));
        } else {
            t = Term::var(in.name());
        }
        while (true) {
            if (in.accept("++")) t = t.successor();
            else if (in.accept("--")) t = t.predecessor();
            else return t;
        }
    }

    Expr primary(Cursor& in) const {
        if (in.accept("!")) return negate(primary(in));
        if (in.accept("(")) {
            auto e = expr(in);
            in.expect(")");
            return e;
        }
        if (in.accept_word("true")) return Expr::truth(true);
        if (in.accept_word("false")) return Expr::truth(false);
        auto lhs = term(in);
        static const std::map<std::string, CompareOp, std::less<>> ops = {
            {"=", CompareOp::Eq}, {"==", CompareOp::Eq}, {"!=", CompareOp::Ne}, {"<", CompareOp::Lt},
            {"<=", CompareOp::Le}, {">", CompareOp::Gt},  {">=", CompareOp::Ge}};
        const auto& l = in.peek();
        auto it = l.kind == Lexeme::Kind::Punct ? ops.find(l.text) : ops.end();
        if (it == ops.end()) in.fail("expected a comparison");
        in.accept(l.text);
        return Expr::comparison(std::move(lhs), it->second, term(in));
    }
    Expr conjunction(Cursor& in) const {
        std::vector<Expr> parts{primary(in)};
        while (in.accept("&&")) parts.push_back(primary(in));
        return Expr::conjunction(std::move(parts));
    }
    Expr expr(Cursor& in) const {
        std::vector<Expr> parts{conjunction(in)};
        while (in.accept("||")) parts.push_back(conjunction(in));
        return Expr::disjunction(std::move(parts));
    }
};

Tokens multiplicity(Cursor& in) {
    if (in.peek().kind == Lexeme::Kind::Int && in.peek(1).kind == Lexeme::Kind::Punct && in.peek(1).text == "'") {
        auto v = in.integer();
        in.expect("'");
        return static_cast<Tokens>(v);
    }
    return 1;
}

// ---------------------------------------------------------------- P/T

PTNet parse_pt(const std::vector<std::pair<std::size_t, std::string>>& lines) {
    PTNet net;
    struct PendingArc {
        std::size_t transition;
        bool input;
        std::string place;
        Tokens weight;
        std::size_t line, column;
    };
    std::vector<PendingArc> arcs;
    std::optional<std::size_t> current;
    for (const auto& [lineNo, text] : lines) {
        Cursor in(tokenize(text, lineNo), lineNo);
        if (in.accept_word("place")) {
            auto column = in.column();
            auto name = in.name();
            Tokens tokens = 0;
            if (in.accept("=")) tokens = static_cast<Tokens>(in.integer());
            in.finish();
            if (net.find_place(name)) throw ParseError("duplicate place '" + name + "'", lineNo, column);
            net.add_place(name, tokens);
        } else if (in.accept_word("transition")) {
            auto column = in.column();
            auto name = in.name();
            in.finish();
            if (net.find_transition(name)) throw ParseError("duplicate transition '" + name + "'", lineNo, column);
            current = net.add_transition(name);
        } else if (in.is_word("in") || in.is_word("out")) {
            bool input = in.is_word("in");
            if (!current) in.fail("arc outside a transition");
            in.name();
            do {
                auto w = multiplicity(in);
                auto column = in.column();
                arcs.push_back({*current, input, in.name(), w, lineNo, column});
            } while (in.accept("+"));
            in.finish();
        } else {
            in.fail("expected place, transition, in or out");
        }
    }
    for (const auto& a : arcs) {
        auto p = net.find_place(a.place);
        if (!p) throw ParseError("unknown place '" + a.place + "'", a.line, a.column);
        if (a.weight == 0) throw ParseError("zero arc weight", a.line, a.column);
        if (a.input) net.add_input(*p, a.transition, a.weight);
        else net.add_output(a.transition, *p, a.weight);
    }
    net.validate();
    return net;
}

std::string print_pt(const PTNet& net) {
    std::ostringstream out;
    out << "net pt\n";
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        out << "place " << quoted(net.places[p]);
        if (net.initial[p]) out << " = " << net.initial[p];
        out << '\n';
    }
    auto sum = [&](const std::vector<Arc>& arcs) {
        std::string s;
        for (const auto& a : arcs) {
            if (!s.empty()) s += " + ";
            if (a.weight != 1) s += std::to_string(a.weight) + "'";
            s += quoted(net.places[a.place]);
        }
        return s;
    };
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        out << "transition " << quoted(net.transitions[t]) << '\n';
        if (!net.pre[t].empty()) out << "  in " << sum(net.pre[t]) << '\n';
        if (!net.post[t].empty()) out << "  out " << sum(net.post[t]) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------- coloured

struct RawMode {
    std::vector<std::string> colours;
    std::size_t line, column;
};

struct RawArc {
    std::string place;
    bool input;
    std::vector<InscriptionItem> items;
    std::size_t line, column;
};

struct RawTransition {
    HighLevelTransition t;
    std::vector<RawArc> arcs;
    std::vector<RawMode> modes;
    std::vector<Expr> guards;
};

std::vector<InscriptionItem> inscription(Cursor& in, const Scope& scope) {
    std::vector<InscriptionItem> items;
    bool negative = in.accept("-");
    do {
        InscriptionItem item;
        item.negative = negative;
        item.multiplicity = multiplicity(in);
        if (in.accept_word("all")) {
            item.all = true;
        } else if (in.accept("(")) {
            do item.tuple.push_back(scope.term(in));
            while (in.accept(","));
            in.expect(")");
        } else {
            item.tuple.push_back(scope.term(in));
        }
        items.push_back(std::move(item));
        if (in.accept("+")) negative = false;
        else if (in.accept("-")) negative = true;
        else break;
    } while (true);
    return items;
}

Multiset marking(Cursor& in, const ColourDomain& dom) {
    Multiset m(dom.size(), 0);
    do {
        auto k = multiplicity(in);
        if (in.accept_word("all")) {
            for (auto& c : m) c += k;
            continue;
        }
        auto column = in.column();
        std::vector<std::string> parts;
        if (in.accept("(")) {
            do parts.push_back(in.colour());
            while (in.accept(","));
            in.expect(")");
        } else {
            parts.push_back(in.colour());
        }
        if (parts.size() != dom.arity()) throw ParseError("colour arity mismatch", in.line(), column);
        std::vector<std::size_t> idx;
        for (std::size_t c = 0; c < parts.size(); ++c) {
            auto i = dom.components[c].index_of(parts[c]);
            if (!i) throw ParseError("unknown colour '" + parts[c] + "'", in.line(), column);
            idx.push_back(*i);
        }
        m[dom.encode(idx)] += k;
    } while (in.accept("+"));
    return m;
}

SymmetricNet parse_coloured(const std::vector<std::pair<std::size_t, std::string>>& lines) {
    SymmetricNet net;
    Scope scope;
    std::vector<RawTransition> transitions;
    std::set<std::string> placeNames;
    for (const auto& [lineNo, text] : lines) {
        Cursor in(tokenize(text, lineNo), lineNo);
        if (in.accept_word("sort")) {
            auto column = in.column();
            auto name = in.name();
            in.expect("=");
            BasicSort s;
            if (in.accept_word("enum")) {
                in.expect("{");
                std::vector<std::string> colours;
                do colours.push_back(in.colour());
                while (in.accept(","));
                in.expect("}");
                s = BasicSort::enumeration(name, colours);
            } else if (in.accept_word("range")) {
                auto lo = in.integer();
                in.expect("..");
                auto hi = in.integer();
                if (hi < lo) in.fail("empty range");
                s = BasicSort::range(name, static_cast<int>(lo), static_cast<int>(hi));
            } else {
                in.fail("expected enum or range");
            }
            in.finish();
            if (!scope.sorts.emplace(name, s).second)
                throw ParseError("duplicate sort '" + name + "'", lineNo, column);
        } else if (in.accept_word("var")) {
            auto name = in.name();
            in.expect(":");
            GuardVariable v{name, scope.sort(in)};
            in.finish();
            if (transitions.empty()) net.variables[name] = v.sort;
            else transitions.back().t.variables.push_back(std::move(v));
        } else if (in.accept_word("place")) {
            auto column = in.column();
            auto name = in.name();
            in.expect(":");
            std::vector<BasicSort> sorts{scope.sort(in)};
            while (in.accept("*")) sorts.push_back(scope.sort(in));
            ColourDomain dom(std::move(sorts));
            Multiset m(dom.size(), 0);
            if (in.accept("=")) m = marking(in, dom);
            in.finish();
            if (!placeNames.insert(name).second) throw ParseError("duplicate place '" + name + "'", lineNo, column);
            net.places.push_back({name, std::move(dom), std::move(m)});
        } else if (in.accept_word("transition")) {
            RawTransition t;
            t.t.name = in.name();
            if (in.accept_word("nonfull")) t.t.assumedNonFull = true;
            in.finish();
            transitions.push_back(std::move(t));
        } else if (in.is_word("in") || in.is_word("out")) {
            if (transitions.empty()) in.fail("arc outside a transition");
            RawArc arc;
            arc.input = in.is_word("in");
            in.name();
            arc.line = lineNo;
            arc.column = in.column();
            arc.place = in.name();
            in.expect(":");
            arc.items = inscription(in, scope);
            in.finish();
            transitions.back().arcs.push_back(std::move(arc));
        } else if (in.accept_word("guard")) {
            if (transitions.empty()) in.fail("guard outside a transition");
            transitions.back().guards.push_back(scope.expr(in));
            in.finish();
        } else if (in.accept_word("mode")) {
            if (transitions.empty()) in.fail("mode outside a transition");
            RawMode m{{}, lineNo, in.column()};
            while (!in.at_end()) m.colours.push_back(in.colour());
            transitions.back().t.extensional = true;
            transitions.back().modes.push_back(std::move(m));
        } else if (in.accept_word("extensional")) {
            if (transitions.empty()) in.fail("extensional outside a transition");
            in.finish();
            transitions.back().t.extensional = true;
        } else {
            in.fail("expected sort, var, place, transition, in, out, guard or mode");
        }
    }

    std::map<std::string, std::size_t> placeIndex;
    for (std::size_t p = 0; p < net.places.size(); ++p) placeIndex[net.places[p].name] = p;
    std::set<std::string> transitionNames;
    for (auto& raw : transitions) {
        auto& t = raw.t;
        if (!transitionNames.insert(t.name).second)
            throw std::invalid_argument("duplicate transition '" + t.name + "'");
        for (auto& a : raw.arcs) {
            auto it = placeIndex.find(a.place);
            if (it == placeIndex.end()) throw ParseError("unknown place '" + a.place + "'", a.line, a.column);
            (a.input ? t.inputs : t.outputs).push_back({it->second, std::move(a.items)});
        }
        if (!raw.guards.empty() && t.extensional)
            throw std::invalid_argument("transition '" + t.name + "' has both a guard and modes");
        t.guard = Expr::conjunction(std::move(raw.guards));
        if (t.extensional) {
            // Variable layout of the simplified transition: merged arcs in
            // place order, inputs first.
            std::vector<const BasicSort*> layout;
            for (auto* arcs : {&t.inputs, &t.outputs}) {
                std::vector<HighLevelArc> sorted = *arcs;
                std::stable_sort(sorted.begin(), sorted.end(),
                                 [](const auto& a, const auto& b) { return a.place < b.place; });
                for (const auto& a : sorted)
                    for (const auto& item : a.items)
                        for (Tokens k = 0; k < item.multiplicity && !item.all; ++k)
                            for (const auto& s : net.places[a.place].domain.components) layout.push_back(&s);
            }
            for (const auto& m : raw.modes) {
                if (m.colours.size() != layout.size())
                    throw ParseError("mode lists " + std::to_string(m.colours.size()) + " colours, expected " +
                                         std::to_string(layout.size()),
                                     m.line, m.column);
                FiringMode mode;
                for (std::size_t i = 0; i < layout.size(); ++i) {
                    auto idx = layout[i]->index_of(m.colours[i]);
                    if (!idx) throw ParseError("unknown colour '" + m.colours[i] + "'", m.line, m.column);
                    mode.colours.push_back(*idx);
                }
                t.modes.push_back(std::move(mode));
            }
        }
        net.transitions.push_back(std::move(t));
    }
    return net;
}

std::string term_text(const Term& t) {
    std::string out = t.is_variable() ? quoted(t.variable) : std::to_string(t.constant);
    for (int i = 0; i < t.shift; ++i) out += "++";
    for (int i = 0; i > t.shift; --i) out += "--";
    return out;
}

std::string expr_text(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::True: return "true";
    case Expr::Kind::False: return "false";
    case Expr::Kind::Compare:
        return term_text(e.lhs) + " " + std::string(to_string(e.op)) + " " + term_text(e.rhs);
    case Expr::Kind::And:
    case Expr::Kind::Or: break;
    }
    std::string out;
    for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += e.kind == Expr::Kind::And ? " && " : " || ";
        const auto& c = e.children[i];
        bool paren = c.kind == Expr::Kind::And || c.kind == Expr::Kind::Or;
        out += paren ? "(" + expr_text(c) + ")" : expr_text(c);
    }
    return out;
}

std::string sort_line(const BasicSort& s) {
    bool range = true;
    for (std::size_t i = 0; i < s.size(); ++i) range = range && s.colours[i] == std::to_string(s.value(i));
    if (range) return "sort " + quoted(s.name) + " = range " + std::to_string(s.lo()) + " .. " + std::to_string(s.hi());
    std::string out = "sort " + quoted(s.name) + " = enum { ";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + colour_text(s.colours[i]);
    return out + " }";
}

std::string print_coloured(const ColouredNet& net) {
    std::vector<const BasicSort*> sorts;
    auto note = [&](const BasicSort& s) {
        for (const auto* known : sorts)
            if (known->name == s.name) {
                if (!(*known == s)) throw std::invalid_argument("two different sorts are named '" + s.name + "'");
                return;
            }
        sorts.push_back(&s);
    };
    for (const auto& p : net.places)
        for (const auto& s : p.domain.components) note(s);
    for (const auto& t : net.transitions)
        for (const auto& h : t.hidden) note(h.sort);

    std::ostringstream out;
    out << "net coloured\n";
    for (const auto* s : sorts)
        if (!(s->name == "dot" && *s == BasicSort::dot())) out << sort_line(*s) << '\n';
    for (const auto& p : net.places) {
        out << "place " << quoted(p.name) << " : ";
        for (std::size_t c = 0; c < p.domain.arity(); ++c) out << (c ? " * " : "") << quoted(p.domain.components[c].name);
        std::string m;
        for (std::size_t c = 0; c < p.initial.size(); ++c) {
            if (!p.initial[c]) continue;
            if (!m.empty()) m += " + ";
            m += std::to_string(p.initial[c]) + "'";
            auto idx = p.domain.decode(c);
            if (idx.size() == 1) {
                m += colour_text(p.domain.components[0].colours[idx[0]]);
            } else {
                m += "(";
                for (std::size_t k = 0; k < idx.size(); ++k)
                    m += (k ? ", " : "") + colour_text(p.domain.components[k].colours[idx[k]]);
                m += ")";
            }
        }
        if (!m.empty()) out << " = " << m;
        out << '\n';
    }
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        const auto& tr = net.transitions[t];
        out << "transition " << quoted(tr.name) << (tr.assumedNonFull ? " nonfull" : "") << '\n';
        auto arcs = [&](const std::vector<ColouredArc>& list, const char* kw) {
            for (const auto& a : list) {
                std::string s;
                for (const auto& tok : a.tokens) {
                    if (!s.empty()) s += " + ";
                    if (tok.size() == 1) {
                        s += quoted(tok[0]);
                    } else {
                        s += "(";
                        for (std::size_t k = 0; k < tok.size(); ++k) s += (k ? ", " : "") + quoted(tok[k]);
                        s += ")";
                    }
                }
                if (a.allCopies) {
                    if (!s.empty()) s += " + ";
                    if (a.allCopies != 1) s += std::to_string(a.allCopies) + "'";
                    s += "all";
                }
                out << "  " << kw << ' ' << quoted(net.places[a.place].name) << " : " << s << '\n';
            }
        };
        arcs(tr.inputs, "in");
        arcs(tr.outputs, "out");
        for (const auto& h : tr.hidden) out << "  var " << quoted(h.name) << " : " << quoted(h.sort.name) << '\n';
        if (tr.guard.extensional()) {
            auto layout = variable_layout(net, t);
            if (tr.guard.modes().empty()) out << "  extensional\n";
            for (const auto& m : tr.guard.modes()) {
                out << "  mode";
                for (std::size_t i = 0; i < m.colours.size(); ++i)
                    out << ' ' << colour_text(layout[i].sort->colours[m.colours[i]]);
                out << '\n';
            }
        } else if (tr.guard.expression().kind != Expr::Kind::True) {
            out << "  guard " << expr_text(tr.guard.expression()) << '\n';
        }
    }
    return out.str();
}

// Non-empty lines with their numbers; the header line is consumed.
std::pair<std::string, std::vector<std::pair<std::size_t, std::string>>> split_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    std::string kind;
    std::size_t lineNo = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++lineNo;
        start = end + 1;
        Cursor probe(tokenize(line, lineNo), lineNo);
        if (probe.at_end()) continue;
        if (kind.empty()) {
            probe.expect_word("net");
            if (probe.accept_word("pt")) kind = "pt";
            else if (probe.accept_word("coloured") || probe.accept_word("colored")) kind = "coloured";
            else probe.fail("expected 'pt' or 'coloured'");
            probe.finish();
            continue;
        }
        lines.emplace_back(lineNo, std::move(line));
    }
    return {kind, lines};
}

} // namespace

AnyNet parse_net(std::string_view text) {
    auto [kind, lines] = split_lines(text);
    if (kind.empty() || kind == "pt") return parse_pt(lines);
    return simplify_inscriptions(parse_coloured(lines));
}

SymmetricNet parse_symmetric(std::string_view text) {
    auto [kind, lines] = split_lines(text);
    if (kind != "coloured") throw ParseError("expected a coloured net", 1, 1);
    return parse_coloured(lines);
}

std::string print_net(const PTNet& net) { return print_pt(net); }
std::string print_net(const ColouredNet& net) { return print_coloured(net); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

AnyNet load_net(const std::string& path) {
    auto text = read_file(path);
    auto dot = path.rfind('.');
    auto ext = dot == std::string::npos ? std::string() : path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == "pnml" || ext == "xml") return parse_pnml(text);
    return parse_net(text);
}

std::vector<FormulaEntry> parse_formula_file(std::string_view text) {
    std::vector<FormulaEntry> out;
    std::size_t lineNo = 0, start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        start = end + 1;
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            // Quoted names may contain '#'.
            bool inQuote = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (line[i] == '"') inQuote = !inQuote;
                if (line[i] == '#' && !inQuote) {
                    line.resize(i);
                    break;
                }
            }
        }
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (out.size() == kMaxFormulasPerFile)
            throw ParseError("more than " + std::to_string(kMaxFormulasPerFile) + " formulas", lineNo, 1);
        try {
            out.push_back({lineNo, line, parse_formula(line)});
        } catch (const ParseError& e) {
            throw ParseError(std::string("formula: ") + e.what(), lineNo, first + 1 + (e.column() ? e.column() - 1 : 0));
        }
    }
    return out;
}

std::string kripke_to_dot(const KripkeStructure& k, std::string_view name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    for (std::size_t s = 0; s < k.size(); ++s) {
        out << "  s" << s << " [label=\"";
        auto m = k.marking(s);
        for (std::size_t i = 0; i < m.size(); ++i) out << (i ? "," : "") << m[i];
        out << '"' << (s == k.initial ? ", penwidth=2" : "") << "];\n";
    }
    for (std::size_t s = 0; s < k.size(); ++s)
        for (const auto& e : k.successors(s)) {
            out << "  s" << s << " -> s" << e.target << " [label=\"" << k.actions[e.action] << '"';
            if (k.silentActions[e.action]) out << ", style=dashed";
            out << "];\n";
        }
    out << "}\n";
    return out.str();
}

std::string machine_record(std::size_t id, const Verdict& v, bool timing) {
    std::ostringstream out;
    out << id << '\t' << to_string(v.value) << '\t' << to_string(v.basis) << '\t' << v.states << '\t';
    if (timing) out << static_cast<long long>(v.milliseconds + 0.5);
    else out << '-';
    return out.str();
}

std::string human_record(const FormulaEntry& f, const Verdict& v) {
    std::ostringstream out;
    out << "formula " << f.id << ": " << f.text << "\n  " << to_string(v.value);
    if (v.basis != Basis::None) out << " (" << to_string(v.basis) << (v.folded ? ", folded" : "") << ')';
    if (v.abstractResult) out << ", abstract " << (*v.abstractResult ? "TRUE" : "FALSE");
    out << ", " << v.states << " states";
    if (!v.reason.empty()) out << "\n  " << v.reason;
    return out.str();
}

} // namespace skel
