#include "skel/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>

#include "skel/error.hpp"

namespace skel {

AtomicProposition AtomicProposition::make(std::vector<LinearTerm> terms, std::int64_t bound) {
    std::sort(terms.begin(), terms.end(),
              [](const LinearTerm& a, const LinearTerm& b) { return a.place < b.place; });
    AtomicProposition a;
    a.bound = bound;
    for (auto& t : terms) {
        if (!a.terms.empty() && a.terms.back().place == t.place) a.terms.back().coefficient += t.coefficient;
        else a.terms.push_back(std::move(t));
    }
    std::erase_if(a.terms, [](const LinearTerm& t) { return t.coefficient == 0; });
    return a;
}

AtomicProposition negate(const AtomicProposition& a) {
    AtomicProposition n = a;
    for (auto& t : n.terms) t.coefficient = -t.coefficient;
    n.bound = -a.bound - 1;
    return n;
}

Formula Formula::constant(bool value) {
    Formula f;
    f.op = value ? Op::True : Op::False;
    return f;
}

Formula Formula::proposition(AtomicProposition a) {
    if (a.terms.empty()) return constant(0 <= a.bound);
    Formula f;
    f.op = Op::Atom;
    f.atom = std::move(a);
    return f;
}

Formula Formula::enabled(std::string transition) {
    Formula f;
    f.op = Op::Enabled;
    f.transition = std::move(transition);
    return f;
}

Formula Formula::unary(Op op, Formula arg) {
    Formula f;
    f.op = op;
    f.args.push_back(std::move(arg));
    return f;
}

Formula Formula::binary(Op op, Formula lhs, Formula rhs) {
    Formula f;
    f.op = op;
    f.args.push_back(std::move(lhs));
    f.args.push_back(std::move(rhs));
    return f;
}

Formula Formula::conjunction(std::vector<Formula> parts) {
    if (parts.empty()) return constant(true);
    if (parts.size() == 1) return std::move(parts.front());
    Formula f;
    f.op = Op::And;
    f.args = std::move(parts);
    return f;
}

Formula Formula::disjunction(std::vector<Formula> parts) {
    if (parts.empty()) return constant(false);
    if (parts.size() == 1) return std::move(parts.front());
    Formula f;
    f.op = Op::Or;
    f.args = std::move(parts);
    return f;
}

bool Formula::is_literal() const noexcept {
    return op == Op::True || op == Op::False || op == Op::Atom || op == Op::Enabled ||
           (op == Op::Not && args.front().op == Op::Enabled);
}

bool is_temporal(Formula::Op op) noexcept {
    using Op = Formula::Op;
    return op == Op::X || op == Op::F || op == Op::G || op == Op::U || op == Op::W || op == Op::R;
}

bool is_path_quantifier(Formula::Op op) noexcept {
    return op == Formula::Op::A || op == Formula::Op::E;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Lexeme {
    enum class Kind { Name, Int, Symbol, End };
    Kind kind = Kind::End;
    std::string text;
    bool quoted = false;
    std::int64_t value = 0;
    std::size_t offset = 0;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class FormulaParser {
public:
    explicit FormulaParser(std::string_view text) : text_(text) { lex(); }

    Formula parse() {
        Formula f = parse_or();
        if (peek().kind != Lexeme::Kind::End) error("unexpected '" + peek().text + "'");
        return f;
    }

private:
    [[noreturn]] void error(const std::string& msg, std::optional<std::size_t> at = {}) const {
        std::size_t off = at.value_or(peek().offset);
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < off && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }

    void lex() {
        std::size_t i = 0;
        while (i < text_.size()) {
            char c = text_[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            Lexeme l;
            l.offset = i;
            if (c == '"') {
                std::size_t j = text_.find('"', i + 1);
                if (j == std::string_view::npos) error("unterminated quoted name", i);
                l.kind = Lexeme::Kind::Name;
                l.quoted = true;
                l.text = std::string(text_.substr(i + 1, j - i - 1));
                i = j + 1;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
                l.kind = Lexeme::Kind::Int;
                l.text = std::string(text_.substr(i, j - i));
                try {
                    l.value = std::stoll(l.text);
                } catch (const std::out_of_range&) {
                    error("integer out of range", i);
                }
                i = j;
            } else if (name_start(c)) {
                std::size_t j = i;
                while (j < text_.size() && name_char(text_[j])) ++j;
                l.kind = Lexeme::Kind::Name;
                l.text = std::string(text_.substr(i, j - i));
                i = j;
            } else {
                static const char* two[] = {"&&", "||", "<=", ">=", "!=", "=="};
                l.kind = Lexeme::Kind::Symbol;
                for (const char* s : two)
                    if (text_.substr(i, 2) == s) l.text = s;
                if (l.text.empty()) {
                    if (std::string_view("()!+-*<>=").find(c) == std::string_view::npos)
                        error(std::string("unexpected character '") + c + "'", i);
                    l.text = std::string(1, c);
                }
                i += l.text.size();
                if (l.text == "==") l.text = "=";
            }
            lexemes_.push_back(std::move(l));
        }
        Lexeme end;
        end.offset = text_.size();
        end.text = "end of input";
        lexemes_.push_back(end);
    }

    const Lexeme& peek() const { return lexemes_[pos_]; }
    Lexeme next() { return lexemes_[pos_ == lexemes_.size() - 1 ? pos_ : pos_++]; }

    bool symbol(std::string_view s) const {
        return peek().kind == Lexeme::Kind::Symbol && peek().text == s;
    }
    bool keyword(std::string_view s) const {
        return peek().kind == Lexeme::Kind::Name && !peek().quoted && peek().text == s;
    }
    void expect(std::string_view s) {
        if (!symbol(s)) error("expected '" + std::string(s) + "' but found '" + peek().text + "'");
        ++pos_;
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (symbol("||")) {
            ++pos_;
            parts.push_back(parse_and());
        }
        return Formula::disjunction(std::move(parts));
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_binary()};
        while (symbol("&&")) {
            ++pos_;
            parts.push_back(parse_binary());
        }
        return Formula::conjunction(std::move(parts));
    }

    Formula parse_binary() {
        Formula lhs = parse_unary();
        for (auto [kw, op] : {std::pair{"U", Formula::Op::U}, std::pair{"W", Formula::Op::W},
                              std::pair{"R", Formula::Op::R}}) {
            if (keyword(kw)) {
                ++pos_;
                return Formula::binary(op, std::move(lhs), parse_binary());
            }
        }
        return lhs;
    }

    Formula parse_unary() {
        if (symbol("!")) {
            ++pos_;
            return Formula::unary(Formula::Op::Not, parse_unary());
        }
        for (auto [kw, op] : {std::pair{"X", Formula::Op::X}, std::pair{"F", Formula::Op::F},
                              std::pair{"G", Formula::Op::G}, std::pair{"A", Formula::Op::A},
                              std::pair{"E", Formula::Op::E}}) {
            if (keyword(kw)) {
                ++pos_;
                return Formula::unary(op, parse_unary());
            }
        }
        return parse_primary();
    }

    Formula parse_primary() {
        if (symbol("(")) {
            ++pos_;
            Formula f = parse_or();
            expect(")");
            return f;
        }
        if (keyword("true")) {
            ++pos_;
            return Formula::constant(true);
        }
        if (keyword("false")) {
            ++pos_;
            return Formula::constant(false);
        }
        if (keyword("enabled")) {
            ++pos_;
            expect("(");
            if (peek().kind != Lexeme::Kind::Name) error("expected a transition name");
            std::string t = next().text;
            expect(")");
            return Formula::enabled(std::move(t));
        }
        return parse_comparison();
    }

    struct Linear {
        std::vector<LinearTerm> terms;
        std::int64_t constant = 0;
    };

    Linear parse_linear() {
        Linear out;
        bool negative = false;
        if (symbol("-")) {
            ++pos_;
            negative = true;
        } else if (symbol("+")) {
            ++pos_;
        }
        for (;;) {
            const std::int64_t sign = negative ? -1 : 1;
            if (peek().kind == Lexeme::Kind::Int) {
                std::int64_t k = next().value;
                if (symbol("*")) {
                    ++pos_;
                    out.terms.push_back({sign * k, place_name()});
                } else {
                    out.constant += sign * k;
                }
            } else if (peek().kind == Lexeme::Kind::Name) {
                out.terms.push_back({sign, place_name()});
            } else {
                error("expected a place, an integer or a subformula but found '" + peek().text + "'");
            }
            if (symbol("+")) negative = false;
            else if (symbol("-")) negative = true;
            else break;
            ++pos_;
        }
        return out;
    }

    std::string place_name() {
        if (peek().kind != Lexeme::Kind::Name) error("expected a place name");
        static const std::string_view reserved[] = {"X", "F", "G", "U", "W", "R", "A", "E",
                                                    "true", "false", "enabled"};
        if (!peek().quoted &&
            std::find(std::begin(reserved), std::end(reserved), peek().text) != std::end(reserved))
            error("'" + peek().text + "' is a keyword; quote it to use it as a place name");
        return next().text;
    }

    Formula parse_comparison() {
        std::size_t at = peek().offset;
        Linear lhs = parse_linear();
        if (peek().kind != Lexeme::Kind::Symbol) error("expected a comparison operator");
        std::string op = next().text;
        Linear rhs = parse_linear();
        std::vector<LinearTerm> e = lhs.terms;
        for (auto t : rhs.terms) e.push_back({-t.coefficient, t.place});
        const std::int64_t k = rhs.constant - lhs.constant;
        auto neg = [&] {
            std::vector<LinearTerm> n = e;
            for (auto& t : n) t.coefficient = -t.coefficient;
            return n;
        };
        auto atom = [](std::vector<LinearTerm> terms, std::int64_t bound) {
            return Formula::proposition(AtomicProposition::make(std::move(terms), bound));
        };
        if (op == "<=") return atom(e, k);
        if (op == "<") return atom(e, k - 1);
        if (op == ">=") return atom(neg(), -k);
        if (op == ">") return atom(neg(), -k - 1);
        if (op == "=") return simplify_pair(Formula::Op::And, atom(e, k), atom(neg(), -k));
        if (op == "!=") return simplify_pair(Formula::Op::Or, atom(e, k - 1), atom(neg(), -k - 1));
        error("expected a comparison operator but found '" + op + "'", at);
    }

    static Formula simplify_pair(Formula::Op op, Formula a, Formula b) {
        const bool isAnd = op == Formula::Op::And;
        auto unit = isAnd ? Formula::Op::True : Formula::Op::False;
        auto zero = isAnd ? Formula::Op::False : Formula::Op::True;
        if (a.op == zero || b.op == zero) return Formula::constant(!isAnd);
        if (a.op == unit) return b;
        if (b.op == unit) return a;
        return Formula::binary(op, std::move(a), std::move(b));
    }

    std::string_view text_;
    std::vector<Lexeme> lexemes_;
    std::size_t pos_ = 0;
};

} // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

// ---------------------------------------------------------------- printing

namespace {

std::string quote_place(const std::string& name) {
    static const std::string_view reserved[] = {"X", "F", "G", "U", "W", "R", "A", "E",
                                                "true", "false", "enabled"};
    bool plain = !name.empty() && name_start(name[0]) &&
                 std::all_of(name.begin(), name.end(), name_char) &&
                 std::find(std::begin(reserved), std::end(reserved), name) == std::end(reserved);
    return plain ? name : "\"" + name + "\"";
}

} // namespace

std::string to_string(const AtomicProposition& a) {
    std::string out;
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        std::int64_t k = a.terms[i].coefficient;
        if (i == 0) {
            if (k < 0) out += "-";
        } else {
            out += k < 0 ? " - " : " + ";
        }
        std::int64_t mag = k < 0 ? -k : k;
        if (mag != 1) out += std::to_string(mag) + "*";
        out += quote_place(a.terms[i].place);
    }
    if (a.terms.empty()) out = "0";
    return out + " <= " + std::to_string(a.bound);
}

namespace {

std::string wrapped(const Formula& f) {
    using Op = Formula::Op;
    if (f.op == Op::True || f.op == Op::False || f.op == Op::Enabled) return to_string(f);
    return "(" + to_string(f) + ")";
}

std::string_view op_name(Formula::Op op) {
    using Op = Formula::Op;
    switch (op) {
    case Op::X: return "X";
    case Op::F: return "F";
    case Op::G: return "G";
    case Op::U: return "U";
    case Op::W: return "W";
    case Op::R: return "R";
    case Op::A: return "A";
    case Op::E: return "E";
    default: return "?";
    }
}

} // namespace

std::string to_string(const Formula& f) {
    using Op = Formula::Op;
    switch (f.op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return to_string(f.atom);
    case Op::Enabled: return "enabled(" + quote_place(f.transition) + ")";
    case Op::Not: return "!" + wrapped(f.args[0]);
    case Op::And:
    case Op::Or: {
        std::string out;
        for (std::size_t i = 0; i < f.args.size(); ++i) {
            if (i) out += f.op == Op::And ? " && " : " || ";
            out += wrapped(f.args[i]);
        }
        return out;
    }
    case Op::U:
    case Op::W:
    case Op::R:
        return wrapped(f.args[0]) + " " + std::string(op_name(f.op)) + " " + wrapped(f.args[1]);
    default: return std::string(op_name(f.op)) + " " + wrapped(f.args[0]);
    }
}

// ---------------------------------------------------------------- NNF

namespace {

Formula nnf(const Formula& f, bool negated) {
    using Op = Formula::Op;
    auto sub = [](const Formula& g, bool neg) { return nnf(g, neg); };
    switch (f.op) {
    case Op::True:
    case Op::False: return Formula::constant((f.op == Op::True) != negated);
    case Op::Atom: return Formula::proposition(negated ? negate(f.atom) : f.atom);
    case Op::Enabled: return negated ? Formula::unary(Op::Not, f) : f;
    case Op::Not: return nnf(f.args[0], !negated);
    case Op::And:
    case Op::Or: {
        std::vector<Formula> parts;
        for (const auto& a : f.args) parts.push_back(sub(a, negated));
        bool conj = (f.op == Op::And) != negated;
        return conj ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts));
    }
    case Op::X: return Formula::unary(Op::X, sub(f.args[0], negated));
    case Op::F: return Formula::unary(negated ? Op::G : Op::F, sub(f.args[0], negated));
    case Op::G: return Formula::unary(negated ? Op::F : Op::G, sub(f.args[0], negated));
    case Op::A: return Formula::unary(negated ? Op::E : Op::A, sub(f.args[0], negated));
    case Op::E: return Formula::unary(negated ? Op::A : Op::E, sub(f.args[0], negated));
    case Op::U:
        return Formula::binary(negated ? Op::R : Op::U, sub(f.args[0], negated), sub(f.args[1], negated));
    case Op::R:
        return Formula::binary(negated ? Op::U : Op::R, sub(f.args[0], negated), sub(f.args[1], negated));
    case Op::W:
        if (!negated) return Formula::binary(Op::W, sub(f.args[0], false), sub(f.args[1], false));
        // !(a W b) == !b U (!a && !b)
        return Formula::binary(Op::U, sub(f.args[1], true),
                               Formula::conjunction({sub(f.args[0], true), sub(f.args[1], true)}));
    }
    return f;
}

} // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

// ---------------------------------------------------------------- fragments

namespace {

struct Scan {
    bool quantifiers = false;
    bool existential = false;
    bool negation = false; // negation above something other than an enabled-atom
    bool nextOp = false;
    bool unsafeOp = false; // F or U
    bool ctl = true;
};

void scan(const Formula& f, bool underQuantifier, Scan& s) {
    using Op = Formula::Op;
    switch (f.op) {
    case Op::True:
    case Op::False:
    case Op::Atom:
    case Op::Enabled: return;
    case Op::Not:
        if (f.args[0].op != Op::Enabled) s.negation = true;
        scan(f.args[0], false, s);
        return;
    case Op::A:
    case Op::E:
        s.quantifiers = true;
        if (f.op == Op::E) s.existential = true;
        scan(f.args[0], is_temporal(f.args[0].op), s);
        return;
    default: break;
    }
    if (is_temporal(f.op)) {
        if (!underQuantifier) s.ctl = false;
        if (f.op == Op::X) s.nextOp = true;
        if (f.op == Op::F || f.op == Op::U) s.unsafeOp = true;
    }
    for (const auto& a : f.args) scan(a, false, s);
}

} // namespace

FragmentReport classify(const Formula& f) {
    Scan s;
    scan(f, false, s);
    FragmentReport r;
    r.isLTL = !s.quantifiers;
    r.isACTLstar = !s.existential && !s.negation;
    r.isCTL = s.ctl;
    r.isACTL = r.isACTLstar && r.isCTL;
    r.isXFree = !s.nextOp;
    r.isSafety = r.isACTLstar && !s.nextOp && !s.unsafeOp;
    return r;
}

bool is_trivial(const Formula& f) {
    if (is_temporal(f.op)) return false;
    return std::all_of(f.args.begin(), f.args.end(), [](const Formula& a) { return is_trivial(a); });
}

bool is_state_formula(const Formula& f) {
    if (is_temporal(f.op)) return false;
    if (is_path_quantifier(f.op)) return true;
    return std::all_of(f.args.begin(), f.args.end(),
                       [](const Formula& a) { return is_state_formula(a); });
}

namespace {

void collect_props(const Formula& f, std::vector<Formula>& out) {
    if (f.op == Formula::Op::Atom) {
        auto neg = negate(f.atom);
        for (const auto& g : out)
            if (g.op == Formula::Op::Atom && (g.atom == f.atom || g.atom == neg)) return;
        out.push_back(f);
        return;
    }
    if (f.op == Formula::Op::Enabled) {
        if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        return;
    }
    for (const auto& a : f.args) collect_props(a, out);
}

} // namespace

std::vector<Formula> propositions_of(const Formula& f) {
    std::vector<Formula> out;
    collect_props(f, out);
    return out;
}

std::vector<AtomicProposition> atoms_of(const Formula& f) {
    std::vector<AtomicProposition> out;
    for (const auto& p : propositions_of(f))
        if (p.op == Formula::Op::Atom) out.push_back(p.atom);
    return out;
}

std::vector<std::string> enabled_transitions_of(const Formula& f) {
    std::vector<std::string> out;
    for (const auto& p : propositions_of(f))
        if (p.op == Formula::Op::Enabled) out.push_back(p.transition);
    return out;
}

bool eval_ap(const AtomicProposition& a, const PTNet& net, const Marking& m) {
    std::int64_t sum = 0;
    for (const auto& t : a.terms) {
        auto p = net.find_place(t.place);
        if (!p) throw UnknownPlace(t.place);
        sum += t.coefficient * static_cast<std::int64_t>(m.at(*p));
    }
    return sum <= a.bound;
}

bool eval_ap(const AtomicProposition& a, const ColouredNet& net, const Marking& m) {
    auto offsets = colour_offsets(net);
    if (m.size() != offsets.back()) throw std::invalid_argument("marking does not match the net");
    std::int64_t sum = 0;
    for (const auto& t : a.terms) {
        auto p = net.find_place(t.place);
        if (!p) throw UnknownPlace(t.place);
        std::int64_t count = 0;
        for (std::size_t i = offsets[*p]; i < offsets[*p + 1]; ++i) count += m[i];
        sum += t.coefficient * count;
    }
    return sum <= a.bound;
}

AtomicProposition unfold_ap(const AtomicProposition& a, const ColouredNet& net) {
    std::vector<LinearTerm> terms;
    for (const auto& t : a.terms) {
        auto p = net.find_place(t.place);
        if (!p) throw UnknownPlace(t.place);
        const auto& dom = net.places[*p].domain;
        for (std::size_t c = 0; c < dom.size(); ++c)
            terms.push_back({t.coefficient, t.place + "." + dom.colour_name(c)});
    }
    return AtomicProposition::make(std::move(terms), a.bound);
}

Formula unfold_props(const Formula& f, const ColouredNet& net) {
    return map_atoms(f, [&](const AtomicProposition& a) { return unfold_ap(a, net); });
}

} // namespace skel
