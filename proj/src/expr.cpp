#include "skel/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace skel {

BasicSort BasicSort::enumeration(std::string name, std::vector<std::string> colours) {
    if (colours.empty()) throw std::invalid_argument("sort '" + name + "' has no colours");
    return BasicSort{std::move(name), std::move(colours), 0};
}

BasicSort BasicSort::range(std::string name, int lo, int hi) {
    if (hi < lo) throw std::invalid_argument("sort '" + name + "' has an empty range");
    BasicSort s{std::move(name), {}, lo};
    for (int v = lo; v <= hi; ++v) s.colours.push_back(std::to_string(v));
    return s;
}

BasicSort BasicSort::dot() { return BasicSort{"dot", {"dot"}, 0}; }

std::optional<std::size_t> BasicSort::index_of(std::string_view colour) const {
    auto it = std::find(colours.begin(), colours.end(), colour);
    if (it == colours.end()) return std::nullopt;
    return static_cast<std::size_t>(it - colours.begin());
}

std::size_t ColourDomain::size() const noexcept {
    std::size_t n = 1;
    for (const auto& s : components) n *= s.size();
    return components.empty() ? 0 : n;
}

std::vector<std::size_t> ColourDomain::decode(std::size_t colour) const {
    std::vector<std::size_t> out(components.size());
    for (std::size_t i = components.size(); i-- > 0;) {
        out[i] = colour % components[i].size();
        colour /= components[i].size();
    }
    return out;
}

std::size_t ColourDomain::encode(std::span<const std::size_t> indices) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < components.size(); ++i) c = c * components[i].size() + indices[i];
    return c;
}

std::string ColourDomain::colour_name(std::size_t colour) const {
    auto idx = decode(colour);
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += '_';
        out += components[i].colours[idx[i]];
    }
    return out;
}

std::optional<std::size_t> ColourDomain::find_colour(std::string_view name) const {
    for (std::size_t c = 0, n = size(); c < n; ++c)
        if (colour_name(c) == name) return c;
    return std::nullopt;
}

Term Term::var(std::string name, int shift) {
    Term t;
    t.kind = Kind::Variable;
    t.variable = std::move(name);
    t.shift = shift;
    return t;
}

Term Term::value(int v) {
    Term t;
    t.constant = v;
    return t;
}

Term Term::successor() const {
    Term t = *this;
    ++t.shift;
    return t;
}

Term Term::predecessor() const {
    Term t = *this;
    --t.shift;
    return t;
}

CompareOp negate(CompareOp op) noexcept {
    switch (op) {
    case CompareOp::Eq: return CompareOp::Ne;
    case CompareOp::Ne: return CompareOp::Eq;
    case CompareOp::Lt: return CompareOp::Ge;
    case CompareOp::Le: return CompareOp::Gt;
    case CompareOp::Gt: return CompareOp::Le;
    case CompareOp::Ge: return CompareOp::Lt;
    }
    return op;
}

CompareOp mirror(CompareOp op) noexcept {
    switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
    }
}

bool compare(CompareOp op, int lhs, int rhs) noexcept {
    switch (op) {
    case CompareOp::Eq: return lhs == rhs;
    case CompareOp::Ne: return lhs != rhs;
    case CompareOp::Lt: return lhs < rhs;
    case CompareOp::Le: return lhs <= rhs;
    case CompareOp::Gt: return lhs > rhs;
    case CompareOp::Ge: return lhs >= rhs;
    }
    return false;
}

std::string_view to_string(CompareOp op) noexcept {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "?";
}

Expr Expr::truth(bool value) {
    Expr e;
    e.kind = value ? Kind::True : Kind::False;
    return e;
}

Expr Expr::comparison(Term lhs, CompareOp op, Term rhs) {
    Expr e;
    e.kind = Kind::Compare;
    e.op = op;
    e.lhs = std::move(lhs);
    e.rhs = std::move(rhs);
    return e;
}

namespace {

Expr junction(Expr::Kind kind, std::vector<Expr> parts) {
    const bool isAnd = kind == Expr::Kind::And;
    const auto unit = isAnd ? Expr::Kind::True : Expr::Kind::False;
    const auto zero = isAnd ? Expr::Kind::False : Expr::Kind::True;
    Expr e;
    e.kind = kind;
    for (auto& p : parts) {
        if (p.kind == unit) continue;
        if (p.kind == zero) return Expr::truth(!isAnd);
        if (p.kind == kind) {
            for (auto& c : p.children) e.children.push_back(std::move(c));
        } else {
            e.children.push_back(std::move(p));
        }
    }
    if (e.children.empty()) return Expr::truth(isAnd);
    if (e.children.size() == 1) return std::move(e.children.front());
    return e;
}

} // namespace

Expr Expr::conjunction(std::vector<Expr> parts) { return junction(Kind::And, std::move(parts)); }
Expr Expr::disjunction(std::vector<Expr> parts) { return junction(Kind::Or, std::move(parts)); }

Expr negate(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::True: return Expr::truth(false);
    case Expr::Kind::False: return Expr::truth(true);
    case Expr::Kind::Compare: return Expr::comparison(e.lhs, negate(e.op), e.rhs);
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        std::vector<Expr> parts;
        for (const auto& c : e.children) parts.push_back(negate(c));
        return e.kind == Expr::Kind::And ? Expr::disjunction(std::move(parts))
                                         : Expr::conjunction(std::move(parts));
    }
    }
    return e;
}

namespace {
void collect(const Expr& e, std::vector<std::string>& out) {
    auto add = [&](const Term& t) {
        if (t.is_variable() && std::find(out.begin(), out.end(), t.variable) == out.end())
            out.push_back(t.variable);
    };
    if (e.kind == Expr::Kind::Compare) {
        add(e.lhs);
        add(e.rhs);
    }
    for (const auto& c : e.children) collect(c, out);
}
} // namespace

std::vector<std::string> variables_of(const Expr& e) {
    std::vector<std::string> out;
    collect(e, out);
    return out;
}

int wrap(int value, int lo, int hi) noexcept {
    const int n = hi - lo + 1;
    int r = (value - lo) % n;
    if (r < 0) r += n;
    return lo + r;
}

std::optional<int> evaluate(const Term& t, const Valuation& valuation) {
    if (!t.is_variable()) return t.constant + t.shift;
    auto v = valuation(t.variable);
    if (!v) return std::nullopt;
    return t.shift == 0 ? v->value : wrap(v->value + t.shift, v->lo, v->hi);
}

std::optional<bool> evaluate(const Expr& e, const Valuation& valuation) {
    switch (e.kind) {
    case Expr::Kind::True: return true;
    case Expr::Kind::False: return false;
    case Expr::Kind::Compare: {
        auto l = evaluate(e.lhs, valuation);
        auto r = evaluate(e.rhs, valuation);
        if (!l || !r) return std::nullopt;
        return compare(e.op, *l, *r);
    }
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        const bool isAnd = e.kind == Expr::Kind::And;
        bool unknown = false;
        for (const auto& c : e.children) {
            auto v = evaluate(c, valuation);
            if (!v) unknown = true;
            else if (*v != isAnd) return !isAnd;
        }
        if (unknown) return std::nullopt;
        return isAnd;
    }
    }
    return std::nullopt;
}

std::string to_string(const Term& t) {
    std::string out = t.is_variable() ? t.variable : std::to_string(t.constant);
    for (int i = 0; i < t.shift; ++i) out += "++";
    for (int i = 0; i > t.shift; --i) out += "--";
    return out;
}

std::string to_string(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::True: return "true";
    case Expr::Kind::False: return "false";
    case Expr::Kind::Compare:
        return to_string(e.lhs) + " " + std::string(to_string(e.op)) + " " + to_string(e.rhs);
    case Expr::Kind::And:
    case Expr::Kind::Or: {
        std::string out;
        for (std::size_t i = 0; i < e.children.size(); ++i) {
            if (i) out += e.kind == Expr::Kind::And ? " && " : " || ";
            const auto& c = e.children[i];
            bool paren = c.kind == Expr::Kind::And || c.kind == Expr::Kind::Or;
            out += paren ? "(" + to_string(c) + ")" : to_string(c);
        }
        return out;
    }
    }
    return "?";
}

} // namespace skel
