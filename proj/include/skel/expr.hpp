#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace skel {

// A finite ordered set of colours. Colour i has the integer value base + i,
// so enumerations start at 0 and ranges [lo..hi] keep their bounds.
struct BasicSort {
    std::string name;
    std::vector<std::string> colours;
    int base = 0;

    static BasicSort enumeration(std::string name, std::vector<std::string> colours);
    static BasicSort range(std::string name, int lo, int hi);
    static BasicSort dot();

    std::size_t size() const noexcept { return colours.size(); }
    int lo() const noexcept { return base; }
    int hi() const noexcept { return base + static_cast<int>(colours.size()) - 1; }
    int value(std::size_t index) const noexcept { return base + static_cast<int>(index); }
    std::optional<std::size_t> index_of(std::string_view colour) const;

    bool operator==(const BasicSort&) const = default;
};

// Cartesian product of basic sorts. Colours are mixed-radix indices with the
// first component most significant.
struct ColourDomain {
    std::vector<BasicSort> components;

    ColourDomain() = default;
    explicit ColourDomain(BasicSort sort) : components{std::move(sort)} {}
    explicit ColourDomain(std::vector<BasicSort> sorts) : components(std::move(sorts)) {}

    std::size_t size() const noexcept;
    std::size_t arity() const noexcept { return components.size(); }
    std::vector<std::size_t> decode(std::size_t colour) const;
    std::size_t encode(std::span<const std::size_t> indices) const;
    std::string colour_name(std::size_t colour) const;
    std::optional<std::size_t> find_colour(std::string_view name) const;

    bool operator==(const ColourDomain&) const = default;
};

// Either a variable or an integer constant, shifted by a number of
// successor (+) or predecessor (-) applications. Shifts on variables wrap
// within the variable's sort.
struct Term {
    enum class Kind { Variable, Constant };

    Kind kind = Kind::Constant;
    std::string variable;
    int constant = 0;
    int shift = 0;

    static Term var(std::string name, int shift = 0);
    static Term value(int v);

    Term successor() const;
    Term predecessor() const;
    bool is_variable() const noexcept { return kind == Kind::Variable; }

    bool operator==(const Term&) const = default;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

CompareOp negate(CompareOp op) noexcept;
CompareOp mirror(CompareOp op) noexcept;
bool compare(CompareOp op, int lhs, int rhs) noexcept;
std::string_view to_string(CompareOp op) noexcept;

// Negation-free boolean expression over term comparisons.
struct Expr {
    enum class Kind { True, False, Compare, And, Or };

    Kind kind = Kind::True;
    CompareOp op = CompareOp::Eq;
    Term lhs;
    Term rhs;
    std::vector<Expr> children;

    static Expr truth(bool value);
    static Expr comparison(Term lhs, CompareOp op, Term rhs);
    static Expr conjunction(std::vector<Expr> parts);
    static Expr disjunction(std::vector<Expr> parts);

    bool operator==(const Expr&) const = default;
};

Expr negate(const Expr& e);

// Variables in order of first occurrence.
std::vector<std::string> variables_of(const Expr& e);

struct VariableValue {
    int value;
    int lo;
    int hi;
};

// Returns the value of an assigned variable, or nullopt when unassigned.
using Valuation = std::function<std::optional<VariableValue>(std::string_view)>;

int wrap(int value, int lo, int hi) noexcept;
std::optional<int> evaluate(const Term& t, const Valuation& valuation);

// Three-valued: nullopt when the result depends on unassigned variables.
std::optional<bool> evaluate(const Expr& e, const Valuation& valuation);

std::string to_string(const Term& t);
std::string to_string(const Expr& e);

} // namespace skel
