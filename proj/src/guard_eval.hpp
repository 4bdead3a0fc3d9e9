#pragma once

#include <optional>
#include <vector>

#include "skel/net.hpp"

namespace skel::detail {

struct CompiledTerm {
    int slot = -1; // -1 for constants
    int constant = 0;
    int shift = 0;
    int lo = 0;
    int hi = 0;
};

struct CompiledExpr {
    Expr::Kind kind = Expr::Kind::True;
    CompareOp op = CompareOp::Eq;
    CompiledTerm lhs;
    CompiledTerm rhs;
    std::vector<CompiledExpr> children;
};

// Expression guard of one transition compiled against its variable layout.
// Values are sort values (not indices) per layout slot.
class BoundGuard {
public:
    BoundGuard(const ColouredNet& net, std::size_t transition);

    const std::vector<VariableSlot>& layout() const noexcept { return layout_; }
    std::size_t arc_variables() const noexcept { return arcVariables_; }

    std::optional<bool> partial(const std::vector<int>& values,
                                const std::vector<char>& assigned) const;

    // Decides the guard once all arc variables are assigned, quantifying the
    // hidden variables existentially. Scratch slots past the arc variables
    // are overwritten.
    bool holds(std::vector<int>& values, std::vector<char>& assigned) const;

private:
    bool search_hidden(std::size_t slot, std::vector<int>& values,
                       std::vector<char>& assigned) const;

    std::vector<VariableSlot> layout_;
    std::size_t arcVariables_ = 0;
    CompiledExpr expr_;
};

} // namespace skel::detail
