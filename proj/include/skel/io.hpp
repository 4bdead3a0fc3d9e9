#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skel/formula.hpp"
#include "skel/net.hpp"
#include "skel/statespace.hpp"
#include "skel/symmetric.hpp"
#include "skel/verify.hpp"

namespace skel {

using AnyNet = std::variant<PTNet, ColouredNet>;

// Line-oriented textual format, one declaration per line, `#` comments:
//
//   net pt
//   place p = 3
//   transition t
//     in p + 2'q
//     out r
//
//   net coloured
//   sort RG = enum { r, g }
//   sort X = range 1 .. 4
//   var c : RG
//   place p : RG = 1'r + 2'g
//   place pair : RG * X = 1'(r, 2)
//   transition t nonfull
//     in p : x1 + x2 + 2'x3 - y + all
//     out q : (y, z++)
//     var h : RG
//     guard x1 = c && (x2 != @g || z < 3)
//     mode r g          # extensional guard, one line per mode
//
// Names are identifiers ([A-Za-z_][A-Za-z0-9_.]*) or double-quoted strings.
// Terms are variables, integers or @colour constants, followed by any number
// of ++ (successor) or -- (predecessor). Coloured nets go through
// simplify_inscriptions. An empty text is an empty P/T net.
AnyNet parse_net(std::string_view text);
SymmetricNet parse_symmetric(std::string_view text);

std::string print_net(const PTNet& net);
// Throws std::invalid_argument when two different sorts share a name.
std::string print_net(const ColouredNet& net);

// PNML subset: P/T nets and symmetric nets with cyclic or finite
// enumerations, integer ranges, dot, product sorts, variables, constants,
// successor and predecessor, tuples, sums with numberof/add/subtract, `all`,
// and guards built from comparisons with and, or, not. Other elements raise
// UnsupportedConstruct naming the element and its path. Places and
// transitions are named by their ids. A variable declaration joins the
// transitions that reference it; unreferenced ones are dropped.
AnyNet parse_pnml(std::string_view xml);
std::string write_pnml(const PTNet& net, std::string_view id = "net");
// Extensional guards are written as disjunctions of equalities.
std::string write_pnml(const ColouredNet& net, std::string_view id = "net");

// PNML for .pnml and .xml files, the textual format otherwise.
AnyNet load_net(const std::string& path);
std::string read_file(const std::string& path);

inline constexpr std::size_t kMaxFormulasPerFile = 16;

struct FormulaEntry {
    std::size_t id = 0; // line number
    std::string text;
    Formula formula;
};

// One formula per line; blank lines and `#` comments are skipped.
// Throws ParseError with the line number, also when more than
// kMaxFormulasPerFile formulas are present.
std::vector<FormulaEntry> parse_formula_file(std::string_view text);

// One line per edge; silent and deadlock edges are dashed.
std::string kripke_to_dot(const KripkeStructure& k, std::string_view name = "K");

// Tab-separated: id, value, basis, states, time. Time is "-" unless
// `timing`, so that repeated runs produce identical records.
std::string machine_record(std::size_t id, const Verdict& v, bool timing = false);
std::string human_record(const FormulaEntry& f, const Verdict& v);

} // namespace skel
