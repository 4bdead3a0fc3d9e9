#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "skel/error.hpp"
#include "skel/io.hpp"

namespace skel {

namespace {

namespace pt = boost::property_tree;

bool skipped(const std::string& tag) {
    return tag == "<xmlattr>" || tag == "<xmlcomment>" || tag == "graphics" || tag == "toolspecific" ||
           tag == "name" || tag == "text";
}

std::string attr(const pt::ptree& node, const std::string& key, const std::string& path) {
    auto v = node.get_optional<std::string>("<xmlattr>." + key);
    if (!v) throw ParseError("missing attribute '" + key + "' at " + path);
    return *v;
}

std::string optional_attr(const pt::ptree& node, const std::string& key) {
    return node.get("<xmlattr>." + key, std::string());
}

// Children that carry structure, skipping attributes, comments and graphics.
std::vector<std::pair<std::string, const pt::ptree*>> elements(const pt::ptree& node) {
    std::vector<std::pair<std::string, const pt::ptree*>> out;
    for (const auto& [tag, child] : node)
        if (!skipped(tag)) out.emplace_back(tag, &child);
    return out;
}

[[noreturn]] void unsupported(const std::string& tag, const std::string& path) {
    throw UnsupportedConstruct("unsupported PNML element '" + tag + "' at " + path);
}

long long number(const std::string& text, const std::string& path) {
    try {
        std::size_t used = 0;
        auto s = text;
        s.erase(0, s.find_first_not_of(" \t\r\n"));
        s.erase(s.find_last_not_of(" \t\r\n") + 1);
        auto v = std::stoll(s, &used);
        if (used != s.size() || v < 0) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a non-negative integer, got '" + text + "' at " + path);
    }
}

// The single structure-carrying child of a wrapper element.
std::pair<std::string, const pt::ptree*> only_child(const pt::ptree& node, const std::string& path) {
    auto els = elements(node);
    if (els.size() != 1) throw ParseError("expected exactly one element at " + path);
    return els.front();
}

struct ConstantTerm {
    Term term;
    const BasicSort* sort = nullptr; // set for colour constants
};

class Reader {
public:
    explicit Reader(const pt::ptree& net, std::string path) : net_(net), root_(std::move(path)) {}

    AnyNet read() {
        auto type = optional_attr(net_, "type");
        collect_pages(net_, root_);
        if (type.find("ptnet") != std::string::npos) return read_pt();
        return simplify_inscriptions(read_symmetric());
    }

private:
    struct Located {
        const pt::ptree* node;
        std::string path;
    };

    const pt::ptree& net_;
    std::string root_;
    std::vector<Located> places_, transitions_, arcs_, declarations_;

    std::map<std::string, std::vector<BasicSort>> sorts_; // namedsort id -> components
    std::map<std::string, std::pair<const BasicSort*, std::size_t>> constants_;
    std::map<std::string, std::string> variableNames_;
    std::map<std::string, std::vector<BasicSort>> variableSorts_;
    std::vector<std::string> variableOrder_; // declaration ids in document order

    void collect_pages(const pt::ptree& node, const std::string& path) {
        for (const auto& [tag, child] : elements(node)) {
            auto id = optional_attr(*child, "id");
            auto here = path + "/" + tag + (id.empty() ? "" : "[" + id + "]");
            if (tag == "page") collect_pages(*child, here);
            else if (tag == "place") places_.push_back({child, here});
            else if (tag == "transition") transitions_.push_back({child, here});
            else if (tag == "arc") arcs_.push_back({child, here});
            else if (tag == "declaration") declarations_.push_back({child, here});
            else unsupported(tag, here);
        }
    }

    PTNet read_pt() {
        PTNet net;
        for (const auto& [node, path] : places_) {
            Tokens m = 0;
            if (auto init = node->get_child_optional("initialMarking"))
                m = static_cast<Tokens>(number(init->get<std::string>("text", ""), path + "/initialMarking"));
            auto id = attr(*node, "id", path);
            if (net.find_place(id)) throw ParseError("duplicate place '" + id + "' at " + path);
            net.add_place(id, m);
        }
        for (const auto& [node, path] : transitions_) {
            auto id = attr(*node, "id", path);
            if (net.find_transition(id)) throw ParseError("duplicate transition '" + id + "' at " + path);
            net.add_transition(id);
        }
        for (const auto& [node, path] : arcs_) {
            auto src = attr(*node, "source", path);
            auto dst = attr(*node, "target", path);
            Tokens w = 1;
            if (auto ins = node->get_child_optional("inscription"))
                w = static_cast<Tokens>(number(ins->get<std::string>("text", ""), path + "/inscription"));
            if (w == 0) throw ParseError("zero arc weight at " + path);
            if (auto p = net.find_place(src)) {
                auto t = net.find_transition(dst);
                if (!t) throw ParseError("arc target '" + dst + "' is not a transition at " + path);
                net.add_input(*p, *t, w);
            } else if (auto t = net.find_transition(src)) {
                auto q = net.find_place(dst);
                if (!q) throw ParseError("arc target '" + dst + "' is not a place at " + path);
                net.add_output(*t, *q, w);
            } else {
                throw ParseError("unknown arc source '" + src + "' at " + path);
            }
        }
        net.validate();
        return net;
    }

    // ------------------------------------------------------------ sorts

    std::vector<BasicSort> sort_of(const std::string& tag, const pt::ptree& node, const std::string& path,
                                   const std::string& name) {
        if (tag == "usersort") {
            auto ref = attr(node, "declaration", path);
            auto it = sorts_.find(ref);
            if (it == sorts_.end()) throw ParseError("unknown sort '" + ref + "' at " + path);
            return it->second;
        }
        if (tag == "dot") return {BasicSort::dot()};
        if (tag == "cyclicenumeration" || tag == "finiteenumeration") {
            std::vector<std::string> colours, ids;
            for (const auto& [t, c] : elements(node)) {
                auto here = path + "/" + t;
                if (t != "feconstant") unsupported(t, here);
                auto id = attr(*c, "id", here);
                auto n = optional_attr(*c, "name");
                ids.push_back(id);
                colours.push_back(n.empty() ? id : n);
            }
            if (colours.empty()) throw ParseError("empty enumeration at " + path);
            return {BasicSort::enumeration(name, colours)};
        }
        if (tag == "finiteintrange") {
            auto lo = std::stoi(attr(node, "start", path));
            auto hi = std::stoi(attr(node, "end", path));
            if (hi < lo) throw ParseError("empty range at " + path);
            return {BasicSort::range(name, lo, hi)};
        }
        if (tag == "productsort") {
            std::vector<BasicSort> out;
            for (const auto& [t, c] : elements(node)) {
                auto part = sort_of(t, *c, path + "/" + t, name);
                out.insert(out.end(), part.begin(), part.end());
            }
            return out;
        }
        unsupported(tag, path);
    }

    void read_declarations() {
        for (const auto& [decl, path] : declarations_) {
            auto structure = decl->get_child_optional("structure");
            if (!structure) throw ParseError("missing structure at " + path);
            auto decls = structure->get_child_optional("declarations");
            if (!decls) throw ParseError("missing declarations at " + path + "/structure");
            auto base = path + "/structure/declarations";
            for (const auto& [tag, node] : elements(*decls)) {
                auto id = attr(*node, "id", base + "/" + tag);
                auto here = base + "/" + tag + "[" + id + "]";
                auto name = optional_attr(*node, "name");
                if (name.empty()) name = id;
                if (tag == "namedsort") {
                    auto [t, body] = only_child(*node, here);
                    auto sorts = sort_of(t, *body, here + "/" + t, name);
                    sorts_[id] = sorts;
                    if (t == "cyclicenumeration" || t == "finiteenumeration") {
                        std::size_t i = 0;
                        for (const auto& [ft, fc] : elements(*body))
                            constants_[attr(*fc, "id", here)] = {&sorts_[id][0], i++};
                    }
                } else if (tag == "variabledecl") {
                    auto [t, body] = only_child(*node, here);
                    variableSorts_[id] = sort_of(t, *body, here + "/" + t, t);
                    variableNames_[id] = name;
                    variableOrder_.push_back(id);
                } else {
                    unsupported(tag, here);
                }
            }
        }
        for (const auto& [id, sorts] : variableSorts_)
            if (sorts.size() != 1) throw UnsupportedConstruct("variable '" + id + "' of a product sort");
    }

    // ------------------------------------------------------------ terms

    ConstantTerm term(const std::string& tag, const pt::ptree& node, const std::string& path,
                      std::vector<std::string>& used) {
        if (tag == "variable") {
            auto ref = attr(node, "refvariable", path);
            auto it = variableNames_.find(ref);
            if (it == variableNames_.end()) throw ParseError("unknown variable '" + ref + "' at " + path);
            if (std::find(used.begin(), used.end(), ref) == used.end()) used.push_back(ref);
            return {Term::var(ref), nullptr};
        }
        if (tag == "useroperator") {
            auto ref = attr(node, "declaration", path);
            auto it = constants_.find(ref);
            if (it == constants_.end() || !it->second.first)
                throw UnsupportedConstruct("user operator '" + ref + "' at " + path);
            return {Term::value(it->second.first->value(it->second.second)), it->second.first};
        }
        if (tag == "dotconstant") return {Term::value(0), nullptr};
        if (tag == "finiteintrangeconstant") {
            auto v = std::stoi(attr(node, "value", path));
            return {Term::value(v), nullptr};
        }
        if (tag == "successor" || tag == "predecessor") {
            auto [t, c] = only_child(node, path);
            if (t != "subterm") unsupported(t, path + "/" + t);
            auto [it, ic] = only_child(*c, path + "/subterm");
            auto inner = term(it, *ic, path + "/subterm/" + it, used);
            int step = tag == "successor" ? 1 : -1;
            if (inner.sort) {
                // Cyclic constants wrap within their sort.
                inner.term = Term::value(wrap(inner.term.constant + step, inner.sort->lo(), inner.sort->hi()));
            } else {
                inner.term = step > 0 ? inner.term.successor() : inner.term.predecessor();
            }
            return inner;
        }
        unsupported(tag, path);
    }

    std::vector<Term> tuple_terms(const std::string& tag, const pt::ptree& node, const std::string& path,
                                  std::vector<std::string>& used) {
        if (tag != "tuple") return {term(tag, node, path, used).term};
        std::vector<Term> out;
        for (const auto& [t, c] : elements(node)) {
            if (t != "subterm") unsupported(t, path + "/" + t);
            auto [it, ic] = only_child(*c, path + "/subterm");
            out.push_back(term(it, *ic, path + "/subterm/" + it, used).term);
        }
        return out;
    }

    void sum(const std::string& tag, const pt::ptree& node, const std::string& path, bool negative,
             std::vector<InscriptionItem>& out, std::vector<std::string>& used) {
        auto subterms = [&](auto&& each) {
            std::size_t i = 0;
            for (const auto& [t, c] : elements(node)) {
                if (t != "subterm") unsupported(t, path + "/" + t);
                auto [it, ic] = only_child(*c, path + "/subterm");
                each(i++, it, *ic, path + "/subterm/" + it);
            }
        };
        if (tag == "add") {
            subterms([&](std::size_t, const std::string& t, const pt::ptree& c, const std::string& p) {
                sum(t, c, p, negative, out, used);
            });
        } else if (tag == "subtract") {
            subterms([&](std::size_t i, const std::string& t, const pt::ptree& c, const std::string& p) {
                sum(t, c, p, i == 0 ? negative : !negative, out, used);
            });
        } else if (tag == "numberof") {
            std::optional<Tokens> k;
            std::vector<InscriptionItem> inner;
            subterms([&](std::size_t, const std::string& t, const pt::ptree& c, const std::string& p) {
                if (t == "numberconstant" && !k) k = static_cast<Tokens>(number(attr(c, "value", p), p));
                else sum(t, c, p, negative, inner, used);
            });
            if (inner.size() != 1) throw ParseError("numberof needs exactly one term at " + path);
            inner[0].multiplicity *= k.value_or(1);
            if (inner[0].multiplicity == 0) return;
            out.push_back(std::move(inner[0]));
        } else if (tag == "all") {
            InscriptionItem item;
            item.all = true;
            item.negative = negative;
            out.push_back(std::move(item));
        } else {
            InscriptionItem item;
            item.negative = negative;
            item.tuple = tuple_terms(tag, node, path, used);
            out.push_back(std::move(item));
        }
    }

    std::vector<InscriptionItem> structure_sum(const pt::ptree& wrapper, const std::string& path,
                                               std::vector<std::string>& used) {
        auto structure = wrapper.get_child_optional("structure");
        if (!structure) throw ParseError("missing structure at " + path);
        auto [t, c] = only_child(*structure, path + "/structure");
        std::vector<InscriptionItem> items;
        sum(t, *c, path + "/structure/" + t, false, items, used);
        return items;
    }

    Expr guard(const std::string& tag, const pt::ptree& node, const std::string& path, std::vector<std::string>& used) {
        static const std::map<std::string, CompareOp> ops = {
            {"equality", CompareOp::Eq},         {"inequality", CompareOp::Ne},
            {"lessthan", CompareOp::Lt},         {"lessthanorequal", CompareOp::Le},
            {"greaterthan", CompareOp::Gt},      {"greaterthanorequal", CompareOp::Ge}};
        if (tag == "booleanconstant") return Expr::truth(attr(node, "value", path) == "true");
        std::vector<std::pair<std::string, const pt::ptree*>> subs;
        for (const auto& [t, c] : elements(node)) {
            if (t != "subterm") unsupported(t, path + "/" + t);
            subs.push_back(only_child(*c, path + "/subterm"));
        }
        if (tag == "and" || tag == "or") {
            std::vector<Expr> parts;
            for (const auto& [t, c] : subs) parts.push_back(guard(t, *c, path + "/subterm/" + t, used));
            return tag == "and" ? Expr::conjunction(std::move(parts)) : Expr::disjunction(std::move(parts));
        }
        if (tag == "not") {
            if (subs.size() != 1) throw ParseError("not needs one operand at " + path);
            return negate(guard(subs[0].first, *subs[0].second, path + "/subterm/" + subs[0].first, used));
        }
        auto op = ops.find(tag);
        if (op == ops.end()) unsupported(tag, path);
        if (subs.size() != 2) throw ParseError(tag + " needs two operands at " + path);
        auto lhs = term(subs[0].first, *subs[0].second, path + "/subterm/" + subs[0].first, used).term;
        auto rhs = term(subs[1].first, *subs[1].second, path + "/subterm/" + subs[1].first, used).term;
        return Expr::comparison(std::move(lhs), op->second, std::move(rhs));
    }

    template <class F>
    static void rename_terms(Expr& e, const F& rename) {
        if (e.kind == Expr::Kind::Compare) {
            rename(e.lhs);
            rename(e.rhs);
        }
        for (auto& c : e.children) rename_terms(c, rename);
    }

    // ------------------------------------------------------------ net

    Multiset marking(const std::vector<InscriptionItem>& items, const ColourDomain& dom, const std::string& path) {
        Multiset m(dom.size(), 0);
        for (const auto& item : items) {
            if (item.negative) throw UnsupportedConstruct("subtraction in an initial marking at " + path);
            if (item.all) {
                for (auto& c : m) c += item.multiplicity;
                continue;
            }
            if (item.tuple.size() != dom.arity()) throw ParseError("colour arity mismatch at " + path);
            std::vector<std::size_t> idx;
            for (std::size_t c = 0; c < item.tuple.size(); ++c) {
                const auto& t = item.tuple[c];
                if (t.is_variable()) throw ParseError("variable in an initial marking at " + path);
                const auto& s = dom.components[c];
                int v = wrap(t.constant + t.shift, s.lo(), s.hi());
                if (t.shift == 0 && (t.constant < s.lo() || t.constant > s.hi()))
                    throw ParseError("colour out of range at " + path);
                idx.push_back(static_cast<std::size_t>(v - s.lo()));
            }
            m[dom.encode(idx)] += item.multiplicity;
        }
        return m;
    }

    SymmetricNet read_symmetric() {
        read_declarations();
        SymmetricNet net;
        std::map<std::string, std::size_t> placeIndex, transitionIndex;
        for (const auto& [node, path] : places_) {
            auto id = attr(*node, "id", path);
            auto type = node->get_child_optional("type.structure");
            if (!type) throw ParseError("missing type at " + path);
            auto [t, c] = only_child(*type, path + "/type/structure");
            ColourDomain dom(sort_of(t, *c, path + "/type/structure/" + t, t));
            Multiset m(dom.size(), 0);
            if (auto init = node->get_child_optional("hlinitialMarking")) {
                std::vector<std::string> used;
                auto items = structure_sum(*init, path + "/hlinitialMarking", used);
                m = marking(items, dom, path + "/hlinitialMarking");
            }
            if (!placeIndex.emplace(id, net.places.size()).second)
                throw ParseError("duplicate place '" + id + "' at " + path);
            net.places.push_back({id, std::move(dom), std::move(m)});
        }
        std::vector<std::vector<std::string>> used(transitions_.size());
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            const auto& [node, path] = transitions_[i];
            HighLevelTransition t;
            t.name = attr(*node, "id", path);
            if (auto cond = node->get_child_optional("condition")) {
                auto structure = cond->get_child_optional("structure");
                if (!structure) throw ParseError("missing structure at " + path + "/condition");
                auto [g, c] = only_child(*structure, path + "/condition/structure");
                t.guard = guard(g, *c, path + "/condition/structure/" + g, used[i]);
            }
            if (!transitionIndex.emplace(t.name, i).second)
                throw ParseError("duplicate transition '" + t.name + "' at " + path);
            net.transitions.push_back(std::move(t));
        }
        for (const auto& [node, path] : arcs_) {
            auto src = attr(*node, "source", path);
            auto dst = attr(*node, "target", path);
            bool input = placeIndex.count(src) > 0;
            auto p = placeIndex.find(input ? src : dst);
            auto t = transitionIndex.find(input ? dst : src);
            if (p == placeIndex.end() || t == transitionIndex.end())
                throw ParseError("arc must join a place and a transition at " + path);
            auto ins = node->get_child_optional("hlinscription");
            if (!ins) throw ParseError("missing hlinscription at " + path);
            HighLevelArc arc{p->second, structure_sum(*ins, path + "/hlinscription", used[t->second])};
            auto& tr = net.transitions[t->second];
            (input ? tr.inputs : tr.outputs).push_back(std::move(arc));
        }
        // Referenced variables become local declarations in document order,
        // named by their declared names unless two of them collide.
        for (std::size_t i = 0; i < net.transitions.size(); ++i) {
            std::map<std::string, int> uses;
            for (const auto& id : used[i]) ++uses[variableNames_[id]];
            std::map<std::string, std::string> names;
            for (const auto& id : used[i]) names[id] = uses[variableNames_[id]] > 1 ? id : variableNames_[id];
            auto& tr = net.transitions[i];
            for (const auto& id : variableOrder_)
                if (names.count(id)) tr.variables.push_back({names[id], variableSorts_[id][0]});
            auto rename = [&](Term& t) {
                if (t.is_variable()) t.variable = names.at(t.variable);
            };
            for (auto* arcs : {&tr.inputs, &tr.outputs})
                for (auto& a : *arcs)
                    for (auto& item : a.items)
                        for (auto& t : item.tuple) rename(t);
            rename_terms(tr.guard, rename);
        }
        return net;
    }
};

// ---------------------------------------------------------------- writing

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

const char* kHeader = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                      "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";

class Writer {
public:
    explicit Writer(const ColouredNet& net) : net_(net) {}

    std::string write(std::string_view id) {
        collect_sorts();
        std::ostringstream body;
        for (std::size_t p = 0; p < net_.places.size(); ++p) place(body, p);
        for (std::size_t t = 0; t < net_.transitions.size(); ++t) transition(body, t);

        std::ostringstream out;
        out << kHeader << "  <net id=\"" << xml_escape(id)
            << "\" type=\"http://www.pnml.org/version-2009/grammar/symmetricnet\">\n"
            << "    <declaration><structure><declarations>\n"
            << decls_.str() << "    </declarations></structure></declaration>\n"
            << "    <page id=\"page\">\n"
            << body.str() << "    </page>\n  </net>\n</pnml>\n";
        return out.str();
    }

private:
    const ColouredNet& net_;
    std::ostringstream decls_;
    std::vector<const BasicSort*> sorts_;
    std::vector<std::string> domainIds_;
    std::size_t arcs_ = 0;

    std::string sort_id(const BasicSort& s) const {
        for (std::size_t i = 0; i < sorts_.size(); ++i)
            if (*sorts_[i] == s) return "S" + std::to_string(i);
        throw std::logic_error("undeclared sort");
    }
    std::string sort_ref(const BasicSort& s) const {
        if (s == BasicSort::dot()) return "<dot/>";
        return "<usersort declaration=\"" + sort_id(s) + "\"/>";
    }
    std::string constant_id(const BasicSort& s, std::size_t i) const { return sort_id(s) + "_c" + std::to_string(i); }

    bool is_range(const BasicSort& s) const {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.colours[i] != std::to_string(s.value(i))) return false;
        return true;
    }

    void note(const BasicSort& s) {
        if (s == BasicSort::dot()) return;
        for (const auto* k : sorts_) {
            if (*k == s) return;
            if (k->name == s.name) throw std::invalid_argument("two different sorts are named '" + s.name + "'");
        }
        sorts_.push_back(&s);
        auto id = sort_id(s);
        decls_ << "      <namedsort id=\"" << id << "\" name=\"" << xml_escape(s.name) << "\">";
        if (is_range(s)) {
            decls_ << "<finiteintrange start=\"" << s.lo() << "\" end=\"" << s.hi() << "\"/>";
        } else {
            decls_ << "<cyclicenumeration>";
            for (std::size_t i = 0; i < s.size(); ++i)
                decls_ << "<feconstant id=\"" << constant_id(s, i) << "\" name=\"" << xml_escape(s.colours[i]) << "\"/>";
            decls_ << "</cyclicenumeration>";
        }
        decls_ << "</namedsort>\n";
    }

    void collect_sorts() {
        for (const auto& p : net_.places)
            for (const auto& s : p.domain.components) note(s);
        for (const auto& t : net_.transitions)
            for (const auto& h : t.hidden) note(h.sort);
        for (std::size_t p = 0; p < net_.places.size(); ++p) {
            const auto& dom = net_.places[p].domain;
            if (dom.arity() == 1) {
                domainIds_.push_back(sort_ref(dom.components[0]));
                continue;
            }
            auto id = "D" + std::to_string(p);
            decls_ << "      <namedsort id=\"" << id << "\" name=\"" << id << "\"><productsort>";
            for (const auto& s : dom.components) decls_ << sort_ref(s);
            decls_ << "</productsort></namedsort>\n";
            domainIds_.push_back("<usersort declaration=\"" + id + "\"/>");
        }
        for (std::size_t t = 0; t < net_.transitions.size(); ++t)
            for (const auto& slot : variable_layout(net_, t))
                decls_ << "      <variabledecl id=\"" << var_id(t, slot.name) << "\" name=\"" << xml_escape(slot.name)
                       << "\">" << sort_ref(*slot.sort) << "</variabledecl>\n";
    }

    std::string var_id(std::size_t t, const std::string& name) const {
        return "v" + std::to_string(t) + "_" + xml_escape(name);
    }

    std::string colour_constant(const BasicSort& s, std::size_t i) const {
        if (s == BasicSort::dot()) return "<dotconstant/>";
        if (is_range(s))
            return "<finiteintrangeconstant value=\"" + std::to_string(s.value(i)) + "\">" + "<finiteintrange start=\"" +
                   std::to_string(s.lo()) + "\" end=\"" + std::to_string(s.hi()) + "\"/></finiteintrangeconstant>";
        return "<useroperator declaration=\"" + constant_id(s, i) + "\"/>";
    }

    static std::string numberof(Tokens k, const std::string& inner) {
        return "<numberof><subterm><numberconstant value=\"" + std::to_string(k) +
               "\"><positive/></numberconstant></subterm><subterm>" + inner + "</subterm></numberof>";
    }

    static std::string add(const std::vector<std::string>& parts) {
        if (parts.size() == 1) return parts[0];
        std::string out = "<add>";
        for (const auto& p : parts) out += "<subterm>" + p + "</subterm>";
        return out + "</add>";
    }

    static std::string tuple(const std::vector<std::string>& parts) {
        if (parts.size() == 1) return parts[0];
        std::string out = "<tuple>";
        for (const auto& p : parts) out += "<subterm>" + p + "</subterm>";
        return out + "</tuple>";
    }

    void place(std::ostream& out, std::size_t p) {
        const auto& pl = net_.places[p];
        out << "      <place id=\"" << xml_escape(pl.name) << "\"><name><text>" << xml_escape(pl.name)
            << "</text></name><type><structure>" << domainIds_[p] << "</structure></type>";
        std::vector<std::string> parts;
        for (std::size_t c = 0; c < pl.initial.size(); ++c) {
            if (!pl.initial[c]) continue;
            auto idx = pl.domain.decode(c);
            std::vector<std::string> comps;
            for (std::size_t k = 0; k < idx.size(); ++k) comps.push_back(colour_constant(pl.domain.components[k], idx[k]));
            parts.push_back(numberof(pl.initial[c], tuple(comps)));
        }
        if (!parts.empty()) out << "<hlinitialMarking><structure>" << add(parts) << "</structure></hlinitialMarking>";
        out << "</place>\n";
    }

    std::string variable(std::size_t t, const std::string& name) const {
        return "<variable refvariable=\"" + var_id(t, name) + "\"/>";
    }

    std::string term(std::size_t t, const Term& term) const {
        std::string out = term.is_variable() ? variable(t, term.variable)
                                             : "<finiteintrangeconstant value=\"" + std::to_string(term.constant) +
                                                   "\"><finiteintrange start=\"" + std::to_string(term.constant) +
                                                   "\" end=\"" + std::to_string(term.constant) +
                                                   "\"/></finiteintrangeconstant>";
        for (int i = 0; i < term.shift; ++i) out = "<successor><subterm>" + out + "</subterm></successor>";
        for (int i = 0; i > term.shift; --i) out = "<predecessor><subterm>" + out + "</subterm></predecessor>";
        return out;
    }

    std::string expr(std::size_t t, const Expr& e) const {
        static const char* names[] = {"equality", "inequality", "lessthan", "lessthanorequal", "greaterthan",
                                      "greaterthanorequal"};
        switch (e.kind) {
        case Expr::Kind::True: return "<booleanconstant value=\"true\"/>";
        case Expr::Kind::False: return "<booleanconstant value=\"false\"/>";
        case Expr::Kind::Compare: {
            std::string tag = names[static_cast<int>(e.op)];
            return "<" + tag + "><subterm>" + term(t, e.lhs) + "</subterm><subterm>" + term(t, e.rhs) + "</subterm></" +
                   tag + ">";
        }
        case Expr::Kind::And:
        case Expr::Kind::Or: break;
        }
        std::string tag = e.kind == Expr::Kind::And ? "and" : "or";
        std::string out = "<" + tag + ">";
        for (const auto& c : e.children) out += "<subterm>" + expr(t, c) + "</subterm>";
        return out + "</" + tag + ">";
    }

    Expr mode_disjunction(std::size_t t) const {
        const auto& tr = net_.transitions[t];
        auto layout = variable_layout(net_, t);
        std::vector<Expr> modes;
        for (const auto& m : tr.guard.modes()) {
            std::vector<Expr> eqs;
            for (std::size_t i = 0; i < m.colours.size(); ++i)
                eqs.push_back(Expr::comparison(Term::var(layout[i].name), CompareOp::Eq,
                                               Term::value(layout[i].sort->value(m.colours[i]))));
            modes.push_back(Expr::conjunction(std::move(eqs)));
        }
        return Expr::disjunction(std::move(modes));
    }

    void arc(std::ostream& out, std::size_t t, const ColouredArc& a, bool input) {
        const auto& tr = net_.transitions[t];
        const auto& pl = net_.places[a.place];
        std::vector<std::string> parts;
        for (const auto& tok : a.tokens) {
            std::vector<std::string> comps;
            for (const auto& v : tok) comps.push_back(variable(t, v));
            parts.push_back(numberof(1, tuple(comps)));
        }
        if (a.allCopies) parts.push_back(numberof(a.allCopies, "<all>" + domainIds_[a.place] + "</all>"));
        auto place = xml_escape(pl.name), trans = xml_escape(tr.name);
        out << "      <arc id=\"a" << arcs_++ << "\" source=\"" << (input ? place : trans) << "\" target=\""
            << (input ? trans : place) << "\"><hlinscription><structure>" << add(parts)
            << "</structure></hlinscription></arc>\n";
    }

    void transition(std::ostream& out, std::size_t t) {
        const auto& tr = net_.transitions[t];
        auto g = tr.guard.extensional() ? mode_disjunction(t) : tr.guard.expression();
        out << "      <transition id=\"" << xml_escape(tr.name) << "\"><name><text>" << xml_escape(tr.name)
            << "</text></name>";
        if (g.kind != Expr::Kind::True) out << "<condition><structure>" << expr(t, g) << "</structure></condition>";
        out << "</transition>\n";
        for (const auto& a : tr.inputs) arc(out, t, a, true);
        for (const auto& a : tr.outputs) arc(out, t, a, false);
    }
};

} // namespace

AnyNet parse_pnml(std::string_view xml) {
    pt::ptree tree;
    std::istringstream in{std::string(xml)};
    try {
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError("malformed XML: " + e.message(), e.line());
    }
    auto root = tree.get_child_optional("pnml");
    if (!root) throw ParseError("missing <pnml> root element");
    std::vector<const pt::ptree*> nets;
    for (const auto& [tag, child] : *root) {
        if (tag == "net") nets.push_back(&child);
        else if (!skipped(tag)) unsupported(tag, "/pnml/" + tag);
    }
    if (nets.size() != 1) throw ParseError("expected exactly one <net> in /pnml");
    auto id = optional_attr(*nets[0], "id");
    Reader reader(*nets[0], "/pnml/net" + (id.empty() ? "" : "[" + id + "]"));
    return reader.read();
}

std::string write_pnml(const PTNet& net, std::string_view id) {
    std::ostringstream out;
    out << kHeader << "  <net id=\"" << xml_escape(id) << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
        << "    <page id=\"page\">\n";
    for (std::size_t p = 0; p < net.places.size(); ++p) {
        out << "      <place id=\"" << xml_escape(net.places[p]) << "\"><name><text>" << xml_escape(net.places[p])
            << "</text></name>";
        if (net.initial[p]) out << "<initialMarking><text>" << net.initial[p] << "</text></initialMarking>";
        out << "</place>\n";
    }
    std::size_t arcs = 0;
    for (std::size_t t = 0; t < net.transitions.size(); ++t) {
        auto name = xml_escape(net.transitions[t]);
        out << "      <transition id=\"" << name << "\"><name><text>" << name << "</text></name></transition>\n";
        auto arc = [&](const std::string& src, const std::string& dst, Tokens w) {
            out << "      <arc id=\"a" << arcs++ << "\" source=\"" << src << "\" target=\"" << dst << "\">";
            if (w != 1) out << "<inscription><text>" << w << "</text></inscription>";
            out << "</arc>\n";
        };
        for (const auto& a : net.pre[t]) arc(xml_escape(net.places[a.place]), name, a.weight);
        for (const auto& a : net.post[t]) arc(name, xml_escape(net.places[a.place]), a.weight);
    }
    out << "    </page>\n  </net>\n</pnml>\n";
    return out.str();
}

std::string write_pnml(const ColouredNet& net, std::string_view id) { return Writer(net).write(id); }

} // namespace skel
