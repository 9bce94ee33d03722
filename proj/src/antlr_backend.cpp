#include "grammatic/antlr_backend.hpp"

#include <cctype>
#include <sstream>

#include "antlr_common.hpp"
#include "grammatic/printer.hpp"

namespace grammatic {

namespace antlr {

std::string antlr_quote(const std::string& text) { return "'" + escape_text(text, '\'') + "'"; }

std::string render_char_class(const Expr& e, bool force_parens) {
    std::string body;
    bool first = true;
    for (const auto& item : e.items) {
        if (!first) body += " | ";
        first = false;
        body += antlr_quote(std::string(1, item.lo));
        if (item.is_range) body += ".." + antlr_quote(std::string(1, item.hi));
    }
    bool compound = e.items.size() > 1 || e.items[0].is_range;
    if (e.items.size() > 1 || (force_parens && compound)) return "(" + body + ")";
    return body;
}

namespace {

bool needs_parens_in_seq(const Expr& e) {
    return e.kind == ExprKind::Sequence || e.kind == ExprKind::Alternative;
}

std::string render_iter_child(const Expr& child, const RenderHooks& hooks) {
    if (child.kind == ExprKind::CharClass) return render_char_class(child, true);
    std::string text = render_expr(child, hooks, false);
    bool atom = (child.kind == ExprKind::SymbolRef || child.kind == ExprKind::StringLiteral) &&
                (!hooks.after_node || hooks.after_node(child).empty()) &&
                text.find(' ') == std::string::npos;
    if (atom || child.kind == ExprKind::Iteration) return text;
    if (!text.empty() && text.front() == '(' && text.back() == ')') return text;
    return "(" + text + ")";
}

}  // namespace

std::string render_expr(const Expr& e, const RenderHooks& hooks, bool top) {
    std::string out;
    switch (e.kind) {
        case ExprKind::Sequence: {
            if (e.children.empty()) {
                out = top ? "" : "()";
                break;
            }
            bool first = true;
            for (const auto& c : e.children) {
                if (!first) out += ' ';
                first = false;
                if (needs_parens_in_seq(*c)) out += "(" + render_expr(*c, hooks, false) + ")";
                else out += render_expr(*c, hooks, false);
            }
            break;
        }
        case ExprKind::Alternative: {
            bool first = true;
            for (const auto& c : e.children) {
                if (!first) out += " | ";
                first = false;
                if (c->kind == ExprKind::Alternative) out += "(" + render_expr(*c, hooks, false) + ")";
                else out += render_expr(*c, hooks, false);
            }
            if (!top) out = "(" + out + ")";
            return out + (hooks.after_node ? hooks.after_node(e) : "");
        }
        case ExprKind::Iteration: {
            out = render_iter_child(*e.children[0], hooks);
            out += e.iter == IterKind::Star ? '*' : e.iter == IterKind::Plus ? '+' : '?';
            break;
        }
        case ExprKind::SymbolRef:
            out = hooks.symbol_ref ? hooks.symbol_ref(e) : e.text;
            break;
        case ExprKind::StringLiteral:
            out = antlr_quote(e.text);
            break;
        case ExprKind::CharClass:
            out = render_char_class(e, false);
            break;
        case ExprKind::Placeholder:
            throw Error(e.span, "placeholder in a resolved grammar");
    }
    if (hooks.after_node) out += hooks.after_node(e);
    return out;
}

std::string grammar_name_for(const Grammar& grammar, const AnnotationStore& store,
                             const std::string& fallback) {
    if (const AttributeValue* v = store.lookup(grammar.id(), "antlrName")) {
        if (v->kind() != ValueKind::Id) throw Error("attribute 'antlrName' must be an ID");
        return v->text();
    }
    if (fallback.empty()) throw Error("no grammar name: set one or attach 'antlrName'");
    return fallback;
}

std::string header_action_for(const Grammar& grammar, const AnnotationStore& store,
                              const std::string& fallback) {
    if (const AttributeValue* v = store.lookup(grammar.id(), "antlrHeader")) {
        if (v->kind() != ValueKind::Str) throw Error("attribute 'antlrHeader' must be a STRING");
        return v->text();
    }
    return fallback;
}

}  // namespace antlr

std::set<std::string> lexical_symbols(const Grammar& grammar) {
    // Least fixpoint: a symbol is lexical when its productions expand into
    // plain regular expressions — literals, char classes, combinators, and
    // references to already-lexical symbols. Recursive symbols never qualify.
    std::set<std::string> lexical;

    std::function<bool(const Expr&)> pure = [&](const Expr& e) -> bool {
        switch (e.kind) {
            case ExprKind::SymbolRef:
                return lexical.count(e.text) > 0;
            case ExprKind::StringLiteral:
            case ExprKind::CharClass:
                return true;
            case ExprKind::Placeholder:
                return false;
            default:
                for (const auto& c : e.children)
                    if (!pure(*c)) return false;
                return true;
        }
    };

    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& s : grammar.symbols()) {
            if (lexical.count(s->name)) continue;
            bool all_pure = true;
            for (const auto& p : s->productions) {
                if (!pure(*p->body)) {
                    all_pure = false;
                    break;
                }
            }
            if (all_pure) {
                lexical.insert(s->name);
                changed = true;
            }
        }
    }
    return lexical;
}

std::string substitute_action(const std::string& body,
                              const std::map<std::string, std::string>& scope,
                              const std::string& result_var) {
    std::string out;
    std::size_t i = 0;
    auto ident_at = [&](std::size_t pos) {
        std::string name;
        while (pos < body.size() &&
               (std::isalnum(static_cast<unsigned char>(body[pos])) || body[pos] == '_'))
            name += body[pos++];
        return name;
    };
    while (i < body.size()) {
        if (body[i] != '#') {
            out += body[i++];
            continue;
        }
        if (i + 1 < body.size() && body[i + 1] == '#') {
            std::string name = ident_at(i + 2);
            if (name != "result")
                throw Error("unknown rule-result reference '##" + name + "' in action");
            out += result_var;
            i += 2 + name.size();
            continue;
        }
        std::string name = ident_at(i + 1);
        if (name.empty()) {
            out += body[i++];
            continue;
        }
        auto it = scope.find(name);
        if (it == scope.end()) throw Error("unresolved reference '#" + name + "' in action");
        out += it->second;
        i += 1 + name.size();
    }
    return out;
}

namespace {

using antlr::RenderHooks;

struct OccurrenceInfo {
    const Expr* node = nullptr;
    ExprPtr ptr;
    std::string name;
    int ordinal = 0;  // among same-name occurrences, left to right
};

void collect_refs(const ExprPtr& e, std::vector<OccurrenceInfo>& out,
                  std::map<std::string, int>& counters) {
    if (e->kind == ExprKind::SymbolRef) {
        OccurrenceInfo info;
        info.node = e.get();
        info.ptr = e;
        info.name = e->text;
        info.ordinal = counters[e->text]++;
        out.push_back(std::move(info));
    }
    for (const auto& c : e->children) collect_refs(c, out, counters);
}

struct AntlrGenerator {
    const Grammar& grammar;
    const AnnotationStore& store;
    const AntlrGenConfig& config;
    std::vector<Diagnostic>& warnings;

    void warn_unknown_attributes() {
        auto known = [](NodeKind kind, const std::string& name) {
            switch (kind) {
                case NodeKind::Symbol: return name == "returns" || name == "params";
                case NodeKind::Production:
                    return name == "predicate" || name == "before" || name == "after";
                default: return name == "after" || name == "arguments";
            }
        };
        if (const Annotation* ann = store.annotation(grammar.id())) {
            for (const auto& a : ann->attributes)
                if (a.name != "antlrName" && a.name != "antlrHeader")
                    warnings.push_back(Diagnostic{a.span, Severity::Warning,
                                                  "ignoring unknown grammar attribute '" + a.name + "'"});
        }
        for (const auto& entry : walk(grammar)) {
            const Annotation* ann = store.annotation(entry.id);
            if (!ann) continue;
            for (const auto& a : ann->attributes) {
                if (!known(entry.kind, a.name))
                    warnings.push_back(Diagnostic{
                        a.span, Severity::Warning,
                        "ignoring unknown attribute '" + a.name + "' on a " +
                            node_kind_name(entry.kind) + " node"});
            }
        }
    }

    std::string string_attr(NodeId node, const std::string& name) {
        const AttributeValue* v = store.lookup(node, name);
        if (!v) return "";
        if (v->kind() != ValueKind::Str)
            throw Error("attribute '" + name + "' must be a STRING, got " +
                        value_kind_name(v->kind()));
        return v->text();
    }

    std::string returns_clause(const Symbol& symbol) {
        const AttributeValue* v = store.lookup(symbol.id, "returns");
        if (!v) return "";
        if (v->kind() != ValueKind::Id)
            throw Error("attribute 'returns' on '" + symbol.name + "' must be an ID, got " +
                        value_kind_name(v->kind()));
        return " returns [" + v->text() + " result]";
    }

    std::string params_clause(const Symbol& symbol) {
        const AttributeValue* v = store.lookup(symbol.id, "params");
        if (!v) return "";
        if (v->kind() != ValueKind::Seq)
            throw Error("attribute 'params' on '" + symbol.name + "' must be a SEQUENCE of TUPLE");
        std::string out;
        for (const auto& elem : v->elements()) {
            if (elem.kind != SeqKind::Tuple)
                throw Error("attribute 'params' on '" + symbol.name + "' must contain tuples");
            const AttributeValue* type = elem.value.field("type");
            const AttributeValue* name = elem.value.field("name");
            if (!type || !name || type->kind() != ValueKind::Id || name->kind() != ValueKind::Id)
                throw Error("parameter tuples need ID fields 'type' and 'name' ('" + symbol.name +
                            "')");
            if (!out.empty()) out += ", ";
            out += type->text() + " " + name->text();
        }
        return " [" + out + "]";
    }

    std::vector<std::string> arguments_for(const Expr& node) {
        const AttributeValue* v = store.lookup(node.id, "arguments");
        if (!v) return {};
        if (v->kind() != ValueKind::Seq)
            throw Error("attribute 'arguments' must be a SEQUENCE of ID");
        std::vector<std::string> out;
        for (const auto& elem : v->elements()) {
            if (elem.kind == SeqKind::Punct && elem.text == ",") continue;
            if (elem.kind != SeqKind::Ident)
                throw Error("attribute 'arguments' must contain identifiers");
            out.push_back(elem.text);
        }
        return out;
    }

    // Resolves a '#name' action reference within a production: an action
    // attached to an occurrence sees that occurrence; anything else needs a
    // unique occurrence of the name.
    const OccurrenceInfo* resolve_ref(const std::string& name,
                                      const std::vector<OccurrenceInfo>& occurrences,
                                      const Expr* attached_to) {
        if (attached_to && attached_to->kind == ExprKind::SymbolRef && attached_to->text == name) {
            for (const auto& occ : occurrences)
                if (occ.node == attached_to) return &occ;
        }
        const OccurrenceInfo* found = nullptr;
        for (const auto& occ : occurrences) {
            if (occ.name != name) continue;
            if (found)
                throw Error("ambiguous reference '#" + name + "': several occurrences in one production");
            found = &occ;
        }
        if (!found) throw Error("unresolved reference '#" + name + "' in action");
        return found;
    }

    static std::string label_of(const OccurrenceInfo& occ) {
        return occ.name + std::to_string(occ.ordinal);
    }

    // Scans one action text for '#name' references, marking needed labels
    // and building the substitution scope.
    std::map<std::string, std::string> action_scope(const std::string& text,
                                                    const std::vector<OccurrenceInfo>& occurrences,
                                                    const Expr* attached_to,
                                                    std::set<const Expr*>& labeled) {
        std::map<std::string, std::string> scope;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '#') continue;
            if (i + 1 < text.size() && text[i + 1] == '#') {
                ++i;
                while (i + 1 < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[i + 1])) || text[i + 1] == '_'))
                    ++i;
                continue;
            }
            std::string name;
            std::size_t j = i + 1;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                name += text[j++];
            if (name.empty()) continue;
            const OccurrenceInfo* occ = resolve_ref(name, occurrences, attached_to);
            labeled.insert(occ->node);
            scope[name] = label_of(*occ);
            i = j - 1;
        }
        return scope;
    }

    std::string render_production(const Production& production) {
        std::vector<OccurrenceInfo> occurrences;
        std::map<std::string, int> counters;
        collect_refs(production.body, occurrences, counters);

        // First pass: find which occurrences need labels.
        std::set<const Expr*> labeled;
        std::map<const Expr*, std::pair<std::string, std::map<std::string, std::string>>> after_actions;

        std::string before = string_attr(production.id, "before");
        std::map<std::string, std::string> before_scope;
        if (!before.empty()) before_scope = action_scope(before, occurrences, nullptr, labeled);
        std::string after = string_attr(production.id, "after");
        std::map<std::string, std::string> after_scope;
        if (!after.empty()) after_scope = action_scope(after, occurrences, nullptr, labeled);

        for (const auto& entry : walk_production_exprs(production)) {
            std::string text = string_attr(entry->id, "after");
            if (text.empty()) continue;
            after_actions[entry.get()] = {text, action_scope(text, occurrences, entry.get(), labeled)};
        }

        RenderHooks hooks;
        hooks.symbol_ref = [&](const Expr& node) {
            std::string text;
            if (labeled.count(&node)) {
                for (const auto& occ : occurrences)
                    if (occ.node == &node) text = label_of(occ) + "=";
            }
            text += node.text;
            std::vector<std::string> args = arguments_for(node);
            if (!args.empty()) {
                text += "[";
                for (std::size_t i = 0; i < args.size(); ++i)
                    text += (i ? ", " : "") + args[i];
                text += "]";
            }
            return text;
        };
        hooks.after_node = [&](const Expr& node) -> std::string {
            auto it = after_actions.find(&node);
            if (it == after_actions.end()) return "";
            return " {" + substitute_action(it->second.first, it->second.second, "result") + "}";
        };

        bool top = production.body->kind != ExprKind::Alternative;
        std::string body = antlr::render_expr(*production.body, hooks, top);

        std::string out;
        std::string predicate = string_attr(production.id, "predicate");
        if (!predicate.empty()) out += "(" + predicate + ")=> ";
        if (!before.empty())
            out += "{" + substitute_action(before, before_scope, "result") + "}" + (body.empty() ? "" : " ");
        out += body;
        if (!after.empty()) out += " {" + substitute_action(after, after_scope, "result") + "}";
        return out;
    }

    static std::vector<ExprPtr> walk_production_exprs(const Production& production) {
        std::vector<ExprPtr> out;
        std::function<void(const ExprPtr&)> rec = [&](const ExprPtr& e) {
            out.push_back(e);
            for (const auto& c : e->children) rec(c);
        };
        rec(production.body);
        return out;
    }

    std::string render_rule(const Symbol& symbol) {
        std::string head = symbol.name + params_clause(symbol) + returns_clause(symbol);
        std::vector<std::string> alts;
        for (const auto& p : symbol.productions) alts.push_back(render_production(*p));

        std::ostringstream out;
        if (alts.size() == 1 && head == symbol.name) {
            out << symbol.name << " : " << alts[0] << (alts[0].empty() ? ";" : " ;") << "\n";
            return out.str();
        }
        out << head << "\n";
        for (std::size_t i = 0; i < alts.size(); ++i)
            out << "  " << (i == 0 ? ": " : "| ") << alts[i] << "\n";
        out << "  ;\n";
        return out.str();
    }

    std::string run() {
        warn_unknown_attributes();
        std::ostringstream out;
        out << "grammar " << antlr::grammar_name_for(grammar, store, config.grammar_name) << ";\n";
        std::string header = antlr::header_action_for(grammar, store, config.header_action);
        if (!header.empty()) out << "\n@header {\n" << header << "\n}\n";
        for (const auto& symbol : grammar.symbols()) {
            out << "\n" << render_rule(*symbol);
        }
        return out.str();
    }
};

}  // namespace

GenResult generate_antlr(const Grammar& grammar, const AnnotationStore& store,
                         const AntlrGenConfig& config) {
    if (config.occurrence_naming != "name-index")
        throw Error("unknown occurrence naming scheme '" + config.occurrence_naming + "'");
    GenResult result;
    AntlrGenerator gen{grammar, store, config, result.warnings};
    result.text = gen.run();
    return result;
}

}  // namespace grammatic
