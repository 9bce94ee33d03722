#include "grammatic/printer.hpp"

#include <sstream>

namespace grammatic {

std::string escape_text(std::string_view text, char quote) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\r': out += "\\r"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            default:
                if (c == quote) {
                    out += '\\';
                    out += quote;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

namespace {

std::string quoted(std::string_view text) { return "'" + escape_text(text, '\'') + "'"; }

std::string print_class(const std::vector<CharClassItem>& items) {
    std::string out = "[";
    bool first = true;
    for (const auto& item : items) {
        if (!first) out += ' ';
        first = false;
        out += quoted(std::string(1, item.lo));
        if (item.is_range) {
            out += "--";
            out += quoted(std::string(1, item.hi));
        }
    }
    out += ']';
    return out;
}

void print_into(const Expr& e, std::string& out);

// Parenthesize children whose structure would otherwise dissolve into the
// surrounding sequence/alternative/iteration.
void print_child(const Expr& child, bool parens, std::string& out) {
    if (parens) {
        out += '(';
        print_into(child, out);
        out += ')';
    } else {
        print_into(child, out);
    }
}

void print_into(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::Sequence: {
            if (e.children.empty()) {
                out += "()";
                return;
            }
            bool first = true;
            for (const auto& c : e.children) {
                if (!first) out += ' ';
                first = false;
                print_child(*c, c->kind == ExprKind::Sequence || c->kind == ExprKind::Alternative,
                            out);
            }
            return;
        }
        case ExprKind::Alternative: {
            bool first = true;
            for (const auto& c : e.children) {
                if (!first) out += " | ";
                first = false;
                print_child(*c, c->kind == ExprKind::Alternative, out);
            }
            return;
        }
        case ExprKind::Iteration: {
            const Expr& child = *e.children[0];
            print_child(child,
                        child.kind == ExprKind::Sequence || child.kind == ExprKind::Alternative,
                        out);
            out += e.iter == IterKind::Star ? '*' : e.iter == IterKind::Plus ? '+' : '?';
            return;
        }
        case ExprKind::SymbolRef:
            out += e.text;
            return;
        case ExprKind::StringLiteral:
            out += quoted(e.text);
            return;
        case ExprKind::CharClass:
            out += print_class(e.items);
            return;
        case ExprKind::Placeholder:
            out += '$';
            out += e.text;
            return;
    }
}

std::string production_text(const Production& p) {
    if (p.body->kind == ExprKind::Sequence && p.body->children.empty()) return "";
    std::string out;
    print_into(*p.body, out);
    return out;
}

void print_rule(const std::string& name, bool name_is_placeholder,
                const std::vector<ProductionPtr>& productions, const std::string& indent,
                std::ostringstream& out) {
    std::string head = (name_is_placeholder ? "$" : "") + name;
    if (productions.size() == 1) {
        std::string body = production_text(*productions[0]);
        out << indent << head << " :" << (body.empty() ? "" : " " + body) << " ;\n";
        return;
    }
    out << indent << head << "\n";
    bool first = true;
    for (const auto& p : productions) {
        out << indent << "    " << (first ? ": " : "|| ") << production_text(*p) << "\n";
        first = false;
    }
    out << indent << "    ;\n";
}

std::string import_text(const ImportDecl& decl) {
    std::string out = "import " + decl.target;
    if (decl.is_instantiation) {
        out += '<';
        bool first_arg = true;
        for (const auto& arg : decl.args) {
            if (!first_arg) out += ", ";
            first_arg = false;
            bool first_prod = true;
            for (const auto& p : arg.productions) {
                if (!first_prod) out += " || ";
                first_prod = false;
                out += production_text(*p);
            }
        }
        out += '>';
    }
    out += ";\n";
    return out;
}

}  // namespace

std::string print_expr(const Expr& expr) {
    std::string out;
    print_into(expr, out);
    return out;
}

std::string print_grammar(const ParsedUnit& unit) {
    std::ostringstream out;
    for (const auto& import : unit.imports) out << import_text(import);
    for (const auto& def : unit.templates) {
        out << (def->result_kind == TemplateResultKind::Symbol       ? "Symbol"
                : def->result_kind == TemplateResultKind::Expression ? "Expression"
                                                                     : "Production")
            << ' ' << def->name << '<';
        bool first = true;
        for (const auto& p : def->params) {
            if (!first) out << ", ";
            first = false;
            out << param_kind_name(p.kind) << " $" << p.name;
        }
        out << "> {\n";
        for (const auto& rule : def->body)
            print_rule(rule.name, rule.name_is_placeholder, rule.productions, "    ", out);
        out << "}\n";
    }
    for (const auto& rule : unit.rules)
        print_rule(rule->name, false, rule->productions, "", out);
    return out.str();
}

std::string print_grammar(const Grammar& grammar) {
    std::ostringstream out;
    for (const auto& rule : grammar.symbols())
        print_rule(rule->name, false, rule->productions, "", out);
    return out.str();
}

namespace {

void print_value_into(const AttributeValue& v, std::string& out) {
    switch (v.kind()) {
        case ValueKind::Id:
            out += v.text();
            return;
        case ValueKind::Str:
            out += quoted(v.text());
            return;
        case ValueKind::Int:
            out += std::to_string(v.num());
            return;
        case ValueKind::Tuple: {
            out += "{ ";
            for (const auto& f : v.fields()) {
                out += f.name;
                out += " = ";
                print_value_into(f.value, out);
                out += "; ";
            }
            out += '}';
            return;
        }
        case ValueKind::Seq: {
            out += "{{";
            for (const auto& e : v.elements()) {
                out += ' ';
                switch (e.kind) {
                    case SeqKind::Ident: out += e.text; break;
                    case SeqKind::Str: out += quoted(e.text); break;
                    case SeqKind::Num: out += std::to_string(e.num); break;
                    case SeqKind::Tuple:
                    case SeqKind::Seq: print_value_into(e.value, out); break;
                    case SeqKind::Punct: out += e.text; break;
                }
            }
            out += " }}";
            return;
        }
        case ValueKind::None:
            return;
    }
}

}  // namespace

std::string print_attribute_value(const AttributeValue& value) {
    std::string out;
    print_value_into(value, out);
    return out;
}

std::string print_annotation(const Annotation& annotation) {
    std::ostringstream out;
    for (const auto& a : annotation.attributes) {
        out << a.name;
        if (a.value.kind() != ValueKind::None) out << " = " << print_attribute_value(a.value);
        out << ";\n";
    }
    return out.str();
}

}  // namespace grammatic
