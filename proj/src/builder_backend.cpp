#include "grammatic/builder_backend.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "antlr_common.hpp"

namespace grammatic {

namespace {

class SeqCursor {
public:
    explicit SeqCursor(const std::vector<SeqElement>& elements) : elements_(elements) {}

    bool done() const { return pos_ >= elements_.size(); }

    [[noreturn]] void fail(const std::string& expected) const {
        std::string got = done() ? "end of sequence" : describe(elements_[pos_]);
        throw Error("token " + std::to_string(pos_ + 1) + ": expected " + expected + ", got " + got);
    }

    std::string ident(const std::string& what) {
        if (done() || elements_[pos_].kind != SeqKind::Ident) fail(what);
        return elements_[pos_++].text;
    }

    void punct(char c) {
        if (done() || elements_[pos_].kind != SeqKind::Punct || elements_[pos_].text[0] != c)
            fail(std::string("'") + c + "'");
        ++pos_;
    }

    bool at_punct(char c) const {
        return !done() && elements_[pos_].kind == SeqKind::Punct && elements_[pos_].text[0] == c;
    }

private:
    static std::string describe(const SeqElement& e) {
        switch (e.kind) {
            case SeqKind::Ident: return "identifier '" + e.text + "'";
            case SeqKind::Str: return "string";
            case SeqKind::Num: return "number";
            case SeqKind::Tuple: return "tuple";
            case SeqKind::Seq: return "sequence";
            case SeqKind::Punct: return "'" + e.text + "'";
        }
        return "?";
    }

    const std::vector<SeqElement>& elements_;
    std::size_t pos_ = 0;
};

std::string capitalized(const std::string& name) {
    std::string out = name;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string interface_name(const std::string& rule_name) {
    return "I" + capitalized(rule_name) + "Builder";
}

std::string getter_name(const std::string& rule_name) {
    return "get" + capitalized(rule_name) + "Builder";
}

// varMult -> vm, constSum -> cs, f -> f: lowercased camel-case initials.
std::string label_stem(const std::string& callee) {
    std::string out;
    for (std::size_t i = 0; i < callee.size(); ++i) {
        if (i == 0 || std::isupper(static_cast<unsigned char>(callee[i])))
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(callee[i])));
    }
    return out.empty() ? callee : out;
}

}  // namespace

std::vector<BuilderSignature> parse_builders(const std::vector<SeqElement>& seq) {
    std::vector<BuilderSignature> out;
    SeqCursor cur(seq);
    while (!cur.done()) {
        BuilderSignature sig;
        sig.return_type = cur.ident("a return type");
        sig.rule_name = cur.ident("a rule name");
        cur.punct('(');
        if (!cur.at_punct(')')) {
            for (;;) {
                std::string type = cur.ident("a parameter type");
                std::string name = cur.ident("a parameter name");
                sig.params.emplace_back(std::move(type), std::move(name));
                if (cur.at_punct(',')) {
                    cur.punct(',');
                    continue;
                }
                break;
            }
        }
        cur.punct(')');
        cur.punct(';');
        out.push_back(std::move(sig));
    }
    return out;
}

CallSpec parse_call(const AttributeValue& tuple) {
    if (tuple.kind() != ValueKind::Tuple)
        throw Error("'call' attribute must be a TUPLE of rule-name entries");
    CallSpec out;
    for (const auto& field : tuple.fields()) {
        if (field.value.kind() != ValueKind::Seq)
            throw Error("call entry '" + field.name + "' must be a SEQUENCE");
        SeqCursor cur(field.value.elements());
        CallEntry entry;
        entry.callee = cur.ident("a callee rule name");
        cur.punct('(');
        if (!cur.at_punct(')')) {
            for (;;) {
                if (cur.done()) throw Error("call entry '" + field.name + "': unbalanced call");
                entry.args.push_back(cur.ident("an argument name"));
                if (cur.at_punct(',')) {
                    cur.punct(',');
                    continue;
                }
                break;
            }
        }
        if (!cur.at_punct(')')) throw Error("call entry '" + field.name + "': unbalanced call");
        cur.punct(')');
        if (!cur.done()) cur.fail("end of call");
        out.emplace(field.name, std::move(entry));
    }
    return out;
}

namespace {

struct BuilderGenerator {
    BuilderGenerator(const Grammar& g, const AnnotationStore& s, const AntlrGenConfig& c,
                     BuildersResult& r)
        : grammar(g), store(s), config(c), result(r) {}

    const Grammar& grammar;
    const AnnotationStore& store;
    const AntlrGenConfig& config;
    BuildersResult& result;

    std::set<std::string> lexical;
    // symbol name -> its declared signatures, in declaration order
    std::map<std::string, std::vector<BuilderSignature>> builders;
    std::vector<const Symbol*> builder_symbols;

    // Symbols declaring builders are parser rules whatever their shape;
    // the lexical set is computed with those excluded up front.
    void classify() {
        std::function<bool(const Expr&)> pure = [&](const Expr& e) -> bool {
            switch (e.kind) {
                case ExprKind::SymbolRef: return lexical.count(e.text) > 0;
                case ExprKind::StringLiteral:
                case ExprKind::CharClass: return true;
                case ExprKind::Placeholder: return false;
                default:
                    for (const auto& c : e.children)
                        if (!pure(*c)) return false;
                    return true;
            }
        };
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& s : grammar.symbols()) {
                if (lexical.count(s->name) || builders.count(s->name)) continue;
                bool all_pure = true;
                for (const auto& p : s->productions)
                    if (!pure(*p->body)) {
                        all_pure = false;
                        break;
                    }
                if (all_pure) {
                    lexical.insert(s->name);
                    changed = true;
                }
            }
        }
    }

    void collect_builders() {
        std::set<std::string> rule_names;
        for (const auto& symbol : grammar.symbols()) {
            const AttributeValue* v = store.lookup(symbol->id, "builders");
            if (!v) continue;
            if (v->kind() != ValueKind::Seq)
                throw Error("attribute 'builders' on '" + symbol->name + "' must be a SEQUENCE");
            std::vector<BuilderSignature> sigs;
            try {
                sigs = parse_builders(v->elements());
            } catch (const Error& e) {
                throw Error("builders of '" + symbol->name + "': " + e.diagnostic().message);
            }
            if (sigs.empty())
                throw Error("attribute 'builders' on '" + symbol->name + "' declares no signatures");
            for (const auto& sig : sigs) {
                if (!rule_names.insert(sig.rule_name).second)
                    throw Error("builder rule '" + sig.rule_name + "' declared more than once");
                if (grammar.lookup(sig.rule_name) && sig.rule_name != symbol->name)
                    throw Error("builder rule '" + sig.rule_name + "' collides with a grammar symbol");
            }
            builders[symbol->name] = std::move(sigs);
            builder_symbols.push_back(symbol.get());
        }
        if (builders.empty()) throw Error("no symbol declares a 'builders' attribute");
    }

    const BuilderSignature* signature_of(const std::string& symbol_name,
                                         const std::string& rule_name) const {
        auto it = builders.find(symbol_name);
        if (it == builders.end()) return nullptr;
        for (const auto& sig : it->second)
            if (sig.rule_name == rule_name) return &sig;
        return nullptr;
    }

    struct RuleRender {
        std::string text;
        // callee -> parameter type, in first-use order
        std::vector<std::pair<std::string, std::string>> callbacks;
    };

    RuleRender render_rule(const Symbol& symbol, const BuilderSignature& sig) {
        RuleRender render;
        std::map<std::string, int> label_counts;
        std::set<std::string> seen_callbacks;

        antlr::RenderHooks hooks;
        std::map<const Expr*, std::string> call_actions;
        hooks.symbol_ref = [&](const Expr& node) -> std::string {
            const std::string& callee_symbol = node.text;
            if (lexical.count(callee_symbol)) return callee_symbol;  // token, consumed silently
            auto target = builders.find(callee_symbol);
            if (target == builders.end())
                throw Error("symbol '" + callee_symbol + "' is called from builder rule '" +
                            sig.rule_name + "' but declares no builders");
            const AttributeValue* call_attr = store.lookup(node.id, "call");
            if (!call_attr)
                throw Error("occurrence of '" + callee_symbol + "' in '" + symbol.name +
                            "' carries no 'call' attribute");
            CallSpec spec = parse_call(*call_attr);
            auto entry = spec.find(sig.rule_name);
            if (entry == spec.end())
                throw Error("call on occurrence of '" + callee_symbol +
                            "' does not cover signature '" + sig.rule_name + "'");
            const BuilderSignature* callee_sig = signature_of(callee_symbol, entry->second.callee);
            if (!callee_sig)
                throw Error("callee signature '" + entry->second.callee + "' not found on symbol '" +
                            callee_symbol + "'");

            int ordinal = label_counts[callee_sig->rule_name]++;
            std::string label = label_stem(callee_sig->rule_name);
            if (ordinal > 0) label += std::to_string(ordinal);

            if (seen_callbacks.insert(callee_sig->rule_name).second)
                render.callbacks.emplace_back(callee_sig->rule_name, callee_sig->return_type);

            std::string text = label + "=" + callee_sig->rule_name;
            if (!entry->second.args.empty()) {
                text += "[";
                for (std::size_t i = 0; i < entry->second.args.size(); ++i)
                    text += (i ? ", " : "") + entry->second.args[i];
                text += "]";
            }
            call_actions[&node] = " {builder." + callee_sig->rule_name + "(" + label + ");}";
            return text;
        };
        hooks.after_node = [&](const Expr& node) -> std::string {
            auto it = call_actions.find(&node);
            return it == call_actions.end() ? std::string() : it->second;
        };

        bool is_void = sig.return_type == "void";
        std::ostringstream out;
        out << sig.rule_name;
        if (!sig.params.empty()) {
            out << " [";
            for (std::size_t i = 0; i < sig.params.size(); ++i)
                out << (i ? ", " : "") << sig.params[i].first << " " << sig.params[i].second;
            out << "]";
        }
        if (!is_void) out << " returns [" << sig.return_type << " result]";
        out << "\n@init {\n    " << interface_name(sig.rule_name) << " builder = myBuilders."
            << getter_name(sig.rule_name) << "(";
        for (std::size_t i = 0; i < sig.params.size(); ++i)
            out << (i ? ", " : "") << sig.params[i].second;
        out << ");\n}\n";

        std::string epilogue =
            is_void ? " {builder.getResult();}" : " {result = builder.getResult();}";
        for (std::size_t i = 0; i < symbol.productions.size(); ++i) {
            const Production& production = *symbol.productions[i];
            bool top = production.body->kind != ExprKind::Alternative;
            std::string body = antlr::render_expr(*production.body, hooks, top);
            out << "  " << (i == 0 ? ": " : "| ") << body << epilogue << "\n";
        }
        out << "  ;\n";
        render.text = out.str();
        return render;
    }

    std::string interface_source(const BuilderSignature& sig,
                                 const std::vector<std::pair<std::string, std::string>>& callbacks) {
        std::ostringstream out;
        out << "interface " << interface_name(sig.rule_name) << " {\n";
        for (const auto& [callee, type] : callbacks)
            out << "    void " << callee << "(" << type << " value);\n";
        out << "    " << sig.return_type << " getResult();\n";
        out << "}\n";
        return out.str();
    }

    void run() {
        collect_builders();
        classify();
        for (const auto& symbol : grammar.symbols()) {
            if (!builders.count(symbol->name) && !lexical.count(symbol->name))
                result.warnings.push_back(Diagnostic{
                    symbol->span, Severity::Warning,
                    "symbol '" + symbol->name + "' declares no builders and is not generated"});
        }

        std::ostringstream grammar_out;
        grammar_out << "grammar "
                    << antlr::grammar_name_for(grammar, store, config.grammar_name) << ";\n";
        std::string header = antlr::header_action_for(grammar, store, config.header_action);
        if (!header.empty()) grammar_out << "\n@header {\n" << header << "\n}\n";

        std::vector<std::pair<const Symbol*, const BuilderSignature*>> all_signatures;
        for (const Symbol* symbol : builder_symbols)
            for (const auto& sig : builders[symbol->name]) all_signatures.emplace_back(symbol, &sig);

        std::ostringstream factory;
        factory << "interface IBuilders {\n";
        for (const auto& [symbol, sig] : all_signatures) {
            RuleRender render = render_rule(*symbol, *sig);
            grammar_out << "\n" << render.text;
            result.interfaces.emplace_back(interface_name(sig->rule_name),
                                           interface_source(*sig, render.callbacks));
            factory << "    " << interface_name(sig->rule_name) << " " << getter_name(sig->rule_name)
                    << "(";
            for (std::size_t i = 0; i < sig->params.size(); ++i)
                factory << (i ? ", " : "") << sig->params[i].first << " " << sig->params[i].second;
            factory << ");\n";
        }
        factory << "}\n";
        result.interfaces.emplace_back("IBuilders", factory.str());

        // Lexer rules pass through untouched.
        antlr::RenderHooks plain;
        for (const auto& symbol : grammar.symbols()) {
            if (!lexical.count(symbol->name)) continue;
            grammar_out << "\n";
            if (symbol->productions.size() == 1) {
                bool top = symbol->productions[0]->body->kind != ExprKind::Alternative;
                grammar_out << symbol->name << " : "
                            << antlr::render_expr(*symbol->productions[0]->body, plain, top)
                            << " ;\n";
            } else {
                grammar_out << symbol->name << "\n";
                for (std::size_t i = 0; i < symbol->productions.size(); ++i) {
                    bool top = symbol->productions[i]->body->kind != ExprKind::Alternative;
                    grammar_out << "  " << (i == 0 ? ": " : "| ")
                                << antlr::render_expr(*symbol->productions[i]->body, plain, top)
                                << "\n";
                }
                grammar_out << "  ;\n";
            }
        }

        result.grammar_text = grammar_out.str();
    }
};

}  // namespace

BuildersResult generate_builders(const Grammar& grammar, const AnnotationStore& store,
                                 const AntlrGenConfig& config) {
    BuildersResult result;
    BuilderGenerator gen(grammar, store, config, result);
    gen.run();
    return result;
}

}  // namespace grammatic
