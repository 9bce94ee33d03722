#include "grammatic/template_engine.hpp"

#include <algorithm>
#include <filesystem>
#include <mutex>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "grammatic/parser.hpp"

namespace grammatic {

TemplateArg TemplateArg::make_id(std::string name) {
    TemplateArg a;
    a.kind = ParamKind::Id;
    a.name = std::move(name);
    return a;
}

TemplateArg TemplateArg::make_symbol(std::string name) {
    TemplateArg a;
    a.kind = ParamKind::Symbol;
    a.name = std::move(name);
    return a;
}

TemplateArg TemplateArg::make_expr(ExprPtr expr) {
    TemplateArg a;
    a.kind = ParamKind::Expression;
    a.expr = std::move(expr);
    return a;
}

TemplateArg TemplateArg::make_productions(std::vector<ProductionPtr> productions) {
    TemplateArg a;
    a.kind = ParamKind::Productions;
    a.productions = std::move(productions);
    return a;
}

std::vector<TemplateArg> coerce_args(const TemplateDef& def,
                                     const std::vector<TemplateArgSyntax>& args,
                                     const SourceSpan& site) {
    if (args.size() != def.params.size()) {
        throw Error(site, "template '" + def.name + "' expects " +
                              std::to_string(def.params.size()) + " argument(s), got " +
                              std::to_string(args.size()));
    }
    std::vector<TemplateArg> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const TemplateParam& param = def.params[i];
        const TemplateArgSyntax& arg = args[i];
        auto single_expr = [&]() -> ExprPtr {
            if (arg.productions.size() != 1)
                throw Error(arg.span, "argument " + std::to_string(i + 1) + " of '" + def.name +
                                          "' must be a single " + param_kind_name(param.kind));
            return arg.productions[0]->body;
        };
        switch (param.kind) {
            case ParamKind::Id:
            case ParamKind::Symbol: {
                ExprPtr e = single_expr();
                if (e->kind != ExprKind::SymbolRef)
                    throw Error(arg.span, "argument " + std::to_string(i + 1) + " of '" + def.name +
                                              "' must be an identifier (parameter kind " +
                                              param_kind_name(param.kind) + ")");
                out.push_back(param.kind == ParamKind::Id ? TemplateArg::make_id(e->text)
                                                          : TemplateArg::make_symbol(e->text));
                break;
            }
            case ParamKind::Expression:
                out.push_back(TemplateArg::make_expr(single_expr()));
                break;
            case ParamKind::Productions:
                out.push_back(TemplateArg::make_productions(arg.productions));
                break;
        }
    }
    return out;
}

namespace {

ExprPtr clone_subst(const Expr& e, const std::map<std::string, const TemplateArg*>& by_name);

ExprPtr clone_fresh(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Sequence:
        case ExprKind::Alternative: {
            std::vector<ExprPtr> children;
            children.reserve(e.children.size());
            for (const auto& c : e.children) children.push_back(clone_fresh(*c));
            return e.kind == ExprKind::Sequence ? Expr::sequence(std::move(children), e.span)
                                                : Expr::alternative(std::move(children), e.span);
        }
        case ExprKind::Iteration:
            return Expr::iteration(clone_fresh(*e.children[0]), e.iter, e.span);
        case ExprKind::SymbolRef:
            return Expr::symbol_ref(e.text, e.span);
        case ExprKind::StringLiteral:
            return Expr::literal(e.text, e.span);
        case ExprKind::CharClass:
            return Expr::char_class(e.items, e.span);
        case ExprKind::Placeholder:
            return Expr::placeholder(e.text, e.span);
    }
    throw Error(e.span, "unreachable expression kind");
}

const TemplateArg& arg_for(const std::map<std::string, const TemplateArg*>& by_name,
                           const Expr& placeholder) {
    auto it = by_name.find(placeholder.text);
    if (it == by_name.end())
        throw Error(placeholder.span, "undeclared placeholder '$" + placeholder.text + "'");
    return *it->second;
}

ExprPtr clone_subst(const Expr& e, const std::map<std::string, const TemplateArg*>& by_name) {
    if (e.kind == ExprKind::Placeholder) {
        const TemplateArg& arg = arg_for(by_name, e);
        switch (arg.kind) {
            case ParamKind::Id:
            case ParamKind::Symbol:
                return Expr::symbol_ref(arg.name, e.span);
            case ParamKind::Expression:
                return clone_fresh(*arg.expr);
            case ParamKind::Productions:
                throw Error(e.span, "'Production*' placeholder '$" + e.text +
                                        "' may only stand for a whole production");
        }
    }
    switch (e.kind) {
        case ExprKind::Sequence:
        case ExprKind::Alternative: {
            std::vector<ExprPtr> children;
            children.reserve(e.children.size());
            for (const auto& c : e.children) children.push_back(clone_subst(*c, by_name));
            return e.kind == ExprKind::Sequence ? Expr::sequence(std::move(children), e.span)
                                                : Expr::alternative(std::move(children), e.span);
        }
        case ExprKind::Iteration:
            return Expr::iteration(clone_subst(*e.children[0], by_name), e.iter, e.span);
        default:
            return clone_fresh(e);
    }
}

}  // namespace

std::vector<SymbolPtr> instantiate(const TemplateDef& def, const std::vector<TemplateArg>& args) {
    if (args.size() != def.params.size())
        throw Error(def.span, "template '" + def.name + "' expects " +
                                  std::to_string(def.params.size()) + " argument(s), got " +
                                  std::to_string(args.size()));
    std::map<std::string, const TemplateArg*> by_name;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i].kind != def.params[i].kind)
            throw Error(def.span, "argument " + std::to_string(i + 1) + " of '" + def.name +
                                      "' has kind " + param_kind_name(args[i].kind) +
                                      ", parameter '" + def.params[i].name + "' expects " +
                                      param_kind_name(def.params[i].kind));
        by_name[def.params[i].name] = &args[i];
    }

    std::vector<SymbolPtr> out;
    for (const TemplateRule& rule : def.body) {
        std::string name = rule.name;
        if (rule.name_is_placeholder) {
            auto it = by_name.find(rule.name);
            if (it == by_name.end() || it->second->kind != ParamKind::Id)
                throw Error(rule.span, "rule name placeholder '$" + rule.name +
                                           "' must refer to an ID parameter");
            name = it->second->name;
        }
        std::vector<ProductionPtr> productions;
        for (const auto& prod : rule.productions) {
            if (prod->body->kind == ExprKind::Placeholder &&
                arg_for(by_name, *prod->body).kind == ParamKind::Productions) {
                for (const auto& p : arg_for(by_name, *prod->body).productions)
                    productions.push_back(make_production(clone_fresh(*p->body), p->span));
            } else {
                productions.push_back(make_production(clone_subst(*prod->body, by_name), prod->span));
            }
        }
        out.push_back(make_symbol(std::move(name), std::move(productions), rule.span));
    }
    return out;
}

UnitLoader make_file_loader(std::vector<std::string> include_dirs) {
    struct Cache {
        std::mutex mutex;
        std::map<std::string, std::shared_ptr<const ParsedUnit>> units;
    };
    auto cache = std::make_shared<Cache>();
    return [include_dirs = std::move(include_dirs), cache](
               const std::string& name, const std::string& importer_dir)
               -> std::shared_ptr<const ParsedUnit> {
        namespace fs = std::filesystem;
        std::vector<std::string> candidates;
        if (!importer_dir.empty()) candidates.push_back((fs::path(importer_dir) / (name + ".gr")).string());
        else candidates.push_back(name + ".gr");
        for (const auto& dir : include_dirs)
            candidates.push_back((fs::path(dir) / (name + ".gr")).string());
        for (const auto& path : candidates) {
            std::error_code ec;
            if (!fs::exists(path, ec)) continue;
            std::string key = fs::weakly_canonical(path, ec).string();
            if (key.empty()) key = path;
            {
                std::lock_guard<std::mutex> lock(cache->mutex);
                auto it = cache->units.find(key);
                if (it != cache->units.end()) return it->second;
            }
            std::ifstream in(path, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            auto unit = std::make_shared<ParsedUnit>(parse_grammar(buf.str(), path));
            std::lock_guard<std::mutex> lock(cache->mutex);
            auto [it, inserted] = cache->units.emplace(key, std::move(unit));
            return it->second;
        }
        return nullptr;
    };
}

namespace {

struct Resolver {
    explicit Resolver(const UnitLoader* l) : loader(l) {}

    const UnitLoader* loader;

    struct Entry {
        SymbolPtr symbol;
        bool from_template;
    };
    std::vector<Entry> entries;
    std::map<std::string, TemplateDefPtr> templates;
    std::set<std::string> visiting;  // cycle detection, keyed by unit file
    std::set<std::string> done;

    void process(const ParsedUnit& unit) {
        const std::string key = unit.file;
        if (visiting.count(key)) throw Error("import cycle through '" + key + "'");
        if (done.count(key)) return;
        visiting.insert(key);

        for (const auto& def : unit.templates) {
            auto [it, inserted] = templates.emplace(def->name, def);
            if (!inserted && it->second != def)
                throw Error(def->span, "template '" + def->name + "' defined more than once");
        }

        std::string dir = std::filesystem::path(unit.file).parent_path().string();
        for (const auto& import : unit.imports) {
            if (import.is_instantiation) {
                auto it = templates.find(import.target);
                if (it == templates.end())
                    throw Error(import.span, "unknown template '" + import.target + "'");
                const TemplateDef& def = *it->second;
                auto args = coerce_args(def, import.args, import.span);
                for (auto& sym : instantiate(def, args)) entries.push_back({std::move(sym), true});
            } else {
                if (!loader || !*loader)
                    throw Error(import.span, "cannot import unit '" + import.target +
                                                 "': no unit loader configured");
                auto imported = (*loader)(import.target, dir);
                if (!imported)
                    throw Error(import.span, "unit '" + import.target + "' not found");
                process(*imported);
            }
        }

        for (const auto& rule : unit.rules) entries.push_back({rule, false});

        visiting.erase(key);
        done.insert(key);
    }

    Grammar finish(const std::string& origin) {
        if (entries.empty()) throw Error("grammar '" + origin + "' defines no symbols");

        // Merge same-name definitions; only template-produced sides may merge.
        std::vector<std::string> order;
        std::map<std::string, std::vector<Entry>> by_name;
        for (auto& entry : entries) {
            auto it = by_name.find(entry.symbol->name);
            if (it == by_name.end()) {
                order.push_back(entry.symbol->name);
                by_name[entry.symbol->name].push_back(std::move(entry));
            } else {
                it->second.push_back(std::move(entry));
            }
        }

        std::vector<SymbolPtr> symbols;
        for (const auto& name : order) {
            auto& group = by_name[name];
            if (group.size() == 1) {
                symbols.push_back(group[0].symbol);
                continue;
            }
            bool any_template = std::any_of(group.begin(), group.end(),
                                            [](const Entry& e) { return e.from_template; });
            if (!any_template)
                throw Error(group[1].symbol->span,
                            "conflicting definitions of symbol '" + name + "'");
            std::vector<ProductionPtr> merged;
            for (const auto& e : group)
                merged.insert(merged.end(), e.symbol->productions.begin(),
                              e.symbol->productions.end());
            symbols.push_back(make_symbol(name, std::move(merged), group[0].symbol->span));
        }

        Grammar grammar(origin, std::move(symbols));

        std::set<std::string> defined;
        for (const auto& s : grammar.symbols()) defined.insert(s->name);
        std::set<std::string> unresolved;
        for (const auto& s : grammar.symbols())
            for (const auto& p : s->productions) collect_unresolved(*p->body, defined, unresolved);
        if (!unresolved.empty()) {
            std::string names;
            for (const auto& n : unresolved) names += (names.empty() ? "" : ", ") + n;
            throw Error("unresolved symbol references: " + names);
        }
        return grammar;
    }

    static void collect_unresolved(const Expr& e, const std::set<std::string>& defined,
                                   std::set<std::string>& out) {
        if (e.kind == ExprKind::SymbolRef && !defined.count(e.text)) out.insert(e.text);
        if (e.kind == ExprKind::Placeholder)
            throw Error(e.span, "placeholder '$" + e.text + "' survived resolution");
        for (const auto& c : e.children) collect_unresolved(*c, defined, out);
    }
};

}  // namespace

Grammar resolve(const ParsedUnit& root, const UnitLoader& loader) {
    Resolver resolver(&loader);
    resolver.process(root);
    return resolver.finish(root.file);
}

Grammar resolve(const ParsedUnit& root) {
    UnitLoader none;
    Resolver resolver(&none);
    resolver.process(root);
    return resolver.finish(root.file);
}

}  // namespace grammatic
