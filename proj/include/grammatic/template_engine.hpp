#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "grammatic/unit.hpp"

namespace grammatic {

// A semantic template argument, coerced to its parameter's kind.
struct TemplateArg {
    ParamKind kind = ParamKind::Id;
    std::string name;                        // Id / Symbol
    ExprPtr expr;                            // Expression
    std::vector<ProductionPtr> productions;  // Productions

    static TemplateArg make_id(std::string name);
    static TemplateArg make_symbol(std::string name);
    static TemplateArg make_expr(ExprPtr expr);
    static TemplateArg make_productions(std::vector<ProductionPtr> productions);
};

// Coerces arguments as written at an instantiation site against the
// template signature (an identifier argument may serve as ID, Symbol or
// Expression; a '||' list only as Production*).
std::vector<TemplateArg> coerce_args(const TemplateDef& def,
                                     const std::vector<TemplateArgSyntax>& args,
                                     const SourceSpan& site);

// Substitutes every placeholder occurrence and returns the template body
// with fresh node ids throughout.
std::vector<SymbolPtr> instantiate(const TemplateDef& def, const std::vector<TemplateArg>& args);

// Maps a unit name to its parsed unit; importer_dir is the directory of
// the importing file.
using UnitLoader =
    std::function<std::shared_ptr<const ParsedUnit>(const std::string& name,
                                                    const std::string& importer_dir)>;

// Builds a caching loader that resolves 'name' to 'name.gr' relative to the
// importing file's directory, then to each include directory in order.
UnitLoader make_file_loader(std::vector<std::string> include_dirs);

// Flattens a unit graph into a single grammar: imports resolved, templates
// instantiated, colliding definitions merged when a template produced one
// side, and every symbol reference checked.
Grammar resolve(const ParsedUnit& root, const UnitLoader& loader);
Grammar resolve(const ParsedUnit& root);

}  // namespace grammatic
