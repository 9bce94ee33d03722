#pragma once

#include <memory>
#include <string>
#include <vector>

#include "grammatic/ast.hpp"

namespace grammatic {

enum class TemplateResultKind { Symbol, Expression, Production };
enum class ParamKind { Id, Expression, Productions, Symbol };  // Productions = Production*

const char* param_kind_name(ParamKind kind);

struct TemplateParam {
    ParamKind kind = ParamKind::Id;
    std::string name;
    SourceSpan span;
};

// One rule of a template body; the name may itself be a placeholder.
struct TemplateRule {
    std::string name;
    bool name_is_placeholder = false;
    std::vector<ProductionPtr> productions;
    SourceSpan span;
};

struct TemplateDef {
    std::string name;
    TemplateResultKind result_kind = TemplateResultKind::Symbol;
    std::vector<TemplateParam> params;
    std::vector<TemplateRule> body;
    SourceSpan span;
};
using TemplateDefPtr = std::shared_ptr<const TemplateDef>;

// An import argument as written, before the template signature is known:
// a list of one or more productions.
struct TemplateArgSyntax {
    std::vector<ProductionPtr> productions;
    SourceSpan span;
};

struct ImportDecl {
    std::string target;  // unit name or template name
    bool is_instantiation = false;
    std::vector<TemplateArgSyntax> args;
    SourceSpan span;
};

struct ParsedUnit {
    std::string file;
    std::vector<ImportDecl> imports;
    std::vector<TemplateDefPtr> templates;
    std::vector<SymbolPtr> rules;  // unresolved references allowed

    std::size_t production_count() const;
};

bool structural_equals(const ParsedUnit& a, const ParsedUnit& b);
bool structural_equals(const TemplateDef& a, const TemplateDef& b);
bool structural_equals(const ImportDecl& a, const ImportDecl& b);

}  // namespace grammatic
