#pragma once

// Rendering helpers shared by the two ANTLR-targeting backends.

#include <functional>
#include <string>

#include "grammatic/ast.hpp"
#include "grammatic/metadata.hpp"

namespace grammatic::antlr {

struct RenderHooks {
    // Full replacement text for a symbol-reference occurrence (label,
    // arguments); empty function renders the plain name.
    std::function<std::string(const Expr&)> symbol_ref;
    // Text appended directly after a rendered node (semantic actions).
    std::function<std::string(const Expr&)> after_node;
};

// Renders one expression in ANTLR 3 concrete syntax. 'top' suppresses the
// parentheses an alternative body would otherwise need inside a sequence.
std::string render_expr(const Expr& e, const RenderHooks& hooks, bool top);

// ['a'--'z' '_'] -> 'a'..'z' | '_' (parenthesized when compound or forced).
std::string render_char_class(const Expr& e, bool force_parens);

std::string antlr_quote(const std::string& text);

// Resolves the grammar name / header action: reserved grammar-level
// attributes first, then the config fallback.
std::string grammar_name_for(const Grammar& grammar, const AnnotationStore& store,
                             const std::string& fallback);
std::string header_action_for(const Grammar& grammar, const AnnotationStore& store,
                              const std::string& fallback);

}  // namespace grammatic::antlr
