#pragma once

#include <string>

#include "grammatic/metadata.hpp"
#include "grammatic/unit.hpp"

namespace grammatic {

// Canonical forms: ':' as the rule separator, one rule per line, '||'-
// separated productions each on its own line when a symbol has more than
// one production. print_grammar output always re-parses to a structurally
// equal unit.
std::string print_grammar(const ParsedUnit& unit);
std::string print_grammar(const Grammar& grammar);

std::string print_expr(const Expr& expr);

std::string print_attribute_value(const AttributeValue& value);
std::string print_annotation(const Annotation& annotation);

// Escapes \r \n \t \\ and the quote character.
std::string escape_text(std::string_view text, char quote = '\'');

}  // namespace grammatic
