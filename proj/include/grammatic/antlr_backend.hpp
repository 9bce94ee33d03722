#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "grammatic/metadata.hpp"

namespace grammatic {

struct AntlrGenConfig {
    // Fallbacks; the reserved grammar-level attributes 'antlrName' and
    // 'antlrHeader' take precedence when attached.
    std::string grammar_name;
    std::string header_action;
    // Label scheme for symbol occurrences; only "name-index" is defined
    // (mult -> mult0, mult1, ... left to right per production).
    std::string occurrence_naming = "name-index";
};

struct GenResult {
    std::string text;
    std::vector<Diagnostic> warnings;
};

// Names of symbols whose productions consist purely of lexical material
// (string literals, char classes and combinators over those, plus
// references to other lexical symbols). These become lexer rules.
std::set<std::string> lexical_symbols(const Grammar& grammar);

// Textual '##result' / '#name' substitution; scope maps every referenced
// name to its occurrence label.
std::string substitute_action(const std::string& body,
                              const std::map<std::string, std::string>& scope,
                              const std::string& result_var);

// Emits ANTLR 3 grammar text with returns/params clauses, syntactic
// predicates and embedded semantic actions taken from the store.
GenResult generate_antlr(const Grammar& grammar, const AnnotationStore& store,
                         const AntlrGenConfig& config);

}  // namespace grammatic
