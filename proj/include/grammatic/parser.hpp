#pragma once

#include <string>
#include <string_view>

#include "grammatic/aspect.hpp"
#include "grammatic/metadata.hpp"
#include "grammatic/query.hpp"
#include "grammatic/unit.hpp"

namespace grammatic {

// Parses one grammar unit: rules, imports, template definitions.
// Both ':' and '-->' introduce productions; '||' separates them.
ParsedUnit parse_grammar(std::string_view text, const std::string& file);

// Parses an aspect file: query rules with inline and trailing metadata
// assignment blocks.
Aspect parse_aspect(std::string_view text, const std::string& file);

// Parses a standalone query pattern (no assignment blocks allowed).
QueryPattern parse_query(std::string_view text, const std::string& file = "<query>");

// Parses a single attribute value in the metadata concrete syntax.
AttributeValue parse_attribute_value(std::string_view text, const std::string& file = "<value>");

// Parses a 'name = value;' assignment list into an Annotation.
Annotation parse_annotation(std::string_view text, const std::string& file = "<annotation>");

}  // namespace grammatic
