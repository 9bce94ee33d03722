#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "grammatic/antlr_backend.hpp"
#include "grammatic/metadata.hpp"

namespace grammatic {

// One ANTLR rule signature declared in a 'builders' attribute:
//   Expression varSum(Scope scope);
struct BuilderSignature {
    std::string rule_name;
    std::string return_type;
    std::vector<std::pair<std::string, std::string>> params;  // (type, name)
};

struct CallEntry {
    std::string callee;
    std::vector<std::string> args;
};

// rule name of the enclosing symbol's signature -> call to make there.
using CallSpec = std::map<std::string, CallEntry>;

std::vector<BuilderSignature> parse_builders(const std::vector<SeqElement>& seq);

CallSpec parse_call(const AttributeValue& tuple);

struct BuildersResult {
    std::string grammar_text;
    // (interface name, Java source); the IBuilders factory comes last.
    std::vector<std::pair<std::string, std::string>> interfaces;
    std::vector<Diagnostic> warnings;
};

// Splits every 'builders'-annotated symbol into one ANTLR rule per declared
// signature with builder calls as the only semantic actions, and emits the
// builder interface sources.
BuildersResult generate_builders(const Grammar& grammar, const AnnotationStore& store,
                                 const AntlrGenConfig& config);

}  // namespace grammatic
