#pragma once

#include <string>
#include <vector>

#include "grammatic/metadata.hpp"
#include "grammatic/query.hpp"

namespace grammatic {

struct AssignmentTarget {
    enum class Kind {
        SymbolPos,      // inline block after the symbol part
        ProductionPos,  // inline block after production pattern [index]
        SlotPos,        // inline block after an annotated subexpression [slot]
        Occurrence,     // '#name.attr' inside production pattern [index]'s block
        VarRef,         // trailing block entry 'name { ... }'
    };
    Kind kind = Kind::SymbolPos;
    int index = 0;     // production index or slot id
    std::string name;  // occurrence / variable name
};

struct Assignment {
    AssignmentTarget target;
    std::string attr;
    AttributeValue value;  // None for presence-only
    SourceSpan span;
};

struct AspectRule {
    QueryPattern pattern;
    std::vector<Assignment> assignments;
    SourceSpan span;
};

struct Aspect {
    std::string origin;
    std::vector<AspectRule> rules;
};

struct RuleOutcome {
    std::size_t rule_index = 0;  // 1-based, file order
    SourceSpan span;
    std::size_t matches = 0;
    std::size_t attachments = 0;
};

struct AttachmentRecord {
    NodeId node;
    NodeKind node_kind = NodeKind::Symbol;
    SourceSpan node_span;
    std::string attr;
    AttributeValue value;
};

struct ApplyReport {
    std::vector<RuleOutcome> rules;
    std::vector<AttachmentRecord> attachments;
    std::vector<Diagnostic> warnings;
};

// Runs every rule's query and attaches its assignments to the bound nodes.
// Duplicate attributes (within this aspect or against earlier ones) are
// errors; rules matching nothing produce a warning in the report.
ApplyReport apply_aspect(const Grammar& grammar, const Aspect& aspect, AnnotationStore& store);

}  // namespace grammatic
