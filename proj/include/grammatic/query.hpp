#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "grammatic/ast.hpp"
#include "grammatic/metadata.hpp"

namespace grammatic {

enum class PatKind {
    Sequence,
    Alternative,
    Iteration,
    SymbolRef,      // literal reference match
    StringLiteral,
    CharClass,
    Var,            // #name, matches one atomic expression node
    Wildcard,       // .., matches a run of sequence elements / any node
    Binder,         // $name:(...), binds the matched subexpression
};

struct PatternExpr;
using PatternPtr = std::shared_ptr<const PatternExpr>;

struct PatternExpr {
    PatKind kind = PatKind::Wildcard;
    SourceSpan span;

    std::vector<PatternPtr> children;   // Sequence/Alternative; Iteration and Binder have 1
    IterKind iter = IterKind::Star;
    std::string name;                   // SymbolRef/Var/Binder name, StringLiteral text
    std::vector<CharClassItem> items;   // CharClass
    int slot = -1;                      // inline annotation slot, -1 if none
};

struct ProductionPattern {
    bool has_binder = false;
    std::string binder_name;  // empty for the anonymous '$:' binder
    PatternPtr expr;
    SourceSpan span;
};

enum class QueryHead { Literal, Var, Any };

struct QueryPattern {
    QueryHead head = QueryHead::Any;
    std::string head_name;  // literal symbol name or variable name
    std::vector<AttributeCondition> conditions;
    std::vector<ProductionPattern> productions;
    SourceSpan span;

    // All variable names introduced by the pattern (head var, production
    // binders, expression vars, subexpression binders).
    std::vector<std::string> variable_names() const;
};

struct BoundTarget {
    enum class Kind { Symbol, Production, Expression };
    Kind kind = Kind::Symbol;
    SymbolPtr symbol;
    ProductionPtr production;
    ExprPtr expr;

    NodeId id() const;
    SourceSpan span() const;
};

using Binding = std::map<std::string, BoundTarget>;

// One successful match with everything the aspect engine needs: which
// productions matched each production pattern and which expression nodes
// matched annotated pattern positions.
struct MatchResult {
    SymbolPtr symbol;
    Binding vars;
    std::vector<ProductionPtr> productions;  // per production pattern
    std::map<int, ExprPtr> slots;
};

std::vector<MatchResult> match_details(const Grammar& grammar, const AnnotationStore& store,
                                       const QueryPattern& pattern);

std::vector<Binding> match(const Grammar& grammar, const AnnotationStore& store,
                           const QueryPattern& pattern);

// Structural match of one expression pattern against one expression tree.
std::vector<Binding> match_expr(const PatternPtr& pattern, const ExprPtr& expr);

}  // namespace grammatic
