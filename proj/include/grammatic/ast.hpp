#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "grammatic/source.hpp"

namespace grammatic {

// Opaque node identity. Ids are allocated from a process-wide counter, so a
// node id is never reused; 0 is reserved for "no node" (e.g. a symbol's
// parent in walk()).
struct NodeId {
    std::uint64_t value = 0;

    bool valid() const { return value != 0; }
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

NodeId next_node_id();

enum class ExprKind {
    Sequence,     // ordered children; zero children denotes epsilon
    Alternative,  // >= 2 children
    Iteration,    // one child, kind star/plus/option
    SymbolRef,    // name
    StringLiteral,
    CharClass,
    Placeholder,  // template parameter occurrence; never survives resolution
};

enum class IterKind { Star, Plus, Option };

struct CharClassItem {
    char lo = 0;
    char hi = 0;
    bool is_range = false;  // written 'a'--'z' rather than 'a'

    friend bool operator==(const CharClassItem&, const CharClassItem&) = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    NodeId id;
    ExprKind kind = ExprKind::Sequence;
    SourceSpan span;

    std::vector<ExprPtr> children;        // Sequence, Alternative, Iteration (1)
    IterKind iter = IterKind::Star;       // Iteration only
    std::string text;                     // SymbolRef/Placeholder name, StringLiteral text (unescaped)
    std::vector<CharClassItem> items;     // CharClass only

    static ExprPtr sequence(std::vector<ExprPtr> children, SourceSpan span = {});
    static ExprPtr empty(SourceSpan span = {});
    static ExprPtr alternative(std::vector<ExprPtr> children, SourceSpan span = {});
    static ExprPtr iteration(ExprPtr child, IterKind kind, SourceSpan span = {});
    static ExprPtr symbol_ref(std::string name, SourceSpan span = {});
    static ExprPtr literal(std::string text, SourceSpan span = {});
    static ExprPtr char_class(std::vector<CharClassItem> items, SourceSpan span = {});
    static ExprPtr placeholder(std::string name, SourceSpan span = {});
};

struct Production {
    NodeId id;
    ExprPtr body;
    SourceSpan span;
};
using ProductionPtr = std::shared_ptr<const Production>;

ProductionPtr make_production(ExprPtr body, SourceSpan span = {});

struct Symbol {
    NodeId id;
    std::string name;
    std::vector<ProductionPtr> productions;  // non-empty, order preserved
    SourceSpan span;
};
using SymbolPtr = std::shared_ptr<const Symbol>;

SymbolPtr make_symbol(std::string name, std::vector<ProductionPtr> productions, SourceSpan span = {});

// Immutable, fully resolved grammar. Symbol names are unique; the grammar
// itself carries a NodeId so grammar-level metadata can be attached to it.
class Grammar {
public:
    Grammar(std::string origin, std::vector<SymbolPtr> symbols);

    NodeId id() const { return id_; }
    const std::string& origin() const { return origin_; }
    const std::vector<SymbolPtr>& symbols() const { return symbols_; }

    const Symbol* lookup(std::string_view name) const;

    std::size_t production_count() const;

private:
    NodeId id_;
    std::string origin_;
    std::vector<SymbolPtr> symbols_;
};

// Structural equality ignores NodeIds and spans; child order, literal text
// and char-class contents are compared exactly.
bool structural_equals(const Expr& a, const Expr& b);
bool structural_equals(const ExprPtr& a, const ExprPtr& b);
bool structural_equals(const Production& a, const Production& b);
bool structural_equals(const Symbol& a, const Symbol& b);
bool structural_equals(const Grammar& a, const Grammar& b);

enum class NodeKind {
    Symbol,
    Production,
    Sequence,
    Alternative,
    Iteration,
    SymbolRef,
    StringLiteral,
    CharClass,
    Placeholder,
};

NodeKind node_kind(ExprKind kind);
const char* node_kind_name(NodeKind kind);

struct WalkEntry {
    NodeId id;
    NodeKind kind;
    NodeId parent;  // invalid for symbols
};

// Pre-order traversal: symbols in declaration order, each followed by its
// productions and their expression trees; parent precedes child.
std::vector<WalkEntry> walk(const Grammar& grammar);
std::vector<WalkEntry> walk(const Symbol& symbol);

}  // namespace grammatic
