#include "grammatic/ast.hpp"

#include <atomic>

namespace grammatic {

namespace {
std::atomic<std::uint64_t> g_next_id{1};
}

NodeId next_node_id() { return NodeId{g_next_id.fetch_add(1, std::memory_order_relaxed)}; }

ExprPtr Expr::sequence(std::vector<ExprPtr> children, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::Sequence;
    e->children = std::move(children);
    e->span = std::move(span);
    return e;
}

ExprPtr Expr::empty(SourceSpan span) { return sequence({}, std::move(span)); }

ExprPtr Expr::alternative(std::vector<ExprPtr> children, SourceSpan span) {
    if (children.size() < 2) throw Error(span, "alternative requires at least two branches");
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::Alternative;
    e->children = std::move(children);
    e->span = std::move(span);
    return e;
}

ExprPtr Expr::iteration(ExprPtr child, IterKind kind, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::Iteration;
    e->children.push_back(std::move(child));
    e->iter = kind;
    e->span = std::move(span);
    return e;
}

ExprPtr Expr::symbol_ref(std::string name, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::SymbolRef;
    e->text = std::move(name);
    e->span = std::move(span);
    return e;
}

ExprPtr Expr::literal(std::string text, SourceSpan span) {
    if (text.empty()) throw Error(span, "empty string literal");
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::StringLiteral;
    e->text = std::move(text);
    e->span = std::move(span);
    return e;
}

ExprPtr Expr::char_class(std::vector<CharClassItem> items, SourceSpan span) {
    if (items.empty()) throw Error(span, "empty character class");
    for (const auto& item : items) {
        if (item.is_range && item.lo > item.hi)
            throw Error(span, "character range lower bound exceeds upper bound");
    }
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::CharClass;
    e->items = std::move(items);
    e->span = std::move(span);
    return e;
}

ExprPtr Expr::placeholder(std::string name, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->id = next_node_id();
    e->kind = ExprKind::Placeholder;
    e->text = std::move(name);
    e->span = std::move(span);
    return e;
}

ProductionPtr make_production(ExprPtr body, SourceSpan span) {
    if (!body) throw Error(span, "production requires a body");
    auto p = std::make_shared<Production>();
    p->id = next_node_id();
    p->body = std::move(body);
    p->span = std::move(span);
    return p;
}

SymbolPtr make_symbol(std::string name, std::vector<ProductionPtr> productions, SourceSpan span) {
    if (productions.empty()) throw Error(span, "symbol '" + name + "' has no productions");
    auto s = std::make_shared<Symbol>();
    s->id = next_node_id();
    s->name = std::move(name);
    s->productions = std::move(productions);
    s->span = std::move(span);
    return s;
}

Grammar::Grammar(std::string origin, std::vector<SymbolPtr> symbols)
    : id_(next_node_id()), origin_(std::move(origin)), symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        for (std::size_t j = i + 1; j < symbols_.size(); ++j) {
            if (symbols_[i]->name == symbols_[j]->name)
                throw Error(symbols_[j]->span, "duplicate symbol '" + symbols_[i]->name + "'");
        }
    }
}

const Symbol* Grammar::lookup(std::string_view name) const {
    for (const auto& s : symbols_)
        if (s->name == name) return s.get();
    return nullptr;
}

std::size_t Grammar::production_count() const {
    std::size_t n = 0;
    for (const auto& s : symbols_) n += s->productions.size();
    return n;
}

bool structural_equals(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprKind::Sequence:
        case ExprKind::Alternative: {
            if (a.children.size() != b.children.size()) return false;
            for (std::size_t i = 0; i < a.children.size(); ++i)
                if (!structural_equals(*a.children[i], *b.children[i])) return false;
            return true;
        }
        case ExprKind::Iteration:
            return a.iter == b.iter && structural_equals(*a.children[0], *b.children[0]);
        case ExprKind::SymbolRef:
        case ExprKind::StringLiteral:
        case ExprKind::Placeholder:
            return a.text == b.text;
        case ExprKind::CharClass:
            return a.items == b.items;
    }
    return false;
}

bool structural_equals(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    return structural_equals(*a, *b);
}

bool structural_equals(const Production& a, const Production& b) {
    return structural_equals(*a.body, *b.body);
}

bool structural_equals(const Symbol& a, const Symbol& b) {
    if (a.name != b.name || a.productions.size() != b.productions.size()) return false;
    for (std::size_t i = 0; i < a.productions.size(); ++i)
        if (!structural_equals(*a.productions[i], *b.productions[i])) return false;
    return true;
}

bool structural_equals(const Grammar& a, const Grammar& b) {
    if (a.symbols().size() != b.symbols().size()) return false;
    for (std::size_t i = 0; i < a.symbols().size(); ++i)
        if (!structural_equals(*a.symbols()[i], *b.symbols()[i])) return false;
    return true;
}

NodeKind node_kind(ExprKind kind) {
    switch (kind) {
        case ExprKind::Sequence: return NodeKind::Sequence;
        case ExprKind::Alternative: return NodeKind::Alternative;
        case ExprKind::Iteration: return NodeKind::Iteration;
        case ExprKind::SymbolRef: return NodeKind::SymbolRef;
        case ExprKind::StringLiteral: return NodeKind::StringLiteral;
        case ExprKind::CharClass: return NodeKind::CharClass;
        case ExprKind::Placeholder: return NodeKind::Placeholder;
    }
    return NodeKind::Sequence;
}

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Symbol: return "symbol";
        case NodeKind::Production: return "production";
        case NodeKind::Sequence: return "sequence";
        case NodeKind::Alternative: return "alternative";
        case NodeKind::Iteration: return "iteration";
        case NodeKind::SymbolRef: return "symbol-ref";
        case NodeKind::StringLiteral: return "string-literal";
        case NodeKind::CharClass: return "char-class";
        case NodeKind::Placeholder: return "placeholder";
    }
    return "?";
}

namespace {

void walk_expr(const Expr& e, NodeId parent, std::vector<WalkEntry>& out) {
    out.push_back({e.id, node_kind(e.kind), parent});
    for (const auto& c : e.children) walk_expr(*c, e.id, out);
}

void walk_into(const Symbol& s, std::vector<WalkEntry>& out) {
    out.push_back({s.id, NodeKind::Symbol, NodeId{}});
    for (const auto& p : s.productions) {
        out.push_back({p->id, NodeKind::Production, s.id});
        walk_expr(*p->body, p->id, out);
    }
}

}  // namespace

std::vector<WalkEntry> walk(const Grammar& grammar) {
    std::vector<WalkEntry> out;
    for (const auto& s : grammar.symbols()) walk_into(*s, out);
    return out;
}

std::vector<WalkEntry> walk(const Symbol& symbol) {
    std::vector<WalkEntry> out;
    walk_into(symbol, out);
    return out;
}

}  // namespace grammatic
