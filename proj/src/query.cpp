#include "grammatic/query.hpp"

#include <algorithm>
#include <functional>

namespace grammatic {

NodeId BoundTarget::id() const {
    switch (kind) {
        case Kind::Symbol: return symbol ? symbol->id : NodeId{};
        case Kind::Production: return production ? production->id : NodeId{};
        case Kind::Expression: return expr ? expr->id : NodeId{};
    }
    return NodeId{};
}

SourceSpan BoundTarget::span() const {
    switch (kind) {
        case Kind::Symbol: return symbol ? symbol->span : SourceSpan{};
        case Kind::Production: return production ? production->span : SourceSpan{};
        case Kind::Expression: return expr ? expr->span : SourceSpan{};
    }
    return SourceSpan{};
}

namespace {

bool is_atomic(const Expr& e) {
    return e.kind == ExprKind::SymbolRef || e.kind == ExprKind::StringLiteral ||
           e.kind == ExprKind::CharClass;
}

// A repeated variable occurrence matches a node when both denote the same
// thing: symbol vs reference by name, atoms structurally.
bool compatible(const BoundTarget& bound, const Expr& e) {
    switch (bound.kind) {
        case BoundTarget::Kind::Symbol:
            return e.kind == ExprKind::SymbolRef && e.text == bound.symbol->name;
        case BoundTarget::Kind::Expression:
            return structural_equals(*bound.expr, e);
        case BoundTarget::Kind::Production:
            return false;
    }
    return false;
}

BoundTarget expr_target(ExprPtr e) {
    BoundTarget t;
    t.kind = BoundTarget::Kind::Expression;
    t.expr = std::move(e);
    return t;
}

// Solutions accumulate into MatchResult snapshots; matching is pure
// backtracking over (pattern, expression) pairs, emitting every solution.
struct ExprMatcher {
    std::vector<MatchResult> solutions;

    void match_one(const PatternExpr& p, const ExprPtr& e, MatchResult state,
                   const std::function<void(MatchResult)>& emit) {
        switch (p.kind) {
            case PatKind::Wildcard:
                emit(std::move(state));
                return;
            case PatKind::Var: {
                if (!is_atomic(*e)) return;
                auto it = state.vars.find(p.name);
                if (it != state.vars.end()) {
                    if (compatible(it->second, *e)) {
                        record_slot(p, e, state);
                        emit(std::move(state));
                    }
                    return;
                }
                state.vars.emplace(p.name, expr_target(e));
                record_slot(p, e, state);
                emit(std::move(state));
                return;
            }
            case PatKind::Binder: {
                auto it = state.vars.find(p.name);
                if (it != state.vars.end()) return;  // binder names are introduced once
                match_one(*p.children[0], e, std::move(state),
                          [&](MatchResult next) {
                              next.vars.emplace(p.name, expr_target(e));
                              record_slot(p, e, next);
                              emit(std::move(next));
                          });
                return;
            }
            case PatKind::SymbolRef:
                if (e->kind == ExprKind::SymbolRef && e->text == p.name) {
                    record_slot(p, e, state);
                    emit(std::move(state));
                }
                return;
            case PatKind::StringLiteral:
                if (e->kind == ExprKind::StringLiteral && e->text == p.name) {
                    record_slot(p, e, state);
                    emit(std::move(state));
                }
                return;
            case PatKind::CharClass:
                if (e->kind == ExprKind::CharClass && e->items == p.items) {
                    record_slot(p, e, state);
                    emit(std::move(state));
                }
                return;
            case PatKind::Iteration:
                if (e->kind != ExprKind::Iteration || e->iter != p.iter) return;
                match_one(*p.children[0], e->children[0], std::move(state),
                          [&](MatchResult next) {
                              record_slot(p, e, next);
                              emit(std::move(next));
                          });
                return;
            case PatKind::Alternative: {
                if (e->kind != ExprKind::Alternative || e->children.size() != p.children.size())
                    return;
                match_children(p, e, 0, std::move(state), emit);
                return;
            }
            case PatKind::Sequence: {
                std::vector<ExprPtr> items;
                if (e->kind == ExprKind::Sequence) items = e->children;
                else items.push_back(e);
                match_seq(p, items, 0, 0, std::move(state),
                          [&](MatchResult next) {
                              record_slot(p, e, next);
                              emit(std::move(next));
                          });
                return;
            }
        }
    }

    static void record_slot(const PatternExpr& p, const ExprPtr& e, MatchResult& state) {
        if (p.slot >= 0) state.slots[p.slot] = e;
    }

    void match_children(const PatternExpr& p, const ExprPtr& e, std::size_t i, MatchResult state,
                        const std::function<void(MatchResult)>& emit) {
        if (i == p.children.size()) {
            record_slot(p, e, state);
            emit(std::move(state));
            return;
        }
        match_one(*p.children[i], e->children[i], std::move(state), [&](MatchResult next) {
            match_children(p, e, i + 1, std::move(next), emit);
        });
    }

    // Sequences: a wildcard child absorbs any run (possibly empty) of
    // consecutive items; every split is explored.
    void match_seq(const PatternExpr& p, const std::vector<ExprPtr>& items, std::size_t pi,
                   std::size_t ei, MatchResult state,
                   const std::function<void(MatchResult)>& emit) {
        if (pi == p.children.size()) {
            if (ei == items.size()) emit(std::move(state));
            return;
        }
        const PatternExpr& child = *p.children[pi];
        if (child.kind == PatKind::Wildcard) {
            for (std::size_t k = ei; k <= items.size(); ++k)
                match_seq(p, items, pi + 1, k, state, emit);
            return;
        }
        if (ei == items.size()) return;
        match_one(child, items[ei], std::move(state), [&](MatchResult next) {
            match_seq(p, items, pi + 1, ei + 1, std::move(next), emit);
        });
    }
};

bool binding_equal(const MatchResult& a, const MatchResult& b) {
    if (a.vars.size() != b.vars.size()) return false;
    auto ia = a.vars.begin();
    auto ib = b.vars.begin();
    for (; ia != a.vars.end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.id() != ib->second.id()) return false;
    }
    if (a.slots.size() != b.slots.size()) return false;
    auto sa = a.slots.begin();
    auto sb = b.slots.begin();
    for (; sa != a.slots.end(); ++sa, ++sb) {
        if (sa->first != sb->first || sa->second->id != sb->second->id) return false;
    }
    if (a.productions.size() != b.productions.size()) return false;
    for (std::size_t i = 0; i < a.productions.size(); ++i)
        if (a.productions[i]->id != b.productions[i]->id) return false;
    return true;
}

void push_deduped(std::vector<MatchResult>& out, MatchResult result) {
    for (const auto& existing : out)
        if (existing.symbol == result.symbol && binding_equal(existing, result)) return;
    out.push_back(std::move(result));
}

// Matches the production patterns of a query against one symbol. A single
// production pattern is tried against each production independently; a list
// of n >= 2 patterns must cover the symbol's n productions positionally.
void match_productions(const QueryPattern& pattern, const SymbolPtr& symbol, MatchResult base,
                       std::vector<MatchResult>& out) {
    ExprMatcher matcher;
    if (pattern.productions.empty()) {
        push_deduped(out, std::move(base));
        return;
    }
    auto bind_production = [](MatchResult state, const ProductionPattern& pp,
                              const ProductionPtr& prod) {
        state.productions.push_back(prod);
        if (pp.has_binder && !pp.binder_name.empty()) {
            BoundTarget t;
            t.kind = BoundTarget::Kind::Production;
            t.production = prod;
            state.vars.emplace(pp.binder_name, std::move(t));
        }
        return state;
    };

    if (pattern.productions.size() == 1) {
        const ProductionPattern& pp = pattern.productions[0];
        for (const auto& prod : symbol->productions) {
            matcher.match_one(*pp.expr, prod->body, bind_production(base, pp, prod),
                              [&](MatchResult r) { push_deduped(out, std::move(r)); });
        }
        return;
    }

    if (pattern.productions.size() != symbol->productions.size()) return;

    std::vector<MatchResult> states{std::move(base)};
    for (std::size_t i = 0; i < pattern.productions.size(); ++i) {
        const ProductionPattern& pp = pattern.productions[i];
        const ProductionPtr& prod = symbol->productions[i];
        std::vector<MatchResult> next;
        for (const auto& state : states) {
            matcher.match_one(*pp.expr, prod->body, bind_production(state, pp, prod),
                              [&](MatchResult r) { next.push_back(std::move(r)); });
        }
        states = std::move(next);
        if (states.empty()) return;
    }
    for (auto& state : states) push_deduped(out, std::move(state));
}

}  // namespace

std::vector<MatchResult> match_details(const Grammar& grammar, const AnnotationStore& store,
                                       const QueryPattern& pattern) {
    std::vector<MatchResult> out;
    for (const auto& symbol : grammar.symbols()) {
        if (pattern.head == QueryHead::Literal && symbol->name != pattern.head_name) continue;

        bool conditions_ok = true;
        for (const auto& cond : pattern.conditions) {
            if (!check_condition(store.lookup(symbol->id, cond.attr), cond)) {
                conditions_ok = false;
                break;
            }
        }
        if (!conditions_ok) continue;

        MatchResult base;
        base.symbol = symbol;
        if (pattern.head == QueryHead::Var) {
            BoundTarget t;
            t.kind = BoundTarget::Kind::Symbol;
            t.symbol = symbol;
            base.vars.emplace(pattern.head_name, std::move(t));
        }
        match_productions(pattern, symbol, std::move(base), out);
    }
    return out;
}

std::vector<Binding> match(const Grammar& grammar, const AnnotationStore& store,
                           const QueryPattern& pattern) {
    std::vector<Binding> out;
    for (auto& result : match_details(grammar, store, pattern)) out.push_back(std::move(result.vars));
    return out;
}

std::vector<Binding> match_expr(const PatternPtr& pattern, const ExprPtr& expr) {
    ExprMatcher matcher;
    std::vector<MatchResult> results;
    matcher.match_one(*pattern, expr, MatchResult{},
                      [&](MatchResult r) { push_deduped(results, std::move(r)); });
    std::vector<Binding> out;
    for (auto& r : results) out.push_back(std::move(r.vars));
    return out;
}

}  // namespace grammatic
