#include "grammatic/aspect.hpp"

#include <map>

namespace grammatic {

namespace {

void collect_occurrences(const ExprPtr& e, const std::string& name, std::vector<ExprPtr>& out) {
    if (e->kind == ExprKind::SymbolRef && e->text == name) out.push_back(e);
    for (const auto& c : e->children) collect_occurrences(c, name, out);
}

struct PendingAttach {
    NodeId node;
    NodeKind kind = NodeKind::Symbol;
    SourceSpan node_span;
};

// Resolves one assignment target against one match; an assignment may fan
// out to several nodes (occurrence targets).
std::vector<PendingAttach> resolve_target(const Assignment& a, const MatchResult& m) {
    std::vector<PendingAttach> out;
    switch (a.target.kind) {
        case AssignmentTarget::Kind::SymbolPos:
            out.push_back({m.symbol->id, NodeKind::Symbol, m.symbol->span});
            break;
        case AssignmentTarget::Kind::ProductionPos: {
            const auto& prod = m.productions.at(a.target.index);
            out.push_back({prod->id, NodeKind::Production, prod->span});
            break;
        }
        case AssignmentTarget::Kind::SlotPos: {
            const auto& expr = m.slots.at(a.target.index);
            out.push_back({expr->id, node_kind(expr->kind), expr->span});
            break;
        }
        case AssignmentTarget::Kind::Occurrence: {
            // '#name.attr': name may be a query variable or a symbol name;
            // either way it denotes symbol-reference occurrences inside the
            // matched production.
            std::string name = a.target.name;
            auto it = m.vars.find(name);
            if (it != m.vars.end()) {
                if (it->second.kind == BoundTarget::Kind::Symbol) {
                    name = it->second.symbol->name;
                } else if (it->second.kind == BoundTarget::Kind::Expression &&
                           it->second.expr->kind == ExprKind::SymbolRef) {
                    name = it->second.expr->text;
                } else {
                    throw Error(a.span, "'#" + a.target.name +
                                            "' does not denote a symbol in this match");
                }
            }
            const auto& prod = m.productions.at(a.target.index);
            std::vector<ExprPtr> occurrences;
            collect_occurrences(prod->body, name, occurrences);
            if (occurrences.empty())
                throw Error(a.span, "no occurrences of '" + name + "' in the matched production");
            for (const auto& occ : occurrences)
                out.push_back({occ->id, node_kind(occ->kind), occ->span});
            break;
        }
        case AssignmentTarget::Kind::VarRef: {
            auto it = m.vars.find(a.target.name);
            if (it == m.vars.end())
                throw Error(a.span, "unbound variable '" + a.target.name + "'");
            const BoundTarget& t = it->second;
            NodeKind kind = t.kind == BoundTarget::Kind::Symbol       ? NodeKind::Symbol
                            : t.kind == BoundTarget::Kind::Production ? NodeKind::Production
                                                                      : node_kind(t.expr->kind);
            out.push_back({t.id(), kind, t.span()});
            break;
        }
    }
    return out;
}

}  // namespace

ApplyReport apply_aspect(const Grammar& grammar, const Aspect& aspect, AnnotationStore& store) {
    ApplyReport report;
    for (std::size_t rule_index = 0; rule_index < aspect.rules.size(); ++rule_index) {
        const AspectRule& rule = aspect.rules[rule_index];
        const std::string origin =
            aspect.origin + ":rule " + std::to_string(rule_index + 1);

        std::vector<MatchResult> matches = match_details(grammar, store, rule.pattern);

        RuleOutcome outcome;
        outcome.rule_index = rule_index + 1;
        outcome.span = rule.span;
        outcome.matches = matches.size();

        if (matches.empty()) {
            report.warnings.push_back(
                Diagnostic{rule.span, Severity::Warning,
                           "rule " + std::to_string(rule_index + 1) + " matched nothing"});
        }

        // One rule hitting the same (node, attribute) with an equal value
        // through several bindings is deduplicated; unequal values conflict.
        std::map<std::pair<NodeId, std::string>, const AttributeValue*> this_rule;

        for (const MatchResult& m : matches) {
            for (const Assignment& a : rule.assignments) {
                for (const PendingAttach& target : resolve_target(a, m)) {
                    auto key = std::make_pair(target.node, a.attr);
                    auto seen = this_rule.find(key);
                    if (seen != this_rule.end()) {
                        if (*seen->second == a.value) continue;
                        throw Error(a.span, "conflicting values for attribute '" + a.attr +
                                                "' on one node from rule " +
                                                std::to_string(rule_index + 1));
                    }
                    store.attach(target.node, a.attr, a.value, origin, a.span);
                    this_rule.emplace(key, &a.value);
                    report.attachments.push_back(
                        AttachmentRecord{target.node, target.kind, target.node_span, a.attr, a.value});
                    ++outcome.attachments;
                }
            }
        }
        report.rules.push_back(outcome);
    }
    return report;
}

}  // namespace grammatic
