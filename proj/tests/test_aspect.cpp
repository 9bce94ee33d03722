#include <doctest.h>

#include "grammatic/aspect.hpp"
#include "grammatic/parser.hpp"
#include "grammatic/printer.hpp"
#include "grammatic/template_engine.hpp"
#include "support/fixtures.hpp"

using namespace grammatic;

namespace {

std::vector<ExprPtr> refs_to(const Grammar& g, const std::string& symbol,
                             const std::string& name) {
    std::vector<ExprPtr> out;
    std::function<void(const ExprPtr&)> rec = [&](const ExprPtr& e) {
        if (e->kind == ExprKind::SymbolRef && e->text == name) out.push_back(e);
        for (const auto& c : e->children) rec(c);
    };
    for (const auto& p : g.lookup(symbol)->productions) rec(p->body);
    return out;
}

}  // namespace

TEST_CASE("the left-recursion aspect marks recursive symbols") {
    Grammar g = resolve(parse_grammar("e : e '+' t ;\nt : ID ;\nID : ['a'--'z']+ ;", "lr.gr"));
    AnnotationStore store(g);
    Aspect aspect = parse_aspect(fixtures::kLeftRecAspect, "leftrec.aspect");
    ApplyReport report = apply_aspect(g, aspect, store);

    REQUIRE(report.rules.size() == 1);
    CHECK(report.rules[0].matches == 1);
    CHECK(report.rules[0].attachments == 1);
    CHECK(report.warnings.empty());
    const AttributeValue* v = store.lookup(g.lookup("e")->id, "leftRecursive");
    REQUIRE(v != nullptr);
    CHECK(v->kind() == ValueKind::None);
    CHECK(store.lookup(g.lookup("t")->id, "leftRecursive") == nullptr);
}

TEST_CASE("zero-match rules warn instead of failing") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect(fixtures::kLeftRecAspect, "leftrec.aspect");
    ApplyReport report = apply_aspect(g, aspect, store);
    CHECK(report.rules[0].matches == 0);
    CHECK(store.attribute_count() == 0);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].severity == Severity::Warning);
    CHECK(report.warnings[0].message.find("matched nothing") != std::string::npos);
}

TEST_CASE("the sum aspect attaches exactly four attributes") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect(fixtures::kSumAspect, "sum.aspect");
    ApplyReport report = apply_aspect(g, aspect, store);

    CHECK(report.rules[0].matches == 1);
    CHECK(report.rules[0].attachments == 4);
    CHECK(store.attribute_count() == 4);

    const Symbol* sum = g.lookup("sum");
    CHECK(*store.lookup(sum->id, "returns") == AttributeValue::id("int"));
    CHECK(*store.lookup(sum->productions[0]->id, "before") ==
          AttributeValue::str("##result = 0;"));

    std::vector<ExprPtr> mults = refs_to(g, "sum", "mult");
    REQUIRE(mults.size() == 2);
    for (const auto& occurrence : mults) {
        const AttributeValue* after = store.lookup(occurrence->id, "after");
        REQUIRE(after != nullptr);
        CHECK(*after == AttributeValue::str("##result += #mult;"));
    }
}

TEST_CASE("re-applying an aspect is a duplicate-attribute error") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect(fixtures::kSumAspect, "sum.aspect");
    apply_aspect(g, aspect, store);
    CHECK_THROWS_WITH_AS(apply_aspect(g, aspect, store), doctest::Contains("already attached"),
                         Error);
}

TEST_CASE("disjoint aspects commute") {
    Aspect sum_aspect = parse_aspect(fixtures::kSumAspect, "sum.aspect");
    Aspect mult_aspect =
        parse_aspect("mult $:--> .. [[ before = 'int m;'; ]];", "mult.aspect");

    Grammar g = fixtures::expr_grammar();
    AnnotationStore ab(g);
    apply_aspect(g, sum_aspect, ab);
    apply_aspect(g, mult_aspect, ab);

    AnnotationStore ba(g);
    apply_aspect(g, mult_aspect, ba);
    apply_aspect(g, sum_aspect, ba);

    CHECK(ab == ba);
}

TEST_CASE("weaving never changes the grammar") {
    Grammar g = fixtures::expr_grammar();
    Grammar pristine = fixtures::expr_grammar();
    AnnotationStore store(g);
    apply_aspect(g, parse_aspect(fixtures::kSumAspect, "sum.aspect"), store);
    CHECK(structural_equals(g, pristine));
}

TEST_CASE("one rule deduplicates equal values, rejects unequal ones") {
    // #A binds both refs in turn; the occurrence assignment covers both
    // occurrences each time, so every (node, attr) pair is hit twice with
    // the same value.
    Grammar g = resolve(parse_grammar("s : a a ;\na : 'x' ;", "dup.gr"));
    AnnotationStore store(g);
    Aspect aspect = parse_aspect("s --> .. #A .. ; [[ A { mark; }; ]];", "dedup.aspect");
    ApplyReport report = apply_aspect(g, aspect, store);
    CHECK(report.rules[0].matches == 2);
    CHECK(report.rules[0].attachments == 2);  // two distinct ref nodes, once each

    Grammar g2 = resolve(parse_grammar("s : a a ;\na : 'x' ;", "dup2.gr"));
    AnnotationStore store2(g2);
    // a production-position attachment lands on the same production for
    // every binding: deduplicated to one
    Aspect per_prod = parse_aspect("s --> .. #A .. [[ note = 'n'; ]];", "prod.aspect");
    ApplyReport report2 = apply_aspect(g2, per_prod, store2);
    CHECK(report2.rules[0].matches == 2);
    CHECK(report2.rules[0].attachments == 1);
}

TEST_CASE("occurrence assignments cover every occurrence, or fail loudly") {
    Grammar g = resolve(parse_grammar("s : a (a b)* ;\na : 'x' ;\nb : 'y' ;", "occ.gr"));
    AnnotationStore store(g);
    Aspect aspect = parse_aspect("s $:--> .. [[ #a.tag = 1; ]];", "occ.aspect");
    apply_aspect(g, aspect, store);
    std::vector<ExprPtr> occurrences = refs_to(g, "s", "a");
    REQUIRE(occurrences.size() == 2);
    for (const auto& o : occurrences) CHECK(store.lookup(o->id, "tag") != nullptr);

    Grammar g2 = resolve(parse_grammar("s : a ;\na : 'x' ;", "occ2.gr"));
    AnnotationStore store2(g2);
    Aspect missing = parse_aspect("s $:--> .. [[ #nosuch.tag = 1; ]];", "occ2.aspect");
    CHECK_THROWS_WITH_AS(apply_aspect(g2, missing, store2), doctest::Contains("no occurrences"),
                         Error);
}

TEST_CASE("occurrence names resolve through query variables") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect("sum --> #Arg .. [[ #Arg.after = 'x'; ]];", "var-occ.aspect");
    apply_aspect(g, aspect, store);
    std::vector<ExprPtr> mults = refs_to(g, "sum", "mult");
    for (const auto& o : mults) CHECK(store.lookup(o->id, "after") != nullptr);
}

TEST_CASE("trailing blocks may target production and subexpression binders") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect(
        "sum $p:--> #A $it:((#S #A)*) ; [[ p { isPlus; }; it { loop; }; ]];", "binders.aspect");
    ApplyReport report = apply_aspect(g, aspect, store);
    CHECK(report.rules[0].matches == 1);
    const Symbol* sum = g.lookup("sum");
    CHECK(store.lookup(sum->productions[0]->id, "isPlus") != nullptr);
    CHECK(store.lookup(sum->productions[0]->body->children[1]->id, "loop") != nullptr);
}

TEST_CASE("inline subexpression annotations attach to the matched node") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect("sum --> #A [[ first; ]] .. ;", "slot.aspect");
    apply_aspect(g, aspect, store);
    const ExprPtr& first_child = g.lookup("sum")->productions[0]->body->children[0];
    CHECK(store.lookup(first_child->id, "first") != nullptr);
}

TEST_CASE("conflicts across aspects name both origins") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    apply_aspect(g, parse_aspect("sum [[x = 1;]];", "one.aspect"), store);
    try {
        apply_aspect(g, parse_aspect("sum [[x = 2;]];", "two.aspect"), store);
        FAIL("expected a conflict");
    } catch (const Error& e) {
        std::string msg = e.diagnostic().message;
        CHECK(msg.find("one.aspect") != std::string::npos);
        CHECK(msg.find("two.aspect") != std::string::npos);
    }
}

TEST_CASE("one rule assigning unequal values to one node is rejected") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    Aspect aspect = parse_aspect("sum [[x = 1; x = 2;]];", "clash.aspect");
    CHECK_THROWS_WITH_AS(apply_aspect(g, aspect, store), doctest::Contains("conflicting values"),
                         Error);
}

TEST_CASE("conditions, inline blocks and trailing blocks compose in one rule") {
    Grammar g = fixtures::expr_grammar();
    AnnotationStore store(g);
    store.attach(g.lookup("sum")->id, "flag", AttributeValue::none(), "setup");
    Aspect aspect =
        parse_aspect("#N { flag; } [[woven;]] ; [[ N { extra = 1; }; ]];", "combo.aspect");
    ApplyReport report = apply_aspect(g, aspect, store);
    CHECK(report.rules[0].matches == 1);
    CHECK(store.lookup(g.lookup("sum")->id, "woven") != nullptr);
    CHECK(*store.lookup(g.lookup("sum")->id, "extra") == AttributeValue::integer(1));
    CHECK(store.lookup(g.lookup("mult")->id, "woven") == nullptr);
}
