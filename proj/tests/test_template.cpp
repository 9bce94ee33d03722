#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "grammatic/parser.hpp"
#include "grammatic/printer.hpp"
#include "grammatic/template_engine.hpp"
#include "support/fixtures.hpp"
#include "support/helpers.hpp"

using namespace grammatic;

namespace {

TemplateDefPtr binary_operation() {
    ParsedUnit unit = parse_grammar(fixtures::kBinaryOpGrammar, "ops.gr");
    REQUIRE(unit.templates.size() == 1);
    return unit.templates[0];
}

std::vector<TemplateArg> product_args() {
    return {TemplateArg::make_id("Product"),
            TemplateArg::make_expr(
                Expr::alternative({Expr::literal("*"), Expr::literal("/")})),
            TemplateArg::make_expr(Expr::symbol_ref("Factor"))};
}

SymbolPtr parse_single_rule(const std::string& text) {
    ParsedUnit unit = parse_grammar(text, "oneoff.gr");
    REQUIRE(unit.rules.size() == 1);
    return unit.rules[0];
}

}  // namespace

TEST_CASE("instantiation substitutes placeholders, preserving grouping") {
    auto def = binary_operation();
    auto rules = instantiate(*def, product_args());
    REQUIRE(rules.size() == 1);
    CHECK(structural_equals(*rules[0],
                            *parse_single_rule("Product : Factor (('*' | '/') Factor)* ;")));

    auto sum_rules = instantiate(
        *def, {TemplateArg::make_id("Sum"),
               TemplateArg::make_expr(Expr::alternative({Expr::literal("+"), Expr::literal("-")})),
               TemplateArg::make_expr(Expr::symbol_ref("Product"))});
    CHECK(structural_equals(*sum_rules[0],
                            *parse_single_rule("Sum : Product (('+' | '-') Product)* ;")));
}

TEST_CASE("instantiation rejects arity and kind mismatches") {
    auto def = binary_operation();
    auto args = product_args();
    args.pop_back();
    CHECK_THROWS_AS(instantiate(*def, args), Error);

    auto wrong_kind = product_args();
    wrong_kind[0] = TemplateArg::make_expr(Expr::literal("+"));
    CHECK_THROWS_AS(instantiate(*def, wrong_kind), Error);
}

TEST_CASE("a Production* argument expands to that many alternatives") {
    ParsedUnit unit = parse_grammar(fixtures::kAttributeValueGrammar, "av.gr");
    REQUIRE(unit.templates.size() == 1);
    const TemplateDef& def = *unit.templates[0];
    auto args = coerce_args(def, unit.imports[0].args, unit.imports[0].span);
    auto rules = instantiate(def, args);
    REQUIRE(rules.size() == 1);
    REQUIRE(rules[0]->productions.size() == 6);
    SymbolPtr expected = parse_single_rule("AttributeValue : '{{{' Expression '}}}' ;");
    CHECK(structural_equals(*rules[0]->productions[5], *expected->productions[0]));
}

TEST_CASE("instantiation is hygienic: no template node ids leak") {
    auto def = binary_operation();
    std::set<NodeId> template_ids;
    for (const auto& rule : def->body)
        for (const auto& prod : rule.productions) {
            template_ids.insert(prod->id);
            std::function<void(const Expr&)> rec = [&](const Expr& e) {
                template_ids.insert(e.id);
                for (const auto& c : e.children) rec(*c);
            };
            rec(*prod->body);
        }

    auto rules = instantiate(*def, product_args());
    for (const auto& entry : walk(*rules[0])) CHECK_FALSE(template_ids.count(entry.id));
}

TEST_CASE("double instantiation: structurally equal, identity distinct") {
    auto def = binary_operation();
    auto first = instantiate(*def, product_args());
    auto second = instantiate(*def, product_args());
    CHECK(structural_equals(*first[0], *second[0]));
    CHECK(first[0]->id != second[0]->id);
}

TEST_CASE("resolving the binary-operation unit yields a closed grammar") {
    ParsedUnit unit = parse_grammar(fixtures::kBinaryOpGrammar, "ops.gr");
    Grammar g = resolve(unit);
    CHECK(g.symbols().size() == 5);  // Product, Sum, Factor, NUMBER, ID
    CHECK(g.lookup("Product") != nullptr);
    CHECK(g.lookup("Sum") != nullptr);
    CHECK(g.lookup("Factor") != nullptr);
    CHECK(structural_equals(*g.lookup("Sum"),
                            *parse_single_rule("Sum : Product (('+' | '-') Product)* ;")));
}

TEST_CASE("resolution failure modes") {
    CHECK_THROWS_WITH_AS(resolve(parse_grammar("", "empty.gr")),
                         doctest::Contains("no symbols"), Error);

    ParsedUnit unresolved = parse_grammar("a : missing ;", "u.gr");
    CHECK_THROWS_WITH_AS(resolve(unresolved), doctest::Contains("unresolved"), Error);

    ParsedUnit unknown_template = parse_grammar("import nosuch<X>;\na : 'x' ;", "t.gr");
    CHECK_THROWS_WITH_AS(resolve(unknown_template), doctest::Contains("unknown template"), Error);
}

TEST_CASE("import cycles are reported") {
    auto unit_a = std::make_shared<ParsedUnit>(parse_grammar("import b;\na : 'x' ;", "a.gr"));
    auto unit_b = std::make_shared<ParsedUnit>(parse_grammar("import a;\nb : 'y' ;", "b.gr"));
    UnitLoader loader = [&](const std::string& name, const std::string&)
        -> std::shared_ptr<const ParsedUnit> {
        if (name == "a") return unit_a;
        if (name == "b") return unit_b;
        return nullptr;
    };
    CHECK_THROWS_WITH_AS(resolve(*unit_a, loader), doctest::Contains("cycle"), Error);

    auto self = std::make_shared<ParsedUnit>(parse_grammar("import self;\ns : 'x' ;", "self.gr"));
    UnitLoader self_loader = [&](const std::string& name, const std::string&)
        -> std::shared_ptr<const ParsedUnit> { return name == "self" ? self : nullptr; };
    CHECK_THROWS_WITH_AS(resolve(*self, self_loader), doctest::Contains("cycle"), Error);
}

TEST_CASE("plain imports insert the imported unit's rules once") {
    auto lib = std::make_shared<ParsedUnit>(
        parse_grammar("token : ['a'--'z']+ ;", "lib.gr"));
    UnitLoader loader = [&](const std::string& name, const std::string&)
        -> std::shared_ptr<const ParsedUnit> { return name == "lib" ? lib : nullptr; };

    ParsedUnit root = parse_grammar("import lib;\nimport lib;\nuse : token ;", "root.gr");
    Grammar g = resolve(root, loader);
    CHECK(g.symbols().size() == 2);
    CHECK(g.symbols()[0]->name == "token");  // imported first, then local
    CHECK(g.symbols()[1]->name == "use");
}

TEST_CASE("name collisions merge only when a template produced one side") {
    // instantiation result merges with a local definition of the same symbol
    ParsedUnit merged = parse_grammar(
        "Symbol extra<Production* $p> { V : 'base' || $p ; }\n"
        "import extra<'more'>;\n"
        "V : 'local' ;",
        "m.gr");
    Grammar g = resolve(merged);
    REQUIRE(g.symbols().size() == 1);
    REQUIRE(g.symbols()[0]->productions.size() == 3);
    CHECK(structural_equals(*g.symbols()[0]->productions[0]->body, *Expr::literal("base")));
    CHECK(structural_equals(*g.symbols()[0]->productions[1]->body, *Expr::literal("more")));
    CHECK(structural_equals(*g.symbols()[0]->productions[2]->body, *Expr::literal("local")));

    // two plain definitions conflict
    auto lib = std::make_shared<ParsedUnit>(parse_grammar("V : 'lib' ;", "lib.gr"));
    UnitLoader loader = [&](const std::string& name, const std::string&)
        -> std::shared_ptr<const ParsedUnit> { return name == "lib" ? lib : nullptr; };
    ParsedUnit conflict = parse_grammar("import lib;\nV : 'local' ;", "c.gr");
    CHECK_THROWS_WITH_AS(resolve(conflict, loader), doctest::Contains("conflicting"), Error);
}

TEST_CASE("resolved grammars have unique names and no dangling references") {
    ParsedUnit unit = parse_grammar(fixtures::kBinaryOpGrammar, "ops.gr");
    Grammar g = resolve(unit);
    std::set<std::string> names;
    for (const auto& s : g.symbols()) CHECK(names.insert(s->name).second);
    for (const auto& s : g.symbols())
        for (const auto& entry : walk(*s))
            CHECK(entry.kind != NodeKind::Placeholder);
}

TEST_CASE("the file loader searches the importer's directory, then includes") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "grammatic_loader_test";
    fs::create_directories(dir / "inc");
    {
        std::ofstream(dir / "local.gr") << "a : 'x' ;\n";
        std::ofstream(dir / "inc" / "shared.gr") << "b : 'y' ;\n";
        std::ofstream(dir / "root.gr") << "import local;\nimport shared;\nr : a b ;\n";
    }
    UnitLoader loader = make_file_loader({(dir / "inc").string()});
    ParsedUnit root = parse_grammar(testutil::slurp((dir / "root.gr").string()),
                                    (dir / "root.gr").string());
    Grammar g = resolve(root, loader);
    CHECK(g.symbols().size() == 3);
    fs::remove_all(dir);
}

TEST_CASE("an instantiation with the wrong arity fails at the import site") {
    ParsedUnit unit = parse_grammar(
        "Symbol pairOf<ID $name, Expression $item> { $name : $item $item ; }\n"
        "import pairOf<P>;\nQ : 'q' ;",
        "arity.gr");
    CHECK_THROWS_WITH_AS(resolve(unit), doctest::Contains("expects 2 argument"), Error);
}

TEST_CASE("independent roots may resolve in parallel through one loader") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "grammatic_parallel_loader";
    fs::create_directories(dir);
    {
        std::ofstream(dir / "shared.gr") << "token : ['a'--'z']+ ;\n";
    }
    UnitLoader loader = make_file_loader({dir.string()});
    std::vector<std::thread> threads;
    std::vector<bool> ok(8, false);
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 30; ++i) {
                ParsedUnit root = parse_grammar("import shared;\nuse : token ;",
                                                "root" + std::to_string(t) + ".gr");
                Grammar g = resolve(root, loader);
                if (g.symbols().size() != 2) return;
            }
            ok[t] = true;
        });
    }
    for (auto& thread : threads) thread.join();
    for (int t = 0; t < 8; ++t) CHECK(ok[t]);
    fs::remove_all(dir);
}
