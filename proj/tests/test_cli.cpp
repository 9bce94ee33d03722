#include <doctest.h>

#include <filesystem>

#include <json.hpp>

#include "support/helpers.hpp"

using testutil::run_cli;
using testutil::testdata;
namespace fs = std::filesystem;

TEST_CASE("check prints symbol and production counts") {
    auto r = run_cli({"check", testdata("expr.gr")});
    CHECK(r.code == 0);
    CHECK(r.out == "9 symbols, 11 productions\n");
    CHECK(r.err.empty());
}

TEST_CASE("check fails with a positioned diagnostic on bad input") {
    fs::path bad = fs::temp_directory_path() / "grammatic_bad.gr";
    {
        std::ofstream out(bad);
        out << "sum : mult (\n";
    }
    auto r = run_cli({"check", bad.string()});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.find(bad.string() + ":") != std::string::npos);
    CHECK(r.err.find("error:") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("resolve prints the flattened canonical grammar") {
    auto r = run_cli({"resolve", testdata("operations.gr")});
    CHECK(r.code == 0);
    CHECK(r.out.find("Product : Factor (('*' | '/') Factor)* ;") != std::string::npos);
    CHECK(r.out.find("Sum : Product (('+' | '-') Product)* ;") != std::string::npos);
    CHECK(r.out.find("import") == std::string::npos);
}

TEST_CASE("query prints one line per binding") {
    auto r = run_cli({"query", "-e", "#Op --> #Arg (#Sign #Arg)* ;", testdata("expr.gr")});
    CHECK(r.code == 0);
    std::size_t lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 2);
    CHECK(r.out.find("Op=symbol:" + testdata("expr.gr") + ":5:1") != std::string::npos);
    CHECK(r.out.find("Op=symbol:" + testdata("expr.gr") + ":6:1") != std::string::npos);
    CHECK(r.out.find("Arg=expression:") != std::string::npos);
}

TEST_CASE("query --format json emits a stable report") {
    auto r = run_cli({"query", "-e", "#Rec --> #Rec .. ;", testdata("expr.gr"), "--format",
                      "json"});
    CHECK(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["pattern"] == "#Rec --> #Rec .. ;");
    CHECK(doc["bindings"].is_array());
    CHECK(doc["bindings"].empty());
}

TEST_CASE("weave reports matches, attachments and warnings") {
    auto r = run_cli({"weave", testdata("expr.gr"), "--aspect", testdata("antlr_sum.aspect"),
                      "--aspect", testdata("leftrec.aspect")});
    CHECK(r.code == 0);
    CHECK(r.out.find("rule 1: 1 match(es), 4 attachment(s)") != std::string::npos);
    CHECK(r.out.find("total: 4 attribute(s) attached") != std::string::npos);
    CHECK(r.err.find("warning") != std::string::npos);  // leftrec matches nothing

    auto j = run_cli({"weave", testdata("expr.gr"), "--aspect", testdata("antlr_sum.aspect"),
                      "--format", "json"});
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["aspects"][0]["rules"][0]["matches"] == 1);
    CHECK(doc["attachments"].size() == 4);
}

TEST_CASE("weaving the same aspect twice is a conflict") {
    auto r = run_cli({"weave", testdata("expr.gr"), "--aspect", testdata("antlr_sum.aspect"),
                      "--aspect", testdata("antlr_sum.aspect")});
    CHECK(r.code == 1);
    CHECK(r.err.find("already attached") != std::string::npos);
}

TEST_CASE("gen-antlr writes the grammar file") {
    fs::path dir = fs::temp_directory_path() / "grammatic_cli_gen";
    fs::remove_all(dir);
    auto r = run_cli({"gen-antlr", testdata("expr.gr"), "--aspect", testdata("antlr_sum.aspect"),
                      "-o", dir.string(), "--grammar-name", "Expr"});
    CHECK(r.code == 0);
    std::string text = testutil::slurp((dir / "Expr.g").string());
    CHECK(text.rfind("grammar Expr;", 0) == 0);
    CHECK(text.find("sum returns [int result]") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("no output file is written on failure") {
    fs::path dir = fs::temp_directory_path() / "grammatic_cli_fail";
    fs::remove_all(dir);
    fs::path bad_aspect = fs::temp_directory_path() / "grammatic_bad.aspect";
    {
        std::ofstream out(bad_aspect);
        out << "sum [[returns = ;]];\n";
    }
    auto r = run_cli({"gen-antlr", testdata("expr.gr"), "--aspect", bad_aspect.string(), "-o",
                      dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find(bad_aspect.string() + ":") != std::string::npos);
    CHECK_FALSE(fs::exists(dir));
    fs::remove(bad_aspect);
}

TEST_CASE("gen-builders writes grammar plus interface sources") {
    fs::path dir = fs::temp_directory_path() / "grammatic_cli_builders";
    fs::remove_all(dir);
    auto r = run_cli({"gen-builders", testdata("builders.gr"), "--aspect",
                      testdata("builders.aspect"), "-o", dir.string(), "--grammar-name", "Sums"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "Sums.g"));
    CHECK(fs::exists(dir / "IVarSumBuilder.java"));
    CHECK(fs::exists(dir / "IConstSumBuilder.java"));
    CHECK(fs::exists(dir / "IVarMultBuilder.java"));
    CHECK(fs::exists(dir / "IConstMultBuilder.java"));
    CHECK(fs::exists(dir / "IBuilders.java"));
    std::string factory = testutil::slurp((dir / "IBuilders.java").string());
    CHECK(factory.find("IVarSumBuilder getVarSumBuilder(Scope scope);") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("missing arguments exit with code 1") {
    auto r = run_cli({"gen-antlr", testdata("expr.gr")});
    CHECK(r.code == 1);
    auto r2 = run_cli({"nosuchcommand"});
    CHECK(r2.code == 1);
}

TEST_CASE("include directories make imports resolvable") {
    fs::path dir = fs::temp_directory_path() / "grammatic_cli_inc";
    fs::create_directories(dir / "lib");
    {
        std::ofstream(dir / "lib" / "tokens.gr") << "ID : ['a'--'z']+ ;\n";
        std::ofstream(dir / "main.gr") << "import tokens;\nuse : ID ;\n";
    }
    auto fail = run_cli({"check", (dir / "main.gr").string()});
    CHECK(fail.code == 1);
    auto ok = run_cli({"check", (dir / "main.gr").string(), "--include", (dir / "lib").string()});
    CHECK(ok.code == 0);
    CHECK(ok.out == "2 symbols, 2 productions\n");
    fs::remove_all(dir);
}

TEST_CASE("query sees attributes woven by --aspect files") {
    auto r = run_cli({"query", testdata("expr.gr"), "--aspect", testdata("antlr_sum.aspect"),
                      "-e", "#N { returns : ID; } ;"});
    CHECK(r.code == 0);
    std::size_t lines = 0;
    for (char c : r.out) lines += c == '\n';
    CHECK(lines == 1);
    CHECK(r.out.find("N=symbol:") != std::string::npos);
}

TEST_CASE("gen-antlr derives the grammar name from the file stem") {
    fs::path dir = fs::temp_directory_path() / "grammatic_cli_stem";
    fs::remove_all(dir);
    auto r = run_cli({"gen-antlr", testdata("expr.gr"), "-o", dir.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "expr.g"));
    CHECK(testutil::slurp((dir / "expr.g").string()).rfind("grammar expr;", 0) == 0);
    fs::remove_all(dir);
}
