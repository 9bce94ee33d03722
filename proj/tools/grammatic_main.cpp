#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "grammatic/antlr_backend.hpp"
#include "grammatic/aspect.hpp"
#include "grammatic/builder_backend.hpp"
#include "grammatic/parser.hpp"
#include "grammatic/printer.hpp"
#include "grammatic/query.hpp"
#include "grammatic/template_engine.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace grammatic;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string default_grammar_name(const std::string& path) {
    std::string stem = fs::path(path).stem().string();
    std::string out;
    for (char c : stem) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "_" + out;
    return out;
}

struct Pipeline {
    std::string grammar_file;
    std::vector<std::string> includes;
    std::vector<std::string> aspects;
    std::string out_dir;
    std::string grammar_name;
    std::string format = "text";
    std::string query_text;

    Grammar load_grammar() const {
        ParsedUnit unit = parse_grammar(slurp(grammar_file), grammar_file);
        return resolve(unit, make_file_loader(includes));
    }

    struct Woven {
        Grammar grammar;
        AnnotationStore store;
        std::vector<std::pair<std::string, ApplyReport>> reports;
    };

    Woven weave() const {
        Grammar grammar = load_grammar();
        AnnotationStore store(grammar);
        std::vector<std::pair<std::string, ApplyReport>> reports;
        for (const auto& path : aspects) {
            Aspect aspect = parse_aspect(slurp(path), path);
            reports.emplace_back(path, apply_aspect(grammar, aspect, store));
        }
        return Woven{std::move(grammar), std::move(store), std::move(reports)};
    }

    std::string name_for(const Grammar&) const {
        return grammar_name.empty() ? default_grammar_name(grammar_file) : grammar_name;
    }
};

void print_warnings(const std::vector<Diagnostic>& warnings) {
    for (const auto& w : warnings) std::cerr << w.str() << "\n";
}

json target_json(const BoundTarget& target) {
    json j;
    switch (target.kind) {
        case BoundTarget::Kind::Symbol:
            j["kind"] = "symbol";
            j["text"] = target.symbol->name;
            break;
        case BoundTarget::Kind::Production:
            j["kind"] = "production";
            j["text"] = print_expr(*target.production->body);
            break;
        case BoundTarget::Kind::Expression:
            j["kind"] = "expression";
            j["text"] = print_expr(*target.expr);
            break;
    }
    j["location"] = target.span().str();
    return j;
}

const char* target_kind_name(const BoundTarget& target) {
    switch (target.kind) {
        case BoundTarget::Kind::Symbol: return "symbol";
        case BoundTarget::Kind::Production: return "production";
        case BoundTarget::Kind::Expression: return "expression";
    }
    return "?";
}

int run_check(const Pipeline& p) {
    Grammar grammar = p.load_grammar();
    std::cout << grammar.symbols().size() << " symbols, " << grammar.production_count()
              << " productions\n";
    return 0;
}

int run_resolve(const Pipeline& p) {
    std::cout << print_grammar(p.load_grammar());
    return 0;
}

int run_query(const Pipeline& p) {
    Grammar grammar = p.load_grammar();
    AnnotationStore store(grammar);
    for (const auto& path : p.aspects) {
        Aspect aspect = parse_aspect(slurp(path), path);
        apply_aspect(grammar, aspect, store);
    }
    QueryPattern pattern = parse_query(p.query_text);
    std::vector<Binding> bindings = match(grammar, store, pattern);

    if (p.format == "json") {
        json out;
        out["pattern"] = p.query_text;
        out["bindings"] = json::array();
        for (const auto& binding : bindings) {
            json b = json::object();
            for (const auto& [name, target] : binding) b[name] = target_json(target);
            out["bindings"].push_back(std::move(b));
        }
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    for (const auto& binding : bindings) {
        std::string line;
        for (const auto& [name, target] : binding) {
            if (!line.empty()) line += ' ';
            line += name + "=" + target_kind_name(target) + ":" + target.span().str();
        }
        std::cout << (binding.empty() ? "<match>" : line) << "\n";
    }
    return 0;
}

int run_weave(const Pipeline& p) {
    Pipeline::Woven woven = p.weave();
    if (p.format == "json") {
        json out;
        out["aspects"] = json::array();
        json attachments = json::array();
        json warnings = json::array();
        for (const auto& [file, report] : woven.reports) {
            json rules = json::array();
            for (const auto& rule : report.rules) {
                rules.push_back(json{{"rule", rule.rule_index},
                                     {"location", rule.span.str()},
                                     {"matches", rule.matches},
                                     {"attachments", rule.attachments}});
            }
            out["aspects"].push_back(json{{"file", file}, {"rules", std::move(rules)}});
            for (const auto& a : report.attachments) {
                attachments.push_back(json{{"node_kind", node_kind_name(a.node_kind)},
                                           {"location", a.node_span.str()},
                                           {"attribute", a.attr},
                                           {"value", print_attribute_value(a.value)}});
            }
            for (const auto& w : report.warnings) warnings.push_back(w.str());
        }
        out["attachments"] = std::move(attachments);
        out["warnings"] = std::move(warnings);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
    for (const auto& [file, report] : woven.reports) {
        for (const auto& rule : report.rules) {
            std::cout << file << ": rule " << rule.rule_index << ": " << rule.matches
                      << " match(es), " << rule.attachments << " attachment(s)\n";
        }
        print_warnings(report.warnings);
    }
    std::cout << "total: " << woven.store.attribute_count() << " attribute(s) attached\n";
    return 0;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path.string() + "'");
    out << content;
}

int run_gen_antlr(const Pipeline& p) {
    Pipeline::Woven woven = p.weave();
    AntlrGenConfig config;
    config.grammar_name = p.name_for(woven.grammar);
    GenResult result = generate_antlr(woven.grammar, woven.store, config);
    print_warnings(result.warnings);

    fs::create_directories(p.out_dir);
    fs::path out_path = fs::path(p.out_dir) / (config.grammar_name + ".g");
    write_file(out_path, result.text);
    std::cout << "wrote " << out_path.string() << "\n";
    return 0;
}

int run_gen_builders(const Pipeline& p) {
    Pipeline::Woven woven = p.weave();
    AntlrGenConfig config;
    config.grammar_name = p.name_for(woven.grammar);
    BuildersResult result = generate_builders(woven.grammar, woven.store, config);
    print_warnings(result.warnings);

    fs::create_directories(p.out_dir);
    fs::path grammar_path = fs::path(p.out_dir) / (config.grammar_name + ".g");
    write_file(grammar_path, result.grammar_text);
    std::cout << "wrote " << grammar_path.string() << "\n";
    for (const auto& [name, source] : result.interfaces) {
        fs::path path = fs::path(p.out_dir) / (name + ".java");
        write_file(path, source);
        std::cout << "wrote " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grammatic: modular grammar definitions, metadata weaving and ANTLR generation"};
    app.require_subcommand(1);

    Pipeline p;
    int (*action)(const Pipeline&) = nullptr;

    auto add_common = [&](CLI::App* cmd, bool with_aspects) {
        cmd->add_option("grammar", p.grammar_file, "grammar file (.gr)")->required();
        cmd->add_option("--include", p.includes, "directory searched for imported units");
        if (with_aspects)
            cmd->add_option("--aspect", p.aspects, "aspect file, applied in order");
    };

    CLI::App* check = app.add_subcommand("check", "parse and resolve, print counts");
    add_common(check, false);
    check->callback([&] { action = run_check; });

    CLI::App* res = app.add_subcommand("resolve", "print the flattened canonical grammar");
    add_common(res, false);
    res->callback([&] { action = run_resolve; });

    CLI::App* query = app.add_subcommand("query", "match a pattern against the grammar");
    add_common(query, true);
    query->add_option("-e", p.query_text, "query pattern")->required();
    query->add_option("--format", p.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    query->callback([&] { action = run_query; });

    CLI::App* weave = app.add_subcommand("weave", "apply aspects and report attachments");
    add_common(weave, true);
    weave->add_option("--format", p.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    weave->callback([&] { action = run_weave; });

    CLI::App* gen_antlr = app.add_subcommand("gen-antlr", "generate an ANTLR grammar");
    add_common(gen_antlr, true);
    gen_antlr->add_option("-o", p.out_dir, "output directory")->required();
    gen_antlr->add_option("--grammar-name", p.grammar_name, "ANTLR grammar name");
    gen_antlr->callback([&] { action = run_gen_antlr; });

    CLI::App* gen_builders =
        app.add_subcommand("gen-builders", "generate builder interfaces and an ANTLR grammar");
    add_common(gen_builders, true);
    gen_builders->add_option("-o", p.out_dir, "output directory")->required();
    gen_builders->add_option("--grammar-name", p.grammar_name, "ANTLR grammar name");
    gen_builders->callback([&] { action = run_gen_builders; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return action ? action(p) : 1;
    } catch (const Error& e) {
        std::cerr << e.diagnostic().str() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
