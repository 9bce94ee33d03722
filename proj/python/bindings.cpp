#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "grammatic/antlr_backend.hpp"
#include "grammatic/aspect.hpp"
#include "grammatic/builder_backend.hpp"
#include "grammatic/parser.hpp"
#include "grammatic/printer.hpp"
#include "grammatic/query.hpp"
#include "grammatic/template_engine.hpp"

namespace py = pybind11;
using namespace grammatic;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

py::dict target_dict(const BoundTarget& target) {
    py::dict d;
    switch (target.kind) {
        case BoundTarget::Kind::Symbol:
            d["kind"] = "symbol";
            d["text"] = target.symbol->name;
            break;
        case BoundTarget::Kind::Production:
            d["kind"] = "production";
            d["text"] = print_expr(*target.production->body);
            break;
        case BoundTarget::Kind::Expression:
            d["kind"] = "expression";
            d["text"] = print_expr(*target.expr);
            break;
    }
    d["location"] = target.span().str();
    return d;
}

py::list bindings_list(const std::vector<Binding>& bindings) {
    py::list out;
    for (const auto& binding : bindings) {
        py::dict b;
        for (const auto& [name, target] : binding) b[py::str(name)] = target_dict(target);
        out.append(b);
    }
    return out;
}

py::dict report_dict(const ApplyReport& report) {
    py::dict out;
    py::list rules;
    for (const auto& r : report.rules) {
        py::dict rule;
        rule["rule"] = r.rule_index;
        rule["matches"] = r.matches;
        rule["attachments"] = r.attachments;
        rules.append(rule);
    }
    py::list attachments;
    for (const auto& a : report.attachments) {
        py::dict att;
        att["node_kind"] = node_kind_name(a.node_kind);
        att["attribute"] = a.attr;
        att["value"] = print_attribute_value(a.value);
        att["location"] = a.node_span.str();
        attachments.append(att);
    }
    py::list warnings;
    for (const auto& w : report.warnings) warnings.append(w.str());
    out["rules"] = rules;
    out["attachments"] = attachments;
    out["warnings"] = warnings;
    return out;
}

}  // namespace

PYBIND11_MODULE(_grammatic, m) {
    m.doc() = "Grammatic: modular grammar definitions, metadata weaving and ANTLR generation";

    py::register_exception<Error>(m, "GrammaticError");

    py::class_<ParsedUnit>(m, "ParsedUnit")
        .def_property_readonly("rule_count", [](const ParsedUnit& u) { return u.rules.size(); })
        .def_property_readonly("import_count", [](const ParsedUnit& u) { return u.imports.size(); })
        .def_property_readonly("template_count",
                               [](const ParsedUnit& u) { return u.templates.size(); })
        .def_property_readonly("production_count",
                               [](const ParsedUnit& u) { return u.production_count(); })
        .def("pretty", [](const ParsedUnit& u) { return print_grammar(u); });

    py::class_<Grammar>(m, "Grammar")
        .def_property_readonly("symbol_count", [](const Grammar& g) { return g.symbols().size(); })
        .def_property_readonly("production_count",
                               [](const Grammar& g) { return g.production_count(); })
        .def_property_readonly("symbol_names",
                               [](const Grammar& g) {
                                   std::vector<std::string> names;
                                   for (const auto& s : g.symbols()) names.push_back(s->name);
                                   return names;
                               })
        .def("pretty", [](const Grammar& g) { return print_grammar(g); });

    py::class_<AnnotationStore>(m, "AnnotationStore")
        .def(py::init<const Grammar&>())
        .def_property_readonly("attribute_count",
                               [](const AnnotationStore& s) { return s.attribute_count(); });

    py::class_<QueryPattern>(m, "QueryPattern")
        .def_property_readonly("variables", [](const QueryPattern& q) { return q.variable_names(); });

    py::class_<Aspect>(m, "Aspect")
        .def_property_readonly("rule_count", [](const Aspect& a) { return a.rules.size(); });

    m.def("parse_grammar", &parse_grammar, py::arg("text"), py::arg("file") = "<string>");
    m.def(
        "resolve",
        [](const ParsedUnit& unit, const std::vector<std::string>& include_dirs) {
            return resolve(unit, make_file_loader(include_dirs));
        },
        py::arg("unit"), py::arg("include_dirs") = std::vector<std::string>{});
    m.def(
        "load_grammar",
        [](const std::string& path, const std::vector<std::string>& include_dirs) {
            return resolve(parse_grammar(slurp(path), path), make_file_loader(include_dirs));
        },
        py::arg("path"), py::arg("include_dirs") = std::vector<std::string>{});

    m.def("parse_query", [](const std::string& text) { return parse_query(text); },
          py::arg("pattern"));
    m.def("parse_aspect", &parse_aspect, py::arg("text"), py::arg("file") = "<aspect>");
    m.def("load_aspect", [](const std::string& path) { return parse_aspect(slurp(path), path); },
          py::arg("path"));

    m.def(
        "match",
        [](const Grammar& grammar, const AnnotationStore& store, const QueryPattern& pattern) {
            return bindings_list(match(grammar, store, pattern));
        },
        py::arg("grammar"), py::arg("store"), py::arg("pattern"));
    m.def(
        "apply_aspect",
        [](const Grammar& grammar, const Aspect& aspect, AnnotationStore& store) {
            return report_dict(apply_aspect(grammar, aspect, store));
        },
        py::arg("grammar"), py::arg("aspect"), py::arg("store"));

    m.def(
        "generate_antlr",
        [](const Grammar& grammar, const AnnotationStore& store, const std::string& name) {
            AntlrGenConfig config;
            config.grammar_name = name;
            return generate_antlr(grammar, store, config).text;
        },
        py::arg("grammar"), py::arg("store"), py::arg("grammar_name"));
    m.def(
        "generate_builders",
        [](const Grammar& grammar, const AnnotationStore& store, const std::string& name) {
            AntlrGenConfig config;
            config.grammar_name = name;
            BuildersResult result = generate_builders(grammar, store, config);
            py::dict out;
            out["grammar"] = result.grammar_text;
            py::list interfaces;
            for (const auto& [iname, source] : result.interfaces)
                interfaces.append(py::make_tuple(iname, source));
            out["interfaces"] = interfaces;
            return out;
        },
        py::arg("grammar"), py::arg("store"), py::arg("grammar_name"));
}
