#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "grammatic/ast.hpp"

namespace grammatic {

enum class ValueKind { Id, Str, Int, Tuple, Seq, None };

const char* value_kind_name(ValueKind kind);

struct TupleField;
struct SeqElement;

// Typed attribute value: ID, STRING, INTEGER, TUPLE, SEQUENCE, or None for
// presence-only attributes (distinct from absence).
class AttributeValue {
public:
    AttributeValue() = default;

    static AttributeValue id(std::string name);
    static AttributeValue str(std::string text);
    static AttributeValue integer(long long value);
    static AttributeValue tuple(std::vector<TupleField> fields);
    static AttributeValue seq(std::vector<SeqElement> elements);
    static AttributeValue none();

    ValueKind kind() const { return kind_; }
    const std::string& text() const { return text_; }  // Id name or Str text
    long long num() const { return num_; }
    const std::vector<TupleField>& fields() const { return fields_; }
    const std::vector<SeqElement>& elements() const { return elements_; }

    const AttributeValue* field(std::string_view name) const;

    friend bool operator==(const AttributeValue& a, const AttributeValue& b);

private:
    ValueKind kind_ = ValueKind::None;
    std::string text_;
    long long num_ = 0;
    std::vector<TupleField> fields_;
    std::vector<SeqElement> elements_;
};

struct TupleField {
    std::string name;
    AttributeValue value;

    friend bool operator==(const TupleField&, const TupleField&) = default;
};

enum class SeqKind { Ident, Str, Num, Tuple, Seq, Punct };

// One token of an embedded DSL stored in a SEQUENCE value.
struct SeqElement {
    SeqKind kind = SeqKind::Ident;
    std::string text;      // Ident name, Str text, Punct single char
    long long num = 0;     // Num only
    AttributeValue value;  // Tuple / nested Seq payload

    static SeqElement ident(std::string name);
    static SeqElement str(std::string text);
    static SeqElement number(long long value);
    static SeqElement tuple(AttributeValue tuple_value);
    static SeqElement seq(AttributeValue seq_value);
    static SeqElement punct(char c);

    friend bool operator==(const SeqElement&, const SeqElement&) = default;
};

// The fixed punctuation alphabet for SEQUENCE tokens.
bool is_seq_punct(char c);

struct Attribute {
    std::string name;
    AttributeValue value;
    std::string origin;  // who attached it, for conflict diagnostics
    SourceSpan span;
};

struct Annotation {
    std::vector<Attribute> attributes;  // attachment order, names unique

    const Attribute* find(std::string_view name) const;
};

// Maps NodeIds of one grammar to annotations. The grammar itself is never
// touched; only ids that exist in the grammar (or the grammar's own id) may
// be annotated. Attaching an attribute name twice to one node is an error.
class AnnotationStore {
public:
    explicit AnnotationStore(const Grammar& grammar);

    NodeId grammar_id() const { return grammar_id_; }

    void attach(NodeId node, std::string name, AttributeValue value, std::string origin = "api",
                SourceSpan span = {});

    const AttributeValue* lookup(NodeId node, std::string_view name) const;
    const Attribute* attribute(NodeId node, std::string_view name) const;
    const Annotation* annotation(NodeId node) const;

    const std::map<NodeId, Annotation>& all() const { return annotations_; }
    std::size_t attribute_count() const;

    // Order-insensitive per node: same nodes, same name->value sets.
    friend bool operator==(const AnnotationStore& a, const AnnotationStore& b);

private:
    NodeId grammar_id_;
    std::set<NodeId> valid_ids_;
    std::map<NodeId, Annotation> annotations_;
};

enum class ConditionKind { Equals, Present, OfType, Absent };

struct AttributeCondition {
    ConditionKind kind = ConditionKind::Present;
    std::string attr;
    AttributeValue value;               // Equals only
    ValueKind type = ValueKind::Id;     // OfType only
    SourceSpan span;
};

// value is null when the attribute is absent.
bool check_condition(const AttributeValue* value, const AttributeCondition& cond);

}  // namespace grammatic
