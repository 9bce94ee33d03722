#include "grammatic/metadata.hpp"

#include <algorithm>
#include <cstring>

namespace grammatic {

const char* value_kind_name(ValueKind kind) {
    switch (kind) {
        case ValueKind::Id: return "ID";
        case ValueKind::Str: return "STRING";
        case ValueKind::Int: return "INTEGER";
        case ValueKind::Tuple: return "TUPLE";
        case ValueKind::Seq: return "SEQUENCE";
        case ValueKind::None: return "<none>";
    }
    return "?";
}

AttributeValue AttributeValue::id(std::string name) {
    AttributeValue v;
    v.kind_ = ValueKind::Id;
    v.text_ = std::move(name);
    return v;
}

AttributeValue AttributeValue::str(std::string text) {
    AttributeValue v;
    v.kind_ = ValueKind::Str;
    v.text_ = std::move(text);
    return v;
}

AttributeValue AttributeValue::integer(long long value) {
    AttributeValue v;
    v.kind_ = ValueKind::Int;
    v.num_ = value;
    return v;
}

AttributeValue AttributeValue::tuple(std::vector<TupleField> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i)
        for (std::size_t j = i + 1; j < fields.size(); ++j)
            if (fields[i].name == fields[j].name)
                throw Error("duplicate tuple field '" + fields[i].name + "'");
    AttributeValue v;
    v.kind_ = ValueKind::Tuple;
    v.fields_ = std::move(fields);
    return v;
}

AttributeValue AttributeValue::seq(std::vector<SeqElement> elements) {
    AttributeValue v;
    v.kind_ = ValueKind::Seq;
    v.elements_ = std::move(elements);
    return v;
}

AttributeValue AttributeValue::none() { return AttributeValue(); }

const AttributeValue* AttributeValue::field(std::string_view name) const {
    for (const auto& f : fields_)
        if (f.name == name) return &f.value;
    return nullptr;
}

bool operator==(const AttributeValue& a, const AttributeValue& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
        case ValueKind::Id:
        case ValueKind::Str: return a.text_ == b.text_;
        case ValueKind::Int: return a.num_ == b.num_;
        case ValueKind::Tuple: return a.fields_ == b.fields_;
        case ValueKind::Seq: return a.elements_ == b.elements_;
        case ValueKind::None: return true;
    }
    return false;
}

SeqElement SeqElement::ident(std::string name) {
    SeqElement e;
    e.kind = SeqKind::Ident;
    e.text = std::move(name);
    return e;
}

SeqElement SeqElement::str(std::string text) {
    SeqElement e;
    e.kind = SeqKind::Str;
    e.text = std::move(text);
    return e;
}

SeqElement SeqElement::number(long long value) {
    SeqElement e;
    e.kind = SeqKind::Num;
    e.num = value;
    return e;
}

SeqElement SeqElement::tuple(AttributeValue tuple_value) {
    SeqElement e;
    e.kind = SeqKind::Tuple;
    e.value = std::move(tuple_value);
    return e;
}

SeqElement SeqElement::seq(AttributeValue seq_value) {
    SeqElement e;
    e.kind = SeqKind::Seq;
    e.value = std::move(seq_value);
    return e;
}

SeqElement SeqElement::punct(char c) {
    if (!is_seq_punct(c)) throw Error(std::string("'") + c + "' is not a sequence punctuation token");
    SeqElement e;
    e.kind = SeqKind::Punct;
    e.text = std::string(1, c);
    return e;
}

bool is_seq_punct(char c) { return std::strchr("(),;.^+-*/=<>[]?!:|&@#%", c) != nullptr; }

const Attribute* Annotation::find(std::string_view name) const {
    for (const auto& a : attributes)
        if (a.name == name) return &a;
    return nullptr;
}

AnnotationStore::AnnotationStore(const Grammar& grammar) : grammar_id_(grammar.id()) {
    valid_ids_.insert(grammar.id());
    for (const auto& entry : walk(grammar)) valid_ids_.insert(entry.id);
}

void AnnotationStore::attach(NodeId node, std::string name, AttributeValue value,
                             std::string origin, SourceSpan span) {
    if (!valid_ids_.count(node)) throw Error(span, "unknown grammar node");
    Annotation& ann = annotations_[node];
    if (const Attribute* existing = ann.find(name)) {
        throw Error(span, "attribute '" + name + "' already attached to this node (by " +
                              existing->origin + ", now by " + origin + ")");
    }
    ann.attributes.push_back(Attribute{std::move(name), std::move(value), std::move(origin), std::move(span)});
}

const AttributeValue* AnnotationStore::lookup(NodeId node, std::string_view name) const {
    const Attribute* a = attribute(node, name);
    return a ? &a->value : nullptr;
}

const Attribute* AnnotationStore::attribute(NodeId node, std::string_view name) const {
    auto it = annotations_.find(node);
    if (it == annotations_.end()) return nullptr;
    return it->second.find(name);
}

const Annotation* AnnotationStore::annotation(NodeId node) const {
    auto it = annotations_.find(node);
    return it == annotations_.end() ? nullptr : &it->second;
}

std::size_t AnnotationStore::attribute_count() const {
    std::size_t n = 0;
    for (const auto& [id, ann] : annotations_) n += ann.attributes.size();
    return n;
}

bool operator==(const AnnotationStore& a, const AnnotationStore& b) {
    if (a.annotations_.size() != b.annotations_.size()) return false;
    for (const auto& [id, ann] : a.annotations_) {
        auto it = b.annotations_.find(id);
        if (it == b.annotations_.end()) return false;
        if (ann.attributes.size() != it->second.attributes.size()) return false;
        for (const auto& attr : ann.attributes) {
            const Attribute* other = it->second.find(attr.name);
            if (!other || !(other->value == attr.value)) return false;
        }
    }
    return true;
}

bool check_condition(const AttributeValue* value, const AttributeCondition& cond) {
    switch (cond.kind) {
        case ConditionKind::Equals: return value != nullptr && *value == cond.value;
        case ConditionKind::Present: return value != nullptr;
        case ConditionKind::OfType: return value != nullptr && value->kind() == cond.type;
        case ConditionKind::Absent: return value == nullptr;
    }
    return false;
}

}  // namespace grammatic
