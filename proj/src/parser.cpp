#include "grammatic/parser.hpp"

#include <algorithm>
#include <set>

#include "grammatic/lexer.hpp"

namespace grammatic {

namespace {

const char* kAnonymousQueryHead = "Symbol";

class Parser {
public:
    Parser(std::string_view text, const std::string& file)
        : toks_(lex(text, file)), file_(file) {}

    ParsedUnit parse_unit() {
        ParsedUnit unit;
        unit.file = file_;
        std::set<std::string> rule_names;
        while (!at(Tok::Eof)) {
            const Token& t = cur();
            if (t.kind != Tok::Ident && t.kind != Tok::Dollar)
                fail(t, std::string("expected a rule, import or template, got ") + token_name(t.kind));
            if (t.kind == Tok::Ident && t.text == "import" && peek(1).kind == Tok::Ident &&
                (peek(2).kind == Tok::Semi || peek(2).kind == Tok::Lt)) {
                unit.imports.push_back(parse_import());
                continue;
            }
            if (t.kind == Tok::Ident && result_kind_of(t.text) && peek(1).kind == Tok::Ident &&
                peek(2).kind == Tok::Lt) {
                unit.templates.push_back(parse_template());
                continue;
            }
            TemplateRule rule = parse_rule(nullptr);
            if (!rule_names.insert(rule.name).second)
                fail_at(rule.span, "duplicate rule for symbol '" + rule.name + "' in this unit");
            unit.rules.push_back(make_symbol(rule.name, std::move(rule.productions), rule.span));
        }
        return unit;
    }

    Aspect parse_aspect_file() {
        Aspect aspect;
        aspect.origin = file_;
        while (!at(Tok::Eof)) aspect.rules.push_back(parse_aspect_rule());
        return aspect;
    }

    QueryPattern parse_query_only() {
        PatternState state;
        state.allow_annotations = false;
        QueryPattern q = parse_query_pattern(state);
        if (at(Tok::Semi)) advance();
        if (!at(Tok::Eof)) fail(cur(), "unexpected input after query");
        return q;
    }

    AttributeValue parse_value_only() {
        AttributeValue v = parse_value();
        if (!at(Tok::Eof)) fail(cur(), "unexpected input after attribute value");
        return v;
    }

    Annotation parse_annotation_only() {
        Annotation ann;
        while (!at(Tok::Eof)) {
            Token name = expect(Tok::Ident, "attribute name");
            AttributeValue value = AttributeValue::none();
            if (at(Tok::Eq)) {
                advance();
                value = parse_value();
            }
            expect(Tok::Semi, "';'");
            if (ann.find(name.text)) fail(name, "duplicate attribute '" + name.text + "'");
            ann.attributes.push_back(Attribute{name.text, std::move(value), file_, name.span});
        }
        return ann;
    }

private:
    std::vector<Token> toks_;
    std::string file_;
    std::size_t pos_ = 0;

    // ---- token plumbing ------------------------------------------------

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok kind) const { return cur().kind == kind; }

    Token advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    Token expect(Tok kind, const char* what) {
        if (!at(kind))
            fail(cur(), std::string("expected ") + what + ", got " + token_name(cur().kind));
        return advance();
    }

    [[noreturn]] void fail(const Token& tok, std::string msg) const { throw Error(tok.span, std::move(msg)); }
    [[noreturn]] void fail_at(SourceSpan span, std::string msg) const { throw Error(std::move(span), std::move(msg)); }

    // ---- grammar units -------------------------------------------------

    static const TemplateResultKind* result_kind_of(const std::string& word) {
        static const TemplateResultKind kSymbol = TemplateResultKind::Symbol;
        static const TemplateResultKind kExpression = TemplateResultKind::Expression;
        static const TemplateResultKind kProduction = TemplateResultKind::Production;
        if (word == "Symbol") return &kSymbol;
        if (word == "Expression") return &kExpression;
        if (word == "Production") return &kProduction;
        return nullptr;
    }

    ImportDecl parse_import() {
        Token kw = advance();  // 'import'
        ImportDecl decl;
        decl.span = kw.span;
        decl.target = expect(Tok::Ident, "unit or template name").text;
        if (at(Tok::Lt)) {
            advance();
            decl.is_instantiation = true;
            for (;;) {
                TemplateArgSyntax arg;
                arg.span = cur().span;
                arg.productions.push_back(make_production(parse_alt(nullptr), arg.span));
                while (at(Tok::PipePipe)) {
                    advance();
                    arg.productions.push_back(make_production(parse_alt(nullptr), cur().span));
                }
                decl.args.push_back(std::move(arg));
                if (at(Tok::Comma)) {
                    advance();
                    continue;
                }
                break;
            }
            expect(Tok::Gt, "'>'");
        }
        expect(Tok::Semi, "';'");
        return decl;
    }

    TemplateDefPtr parse_template() {
        Token kind_tok = advance();
        auto def = std::make_shared<TemplateDef>();
        def->result_kind = *result_kind_of(kind_tok.text);
        def->span = kind_tok.span;
        def->name = expect(Tok::Ident, "template name").text;
        expect(Tok::Lt, "'<'");
        for (;;) {
            TemplateParam param;
            Token kind_word = expect(Tok::Ident, "parameter kind (ID, Expression, Production*, Symbol)");
            param.span = kind_word.span;
            if (kind_word.text == "ID") {
                param.kind = ParamKind::Id;
            } else if (kind_word.text == "Expression") {
                param.kind = ParamKind::Expression;
            } else if (kind_word.text == "Symbol") {
                param.kind = ParamKind::Symbol;
            } else if (kind_word.text == "Production") {
                expect(Tok::Star, "'*' after 'Production'");
                param.kind = ParamKind::Productions;
            } else {
                fail(kind_word, "unknown parameter kind '" + kind_word.text + "'");
            }
            expect(Tok::Dollar, "'$'");
            param.name = expect(Tok::Ident, "placeholder name").text;
            for (const auto& p : def->params)
                if (p.name == param.name)
                    fail_at(param.span, "duplicate placeholder '" + param.name + "'");
            def->params.push_back(std::move(param));
            if (at(Tok::Comma)) {
                advance();
                continue;
            }
            break;
        }
        expect(Tok::Gt, "'>'");
        expect(Tok::LBrace, "'{'");
        std::set<std::string> names;
        while (!at(Tok::RBrace)) {
            TemplateRule rule = parse_rule(&def->params);
            if (!rule.name_is_placeholder && !names.insert(rule.name).second)
                fail_at(rule.span, "duplicate rule for symbol '" + rule.name + "' in template body");
            def->body.push_back(std::move(rule));
        }
        expect(Tok::RBrace, "'}'");
        if (def->body.empty()) fail_at(def->span, "template body has no rules");
        validate_template(*def);
        return def;
    }

    void validate_template(const TemplateDef& def) const {
        auto param_of = [&](const std::string& name) -> const TemplateParam* {
            for (const auto& p : def.params)
                if (p.name == name) return &p;
            return nullptr;
        };
        for (const auto& rule : def.body) {
            if (rule.name_is_placeholder) {
                const TemplateParam* p = param_of(rule.name);
                if (!p) fail_at(rule.span, "undeclared placeholder '$" + rule.name + "'");
                if (p->kind != ParamKind::Id)
                    fail_at(rule.span, "rule name placeholder '$" + rule.name + "' must have kind ID");
            }
            for (const auto& prod : rule.productions)
                validate_placeholders(*prod->body, true, param_of);
        }
    }

    template <typename Lookup>
    void validate_placeholders(const Expr& e, bool whole_production, const Lookup& param_of) const {
        if (e.kind == ExprKind::Placeholder) {
            const TemplateParam* p = param_of(e.text);
            if (!p) fail_at(e.span, "undeclared placeholder '$" + e.text + "'");
            if (p->kind == ParamKind::Productions && !whole_production)
                fail_at(e.span, "'Production*' placeholder '$" + e.text +
                                    "' may only stand for a whole production");
            return;
        }
        for (const auto& c : e.children) validate_placeholders(*c, false, param_of);
    }

    TemplateRule parse_rule(const std::vector<TemplateParam>* params) {
        TemplateRule rule;
        if (at(Tok::Dollar)) {
            if (!params) fail(cur(), "placeholder outside a template body");
            Token dollar = advance();
            rule.name = expect(Tok::Ident, "placeholder name").text;
            rule.name_is_placeholder = true;
            rule.span = dollar.span;
        } else {
            Token name = expect(Tok::Ident, "rule name");
            rule.name = name.text;
            rule.span = name.span;
        }
        if (!at(Tok::Colon) && !at(Tok::Arrow))
            fail(cur(), std::string("expected ':' or '-->', got ") + token_name(cur().kind));
        advance();
        for (;;) {
            SourceSpan span = cur().span;
            rule.productions.push_back(make_production(parse_alt(params), span));
            if (at(Tok::PipePipe)) {
                advance();
                continue;
            }
            break;
        }
        expect(Tok::Semi, "';'");
        return rule;
    }

    // ---- expressions ---------------------------------------------------

    bool at_atom_start() const {
        switch (cur().kind) {
            case Tok::Ident:
            case Tok::SqString:
            case Tok::LBracket:
            case Tok::LParen:
            case Tok::Dollar:
                return true;
            default:
                return false;
        }
    }

    ExprPtr parse_alt(const std::vector<TemplateParam>* params) {
        SourceSpan span = cur().span;
        std::vector<ExprPtr> branches;
        branches.push_back(parse_seq(params));
        while (at(Tok::Pipe)) {
            advance();
            branches.push_back(parse_seq(params));
        }
        if (branches.size() == 1) return branches[0];
        return Expr::alternative(std::move(branches), span);
    }

    ExprPtr parse_seq(const std::vector<TemplateParam>* params) {
        SourceSpan span = cur().span;
        std::vector<ExprPtr> terms;
        while (at_atom_start()) terms.push_back(parse_term(params));
        if (terms.size() == 1) return terms[0];
        return Expr::sequence(std::move(terms), span);
    }

    ExprPtr parse_term(const std::vector<TemplateParam>* params) {
        ExprPtr e = parse_atom(params);
        for (;;) {
            if (at(Tok::Question)) {
                e = Expr::iteration(e, IterKind::Option, advance().span);
            } else if (at(Tok::Star)) {
                e = Expr::iteration(e, IterKind::Star, advance().span);
            } else if (at(Tok::Plus)) {
                e = Expr::iteration(e, IterKind::Plus, advance().span);
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_atom(const std::vector<TemplateParam>* params) {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Ident: {
                Token tok = advance();
                return Expr::symbol_ref(tok.text, tok.span);
            }
            case Tok::SqString: {
                Token tok = advance();
                if (tok.text.empty()) fail(tok, "empty string literal in expression");
                return Expr::literal(tok.text, tok.span);
            }
            case Tok::LBracket:
                return parse_char_class();
            case Tok::LParen: {
                advance();
                ExprPtr inner = parse_alt(params);
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Dollar: {
                if (!params) fail(t, "placeholder outside a template body");
                Token dollar = advance();
                Token name = expect(Tok::Ident, "placeholder name");
                return Expr::placeholder(name.text, dollar.span);
            }
            default:
                fail(t, std::string("expected an expression, got ") + token_name(t.kind));
        }
    }

    char single_char(const Token& tok) {
        if (tok.text.size() != 1) fail(tok, "character class items must be single characters");
        return tok.text[0];
    }

    ExprPtr parse_char_class() {
        Token open = expect(Tok::LBracket, "'['");
        std::vector<CharClassItem> items;
        while (!at(Tok::RBracket)) {
            Token lo = expect(Tok::SqString, "character literal");
            CharClassItem item;
            item.lo = single_char(lo);
            if (at(Tok::RangeOp)) {
                advance();
                Token hi = expect(Tok::SqString, "character literal");
                item.hi = single_char(hi);
                item.is_range = true;
                if (item.lo > item.hi)
                    fail(hi, "character range lower bound exceeds upper bound");
            } else {
                item.hi = item.lo;
            }
            items.push_back(item);
        }
        Token close = expect(Tok::RBracket, "']'");
        if (items.empty()) fail(close, "empty character class");
        return Expr::char_class(std::move(items), open.span);
    }

    // ---- attribute values ----------------------------------------------

    AttributeValue parse_value() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Ident:
                return AttributeValue::id(advance().text);
            case Tok::SqString:
            case Tok::DqString:
            case Tok::Verbatim:
                return AttributeValue::str(advance().text);
            case Tok::Int:
                return AttributeValue::integer(advance().num);
            case Tok::Minus: {
                advance();
                Token n = expect(Tok::Int, "integer");
                return AttributeValue::integer(-n.num);
            }
            case Tok::LBrace:
                return parse_tuple();
            case Tok::LLBrace:
                return parse_seq_value();
            default:
                fail(t, std::string("expected an attribute value, got ") + token_name(t.kind));
        }
    }

    AttributeValue parse_tuple() {
        Token open = expect(Tok::LBrace, "'{'");
        std::vector<TupleField> fields;
        while (!at(Tok::RBrace)) {
            Token name = expect(Tok::Ident, "tuple field name");
            expect(Tok::Eq, "'='");
            AttributeValue value = parse_value();
            expect(Tok::Semi, "';'");
            for (const auto& f : fields)
                if (f.name == name.text) fail(name, "duplicate tuple field '" + name.text + "'");
            fields.push_back(TupleField{name.text, std::move(value)});
        }
        expect(Tok::RBrace, "'}'");
        return AttributeValue::tuple(std::move(fields));
    }

    void push_punct_chars(const Token& tok, std::vector<SeqElement>& out) {
        static const std::map<Tok, const char*> kSpelling = {
            {Tok::Colon, ":"},     {Tok::Semi, ";"},      {Tok::Arrow, "-->"},
            {Tok::PipePipe, "||"}, {Tok::Pipe, "|"},      {Tok::LParen, "("},
            {Tok::RParen, ")"},    {Tok::Question, "?"},  {Tok::Star, "*"},
            {Tok::Plus, "+"},      {Tok::LBracket, "["},  {Tok::RBracket, "]"},
            {Tok::LLBracket, "[["},{Tok::RRBracket, "]]"},{Tok::RangeOp, "--"},
            {Tok::Lt, "<"},        {Tok::Gt, ">"},        {Tok::Comma, ","},
            {Tok::Dot, "."},       {Tok::DotDot, ".."},   {Tok::Eq, "="},
            {Tok::Bang, "!"},      {Tok::Hash, "#"},      {Tok::Caret, "^"},
            {Tok::Minus, "-"},     {Tok::Slash, "/"},     {Tok::At, "@"},
            {Tok::Amp, "&"},       {Tok::Percent, "%"},
        };
        auto it = kSpelling.find(tok.kind);
        if (it == kSpelling.end())
            fail(tok, std::string("invalid sequence token ") + token_name(tok.kind));
        for (const char* p = it->second; *p; ++p) {
            if (!is_seq_punct(*p))
                fail(tok, std::string("'") + *p + "' is not a sequence punctuation token");
            out.push_back(SeqElement::punct(*p));
        }
    }

    AttributeValue parse_seq_value() {
        expect(Tok::LLBrace, "'{{'");
        std::vector<SeqElement> elements;
        while (!at(Tok::RRBrace)) {
            const Token& t = cur();
            switch (t.kind) {
                case Tok::Eof:
                    fail(t, "unterminated sequence value");
                case Tok::Ident:
                    elements.push_back(SeqElement::ident(advance().text));
                    break;
                case Tok::SqString:
                case Tok::DqString:
                case Tok::Verbatim:
                    elements.push_back(SeqElement::str(advance().text));
                    break;
                case Tok::Int:
                    elements.push_back(SeqElement::number(advance().num));
                    break;
                case Tok::LBrace:
                    elements.push_back(SeqElement::tuple(parse_tuple()));
                    break;
                case Tok::LLBrace:
                    elements.push_back(SeqElement::seq(parse_seq_value()));
                    break;
                default:
                    push_punct_chars(advance(), elements);
                    break;
            }
        }
        expect(Tok::RRBrace, "'}}'");
        return AttributeValue::seq(std::move(elements));
    }

    // ---- queries and aspects ---------------------------------------------

    struct PatternState {
        bool allow_annotations = true;
        int slot_count = 0;
        std::vector<Assignment> assignments;
        std::set<std::string> dollar_names;  // $-introduced, at most once
        std::set<std::string> hash_names;    // #-introduced; repetition = constraint

        bool known(const std::string& name) const {
            return dollar_names.count(name) || hash_names.count(name);
        }
    };

    AspectRule parse_aspect_rule() {
        PatternState state;
        AspectRule rule;
        rule.span = cur().span;
        rule.pattern = parse_query_pattern(state);
        expect(Tok::Semi, "';'");
        if (at(Tok::LLBracket)) parse_trailing_block(state, rule.pattern);
        rule.assignments = std::move(state.assignments);
        return rule;
    }

    QueryPattern parse_query_pattern(PatternState& state) {
        QueryPattern q;
        q.span = cur().span;
        if (at(Tok::Hash)) {
            advance();
            q.head = QueryHead::Var;
            q.head_name = expect(Tok::Ident, "variable name").text;
            state.hash_names.insert(q.head_name);
        } else if (at(Tok::Ident)) {
            Token name = advance();
            if (name.text == kAnonymousQueryHead) {
                q.head = QueryHead::Any;
            } else {
                q.head = QueryHead::Literal;
                q.head_name = name.text;
            }
        } else {
            fail(cur(), std::string("expected a query, got ") + token_name(cur().kind));
        }
        if (at(Tok::LBrace)) parse_conditions(q);
        if (at(Tok::LLBracket)) {
            parse_assignment_block(state, AssignmentTarget{AssignmentTarget::Kind::SymbolPos, 0, ""},
                                   false);
        }
        while (at(Tok::Dollar) || at(Tok::Arrow) || at(Tok::Colon)) {
            ProductionPattern prod;
            prod.span = cur().span;
            if (at(Tok::Dollar)) {
                advance();
                prod.has_binder = true;
                if (at(Tok::Ident)) {
                    prod.binder_name = advance().text;
                    if (state.known(prod.binder_name))
                        fail_at(prod.span, "variable '" + prod.binder_name + "' already bound");
                    state.dollar_names.insert(prod.binder_name);
                }
                expect(Tok::Colon, "':'");
            }
            if (!at(Tok::Arrow) && !at(Tok::Colon))
                fail(cur(), std::string("expected ':' or '-->', got ") + token_name(cur().kind));
            advance();
            int index = static_cast<int>(q.productions.size());
            prod.expr = parse_pattern_seq_top(state);
            q.productions.push_back(std::move(prod));
            if (at(Tok::LLBracket)) {
                parse_assignment_block(
                    state, AssignmentTarget{AssignmentTarget::Kind::ProductionPos, index, ""}, true);
            }
        }
        return q;
    }

    void parse_conditions(QueryPattern& q) {
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
            AttributeCondition cond;
            cond.span = cur().span;
            if (at(Tok::Bang)) {
                advance();
                cond.kind = ConditionKind::Absent;
                cond.attr = expect(Tok::Ident, "attribute name").text;
            } else {
                cond.attr = expect(Tok::Ident, "attribute name").text;
                if (at(Tok::Eq)) {
                    advance();
                    cond.kind = ConditionKind::Equals;
                    cond.value = parse_value();
                } else if (at(Tok::Colon)) {
                    advance();
                    Token type = expect(Tok::Ident, "value type");
                    cond.kind = ConditionKind::OfType;
                    if (type.text == "ID") cond.type = ValueKind::Id;
                    else if (type.text == "STRING") cond.type = ValueKind::Str;
                    else if (type.text == "INTEGER") cond.type = ValueKind::Int;
                    else if (type.text == "TUPLE") cond.type = ValueKind::Tuple;
                    else if (type.text == "SEQUENCE") cond.type = ValueKind::Seq;
                    else fail(type, "unknown value type '" + type.text + "'");
                } else {
                    cond.kind = ConditionKind::Present;
                }
            }
            expect(Tok::Semi, "';'");
            q.conditions.push_back(std::move(cond));
        }
        expect(Tok::RBrace, "'}'");
    }

    // A production pattern: a non-empty term sequence, '|' alternation.
    PatternPtr parse_pattern_seq_top(PatternState& state) {
        const Token& t = cur();
        PatternPtr p = parse_pattern_alt(state);
        if (p->kind == PatKind::Sequence && p->children.empty())
            fail(t, "empty production pattern");
        return p;
    }

    bool at_pattern_atom_start() const { return pattern_atom_at(0); }

    PatternPtr parse_pattern_alt(PatternState& state) {
        SourceSpan span = cur().span;
        std::vector<PatternPtr> branches;
        branches.push_back(parse_pattern_seq(state));
        while (at(Tok::Pipe)) {
            advance();
            branches.push_back(parse_pattern_seq(state));
        }
        if (branches.size() == 1) return branches[0];
        auto p = std::make_shared<PatternExpr>();
        p->kind = PatKind::Alternative;
        p->children = std::move(branches);
        p->span = span;
        return p;
    }

    PatternPtr parse_pattern_seq(PatternState& state) {
        SourceSpan span = cur().span;
        std::vector<PatternPtr> terms;
        while (at_pattern_atom_start()) {
            PatternPtr term = parse_pattern_term(state);
            // A '[[' block attaches to this subexpression only when more
            // pattern follows; a block after the last term belongs to the
            // enclosing production.
            if (at(Tok::LLBracket) && pattern_atom_follows_block()) {
                if (!state.allow_annotations)
                    fail(cur(), "metadata assignments are not allowed in a standalone query");
                if (term->kind == PatKind::Wildcard)
                    fail(cur(), "a wildcard cannot carry metadata assignments");
                auto annotated = std::make_shared<PatternExpr>(*term);
                annotated->slot = state.slot_count++;
                parse_assignment_block(
                    state, AssignmentTarget{AssignmentTarget::Kind::SlotPos, annotated->slot, ""},
                    false);
                term = std::move(annotated);
            }
            terms.push_back(std::move(term));
        }
        if (terms.size() == 1) return terms[0];
        auto p = std::make_shared<PatternExpr>();
        p->kind = PatKind::Sequence;
        p->children = std::move(terms);
        p->span = span;
        return p;
    }

    bool pattern_atom_at(std::size_t i) const {
        switch (peek(i).kind) {
            case Tok::Ident:
            case Tok::SqString:
            case Tok::LBracket:
            case Tok::LParen:
            case Tok::Hash:
            case Tok::DotDot:
                return true;
            case Tok::Dollar:
                return peek(i + 1).kind == Tok::Ident && peek(i + 2).kind == Tok::Colon &&
                       peek(i + 3).kind == Tok::LParen;
            default:
                return false;
        }
    }

    // With cur() at '[[', checks whether another pattern atom starts right
    // after the matching ']]'.
    bool pattern_atom_follows_block() const {
        std::size_t i = 0;
        int depth = 0;
        for (;;) {
            Tok k = peek(i).kind;
            if (k == Tok::Eof) return false;
            if (k == Tok::LLBracket) ++depth;
            if (k == Tok::RRBracket && --depth == 0) break;
            ++i;
        }
        return pattern_atom_at(i + 1);
    }

    PatternPtr parse_pattern_term(PatternState& state) {
        PatternPtr p = parse_pattern_atom(state);
        for (;;) {
            IterKind kind;
            if (at(Tok::Question)) kind = IterKind::Option;
            else if (at(Tok::Star)) kind = IterKind::Star;
            else if (at(Tok::Plus)) kind = IterKind::Plus;
            else break;
            if (p->kind == PatKind::Wildcard) fail(cur(), "wildcard cannot be quantified");
            Token q = advance();
            auto it = std::make_shared<PatternExpr>();
            it->kind = PatKind::Iteration;
            it->iter = kind;
            it->children.push_back(std::move(p));
            it->span = q.span;
            p = std::move(it);
        }
        return p;
    }

    PatternPtr parse_pattern_atom(PatternState& state) {
        const Token& t = cur();
        auto p = std::make_shared<PatternExpr>();
        p->span = t.span;
        switch (t.kind) {
            case Tok::Ident:
                p->kind = PatKind::SymbolRef;
                p->name = advance().text;
                return p;
            case Tok::SqString: {
                Token tok = advance();
                if (tok.text.empty()) fail(tok, "empty string literal in pattern");
                p->kind = PatKind::StringLiteral;
                p->name = tok.text;
                return p;
            }
            case Tok::LBracket: {
                ExprPtr cls = parse_char_class();
                p->kind = PatKind::CharClass;
                p->items = cls->items;
                return p;
            }
            case Tok::LParen: {
                advance();
                PatternPtr inner = parse_pattern_alt(state);
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Hash: {
                advance();
                p->kind = PatKind::Var;
                p->name = expect(Tok::Ident, "variable name").text;
                state.hash_names.insert(p->name);
                return p;
            }
            case Tok::DotDot:
                advance();
                p->kind = PatKind::Wildcard;
                return p;
            case Tok::Dollar: {
                advance();
                Token name = expect(Tok::Ident, "variable name");
                if (state.known(name.text))
                    fail(name, "variable '" + name.text + "' already bound");
                state.dollar_names.insert(name.text);
                expect(Tok::Colon, "':'");
                expect(Tok::LParen, "'('");
                PatternPtr inner = parse_pattern_alt(state);
                expect(Tok::RParen, "')'");
                p->kind = PatKind::Binder;
                p->name = name.text;
                p->children.push_back(std::move(inner));
                return p;
            }
            default:
                fail(t, std::string("expected a pattern, got ") + token_name(t.kind));
        }
    }

    void parse_assignment_block(PatternState& state, AssignmentTarget target,
                                bool allow_occurrences) {
        if (!state.allow_annotations)
            fail(cur(), "metadata assignments are not allowed in a standalone query");
        expect(Tok::LLBracket, "'[['");
        while (!at(Tok::RRBracket)) {
            Assignment a;
            a.span = cur().span;
            if (at(Tok::Hash)) {
                if (!allow_occurrences)
                    fail(cur(), "occurrence assignments ('#name.attr') require a production context");
                advance();
                AssignmentTarget occ;
                occ.kind = AssignmentTarget::Kind::Occurrence;
                occ.index = target.index;
                occ.name = expect(Tok::Ident, "symbol or variable name").text;
                expect(Tok::Dot, "'.'");
                a.target = occ;
            } else {
                a.target = target;
            }
            a.attr = expect(Tok::Ident, "attribute name").text;
            a.value = AttributeValue::none();
            if (at(Tok::Eq)) {
                advance();
                a.value = parse_value();
            }
            expect(Tok::Semi, "';'");
            state.assignments.push_back(std::move(a));
        }
        expect(Tok::RRBracket, "']]'");
    }

    void parse_trailing_block(PatternState& state, const QueryPattern& pattern) {
        expect(Tok::LLBracket, "'[['");
        std::vector<std::string> bound = pattern.variable_names();
        while (!at(Tok::RRBracket)) {
            Token var = expect(Tok::Ident, "variable name");
            if (std::find(bound.begin(), bound.end(), var.text) == bound.end())
                fail(var, "unbound variable '" + var.text + "'");
            expect(Tok::LBrace, "'{'");
            while (!at(Tok::RBrace)) {
                Assignment a;
                a.span = cur().span;
                a.target = AssignmentTarget{AssignmentTarget::Kind::VarRef, 0, var.text};
                a.attr = expect(Tok::Ident, "attribute name").text;
                a.value = AttributeValue::none();
                if (at(Tok::Eq)) {
                    advance();
                    a.value = parse_value();
                }
                expect(Tok::Semi, "';'");
                state.assignments.push_back(std::move(a));
            }
            expect(Tok::RBrace, "'}'");
            expect(Tok::Semi, "';'");
        }
        expect(Tok::RRBracket, "']]'");
        expect(Tok::Semi, "';'");
    }
};

}  // namespace

std::size_t ParsedUnit::production_count() const {
    std::size_t n = 0;
    for (const auto& r : rules) n += r->productions.size();
    return n;
}

const char* param_kind_name(ParamKind kind) {
    switch (kind) {
        case ParamKind::Id: return "ID";
        case ParamKind::Expression: return "Expression";
        case ParamKind::Productions: return "Production*";
        case ParamKind::Symbol: return "Symbol";
    }
    return "?";
}

bool structural_equals(const TemplateDef& a, const TemplateDef& b) {
    if (a.name != b.name || a.result_kind != b.result_kind) return false;
    if (a.params.size() != b.params.size() || a.body.size() != b.body.size()) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (a.params[i].kind != b.params[i].kind || a.params[i].name != b.params[i].name) return false;
    for (std::size_t i = 0; i < a.body.size(); ++i) {
        const TemplateRule& ra = a.body[i];
        const TemplateRule& rb = b.body[i];
        if (ra.name != rb.name || ra.name_is_placeholder != rb.name_is_placeholder) return false;
        if (ra.productions.size() != rb.productions.size()) return false;
        for (std::size_t j = 0; j < ra.productions.size(); ++j)
            if (!structural_equals(*ra.productions[j], *rb.productions[j])) return false;
    }
    return true;
}

bool structural_equals(const ImportDecl& a, const ImportDecl& b) {
    if (a.target != b.target || a.is_instantiation != b.is_instantiation) return false;
    if (a.args.size() != b.args.size()) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i].productions.size() != b.args[i].productions.size()) return false;
        for (std::size_t j = 0; j < a.args[i].productions.size(); ++j)
            if (!structural_equals(*a.args[i].productions[j], *b.args[i].productions[j])) return false;
    }
    return true;
}

bool structural_equals(const ParsedUnit& a, const ParsedUnit& b) {
    if (a.imports.size() != b.imports.size() || a.templates.size() != b.templates.size() ||
        a.rules.size() != b.rules.size())
        return false;
    for (std::size_t i = 0; i < a.imports.size(); ++i)
        if (!structural_equals(a.imports[i], b.imports[i])) return false;
    for (std::size_t i = 0; i < a.templates.size(); ++i)
        if (!structural_equals(*a.templates[i], *b.templates[i])) return false;
    for (std::size_t i = 0; i < a.rules.size(); ++i)
        if (!structural_equals(*a.rules[i], *b.rules[i])) return false;
    return true;
}

namespace {
void collect_pattern_vars(const PatternExpr& p, std::vector<std::string>& out) {
    if (p.kind == PatKind::Var || p.kind == PatKind::Binder) {
        if (std::find(out.begin(), out.end(), p.name) == out.end()) out.push_back(p.name);
    }
    for (const auto& c : p.children) collect_pattern_vars(*c, out);
}
}  // namespace

std::vector<std::string> QueryPattern::variable_names() const {
    std::vector<std::string> out;
    if (head == QueryHead::Var) out.push_back(head_name);
    for (const auto& prod : productions) {
        if (prod.has_binder && !prod.binder_name.empty() &&
            std::find(out.begin(), out.end(), prod.binder_name) == out.end())
            out.push_back(prod.binder_name);
        if (prod.expr) collect_pattern_vars(*prod.expr, out);
    }
    return out;
}

ParsedUnit parse_grammar(std::string_view text, const std::string& file) {
    return Parser(text, file).parse_unit();
}

Aspect parse_aspect(std::string_view text, const std::string& file) {
    return Parser(text, file).parse_aspect_file();
}

QueryPattern parse_query(std::string_view text, const std::string& file) {
    return Parser(text, file).parse_query_only();
}

AttributeValue parse_attribute_value(std::string_view text, const std::string& file) {
    return Parser(text, file).parse_value_only();
}

Annotation parse_annotation(std::string_view text, const std::string& file) {
    return Parser(text, file).parse_annotation_only();
}

}  // namespace grammatic
