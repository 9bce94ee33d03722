#include "grammatic/lexer.hpp"

#include <cctype>
#include <limits>

namespace grammatic {

const char* token_name(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Int: return "integer";
        case Tok::SqString: return "string literal";
        case Tok::DqString: return "string literal";
        case Tok::Verbatim: return "verbatim string";
        case Tok::Colon: return "':'";
        case Tok::Semi: return "';'";
        case Tok::Arrow: return "'-->'";
        case Tok::PipePipe: return "'||'";
        case Tok::Pipe: return "'|'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Question: return "'?'";
        case Tok::Star: return "'*'";
        case Tok::Plus: return "'+'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::LLBracket: return "'[['";
        case Tok::RRBracket: return "']]'";
        case Tok::RangeOp: return "'--'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LLBrace: return "'{{'";
        case Tok::RRBrace: return "'}}'";
        case Tok::Lt: return "'<'";
        case Tok::Gt: return "'>'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::DotDot: return "'..'";
        case Tok::Eq: return "'='";
        case Tok::Bang: return "'!'";
        case Tok::Hash: return "'#'";
        case Tok::Dollar: return "'$'";
        case Tok::Caret: return "'^'";
        case Tok::Minus: return "'-'";
        case Tok::Slash: return "'/'";
        case Tok::At: return "'@'";
        case Tok::Amp: return "'&'";
        case Tok::Percent: return "'%'";
        case Tok::Eof: return "end of input";
    }
    return "?";
}

namespace {

class Lexer {
public:
    Lexer(std::string text, std::string file) : text_(std::move(text)), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_trivia();
            if (eof()) {
                out.push_back(make(Tok::Eof, line_, col_));
                return out;
            }
            out.push_back(next_token());
        }
    }

private:
    std::string text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;

    bool eof() const { return pos_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    SourceSpan here() const { return SourceSpan{file_, line_, col_, line_, col_}; }

    Token make(Tok kind, int start_line, int start_col) const {
        Token t;
        t.kind = kind;
        t.span = SourceSpan{file_, start_line, start_col, line_, col_ > 1 ? col_ - 1 : col_};
        return t;
    }

    void skip_trivia() {
        for (;;) {
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
            if (peek() == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') advance();
                continue;
            }
            return;
        }
    }

    bool match(char a) {
        if (peek() == a) {
            advance();
            return true;
        }
        return false;
    }

    Token next_token() {
        int sl = line_, sc = col_;
        char c = peek();

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident(sl, sc);
        if (std::isdigit(static_cast<unsigned char>(c))) return integer(sl, sc);
        if (c == '\'') return quoted('\'', Tok::SqString, sl, sc);
        if (c == '"') return quoted('"', Tok::DqString, sl, sc);

        advance();
        switch (c) {
            case ':': return make(Tok::Colon, sl, sc);
            case ';': return make(Tok::Semi, sl, sc);
            case ',': return make(Tok::Comma, sl, sc);
            case '(': return make(Tok::LParen, sl, sc);
            case ')': return make(Tok::RParen, sl, sc);
            case '?': return make(Tok::Question, sl, sc);
            case '*': return make(Tok::Star, sl, sc);
            case '+': return make(Tok::Plus, sl, sc);
            case '=': return make(Tok::Eq, sl, sc);
            case '!': return make(Tok::Bang, sl, sc);
            case '#': return make(Tok::Hash, sl, sc);
            case '$': return make(Tok::Dollar, sl, sc);
            case '^': return make(Tok::Caret, sl, sc);
            case '/': return make(Tok::Slash, sl, sc);
            case '@': return make(Tok::At, sl, sc);
            case '&': return make(Tok::Amp, sl, sc);
            case '%': return make(Tok::Percent, sl, sc);
            case '>': return make(Tok::Gt, sl, sc);
            case '|': return make(match('|') ? Tok::PipePipe : Tok::Pipe, sl, sc);
            case '[': return make(match('[') ? Tok::LLBracket : Tok::LBracket, sl, sc);
            case ']': return make(match(']') ? Tok::RRBracket : Tok::RBracket, sl, sc);
            case '{': return make(match('{') ? Tok::LLBrace : Tok::LBrace, sl, sc);
            case '}': return make(match('}') ? Tok::RRBrace : Tok::RBrace, sl, sc);
            case '.': return make(match('.') ? Tok::DotDot : Tok::Dot, sl, sc);
            case '<':
                if (match('<')) return verbatim(sl, sc);
                return make(Tok::Lt, sl, sc);
            case '-':
                if (match('-')) {
                    if (match('>')) return make(Tok::Arrow, sl, sc);
                    return make(Tok::RangeOp, sl, sc);
                }
                return make(Tok::Minus, sl, sc);
            default:
                throw Error(SourceSpan{file_, sl, sc, sl, sc},
                            std::string("unexpected character '") + c + "'");
        }
    }

    Token ident(int sl, int sc) {
        std::string name;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            name += advance();
        Token t = make(Tok::Ident, sl, sc);
        t.text = std::move(name);
        return t;
    }

    Token integer(int sl, int sc) {
        std::string digits;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
        Token t = make(Tok::Int, sl, sc);
        long long value = 0;
        for (char d : digits) {
            int v = d - '0';
            if (value > (std::numeric_limits<long long>::max() - v) / 10)
                throw Error(t.span, "integer literal out of range");
            value = value * 10 + v;
        }
        t.num = value;
        t.text = std::move(digits);
        return t;
    }

    Token quoted(char quote, Tok kind, int sl, int sc) {
        advance();  // opening quote
        std::string value;
        for (;;) {
            if (eof() || peek() == '\n')
                throw Error(SourceSpan{file_, sl, sc, line_, col_}, "unterminated string literal");
            char c = advance();
            if (c == quote) break;
            if (c == '\\') {
                if (eof())
                    throw Error(SourceSpan{file_, sl, sc, line_, col_}, "unterminated string literal");
                char e = advance();
                switch (e) {
                    case 'r': value += '\r'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case '\\': value += '\\'; break;
                    case '\'': value += '\''; break;
                    case '"': value += '"'; break;
                    default:
                        throw Error(SourceSpan{file_, line_, col_ - 2, line_, col_ - 1},
                                    std::string("bad escape '\\") + e + "'");
                }
            } else {
                value += c;
            }
        }
        Token t = make(kind, sl, sc);
        t.text = std::move(value);
        return t;
    }

    // Raw text up to the first '>>'. One leading and one trailing newline
    // (with surrounding same-line blanks) are trimmed; interior whitespace
    // is preserved exactly.
    Token verbatim(int sl, int sc) {
        std::string value;
        for (;;) {
            if (eof())
                throw Error(SourceSpan{file_, sl, sc, line_, col_}, "unterminated verbatim string");
            if (peek() == '>' && peek(1) == '>') {
                advance();
                advance();
                break;
            }
            value += advance();
        }
        std::size_t i = 0;
        while (i < value.size() && (value[i] == ' ' || value[i] == '\t')) ++i;
        if (i < value.size() && value[i] == '\n') value.erase(0, i + 1);
        std::size_t j = value.size();
        while (j > 0 && (value[j - 1] == ' ' || value[j - 1] == '\t')) --j;
        if (j > 0 && value[j - 1] == '\n') value.erase(j - 1);
        Token t = make(Tok::Verbatim, sl, sc);
        t.text = std::move(value);
        return t;
    }
};

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file) {
    std::string normalized;
    normalized.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') continue;
        normalized += text[i];
    }
    return Lexer(std::move(normalized), file).run();
}

}  // namespace grammatic
