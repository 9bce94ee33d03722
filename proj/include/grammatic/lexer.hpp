#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "grammatic/source.hpp"

namespace grammatic {

enum class Tok {
    Ident,
    Int,
    SqString,   // '...' with escapes, text stored unescaped (may be empty)
    DqString,   // "..." with escapes
    Verbatim,   // <<...>> raw, one leading/trailing newline trimmed
    Colon,
    Semi,
    Arrow,      // -->
    PipePipe,   // ||
    Pipe,
    LParen,
    RParen,
    Question,
    Star,
    Plus,
    LBracket,   // [
    RBracket,   // ]
    LLBracket,  // [[
    RRBracket,  // ]]
    RangeOp,    // --
    LBrace,
    RBrace,
    LLBrace,    // {{
    RRBrace,    // }}
    Lt,
    Gt,
    Comma,
    Dot,
    DotDot,     // ..
    Eq,
    Bang,
    Hash,
    Dollar,
    Caret,
    Minus,
    Slash,
    At,
    Amp,
    Percent,
    Eof,
};

const char* token_name(Tok kind);

struct Token {
    Tok kind = Tok::Eof;
    std::string text;       // ident name, unescaped string text, digits
    long long num = 0;      // Int only
    SourceSpan span;
};

// Tokenizes a whole input. CRLF is normalized to LF first; // comments run
// to end of line. Throws Error on bad escapes, unterminated literals,
// integer overflow and unknown characters.
std::vector<Token> lex(std::string_view text, const std::string& file);

}  // namespace grammatic
