#pragma once

#include <stdexcept>
#include <string>

namespace grammatic {

// Half-open in spirit but stored inclusive: start and end positions are
// 1-based line/column of the first and last character of the region.
struct SourceSpan {
    std::string file;
    int line = 0;
    int col = 0;
    int end_line = 0;
    int end_col = 0;

    bool valid() const { return line > 0; }

    std::string str() const {
        if (!valid()) return file.empty() ? "<generated>" : file;
        return file + ":" + std::to_string(line) + ":" + std::to_string(col);
    }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    SourceSpan span;
    Severity severity = Severity::Error;
    std::string message;

    // file:line:col: severity: message
    std::string str() const {
        std::string head = span.valid() ? span.str() : (span.file.empty() ? std::string("<input>") : span.file);
        return head + ": " + (severity == Severity::Error ? "error" : "warning") + ": " + message;
    }
};

class Error : public std::runtime_error {
public:
    Error(SourceSpan span, std::string message)
        : std::runtime_error(Diagnostic{span, Severity::Error, message}.str()),
          diag_{std::move(span), Severity::Error, std::move(message)} {}

    explicit Error(std::string message) : Error(SourceSpan{}, std::move(message)) {}

    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

}  // namespace grammatic
