#pragma once

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Whitespace-normalized comparison: runs of whitespace collapse to one
// space, leading/trailing whitespace dropped.
inline std::string normalize_ws(const std::string& text) {
    std::string out;
    bool in_ws = true;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
            continue;
        }
        if (in_ws && !out.empty()) out += ' ';
        in_ws = false;
        out += c;
    }
    return out;
}

// Renames ANTLR occurrence labels so texts compare modulo label naming:
// every identifier directly followed by '=' and a letter (label=rule) is
// mapped to L1, L2, ... in order of first appearance, and all whole-word
// uses of it (including inside actions) are renamed.
inline std::string canonical_labels(const std::string& text) {
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    std::map<std::string, std::string> renames;
    int next = 1;
    for (std::size_t i = 0; i < text.size();) {
        if (!is_word(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word(text[j])) ++j;
        std::string word = text.substr(i, j - i);
        if (j < text.size() && text[j] == '=' && j + 1 < text.size() && text[j + 1] != '=' &&
            std::isalpha(static_cast<unsigned char>(text[j + 1])) && !renames.count(word)) {
            renames[word] = "L" + std::to_string(next++);
        }
        i = j;
    }
    std::string out;
    for (std::size_t i = 0; i < text.size();) {
        if (!is_word(text[i])) {
            out += text[i++];
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word(text[j])) ++j;
        std::string word = text.substr(i, j - i);
        auto it = renames.find(word);
        out += it == renames.end() ? word : it->second;
        i = j;
    }
    return out;
}

inline std::string normalized(const std::string& text) {
    return normalize_ws(canonical_labels(text));
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

inline std::string cli_path() {
    const char* env = std::getenv("GRAMMATIC_CLI");
    return env ? env : "./build/tools/grammatic";
}

inline std::string testdata(const std::string& name) {
    const char* env = std::getenv("GRAMMATIC_TESTDATA");
    return (env ? std::string(env) : std::string("testdata")) + "/" + name;
}

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

inline CliResult run_cli(const std::vector<std::string>& args) {
    static int counter = 0;
    std::string out_file = "/tmp/grammatic_test_out_" + std::to_string(++counter);
    std::string err_file = "/tmp/grammatic_test_err_" + std::to_string(counter);
    std::string cmd = shell_quote(cli_path());
    for (const auto& a : args) cmd += " " + shell_quote(a);
    cmd += " > " + out_file + " 2> " + err_file;
    int status = std::system(cmd.c_str());
    CliResult result;
    result.code = WEXITSTATUS(status);
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    std::remove(out_file.c_str());
    std::remove(err_file.c_str());
    return result;
}

}  // namespace testutil
