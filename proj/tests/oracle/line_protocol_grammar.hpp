#pragma once

// Independent checker for the exported line protocol:
//   measurement(,tag=value)* SP field=value(,field=value)* SP timestamp
// Tags sorted by key, fields sorted by key, float values only, integer ns
// timestamps, one point per line, trailing newline.

#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

struct GrammarReport {
    std::size_t lines = 0;
    std::vector<std::string> errors;
};

inline std::vector<std::string> split_unescaped(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            cur += s[i];
            cur += s[++i];
        } else if (s[i] == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += s[i];
        }
    }
    parts.push_back(cur);
    return parts;
}

inline GrammarReport check_line_protocol(const std::string& text) {
    static const std::regex ident(R"((?:[^,= \\]|\\[,= \\])+)");
    static const std::regex measurement(R"((?:[^, \\]|\\[, \\])+)");
    static const std::regex number(R"(-?(?:\d+\.\d*|\d*\.\d+|\d+)(?:e[+-]?\d+)?|-?\d+e[+-]?\d+|nan|-?inf)");
    static const std::regex timestamp(R"(-?\d+)");

    GrammarReport rep;
    if (!text.empty() && text.back() != '\n') rep.errors.push_back("missing trailing newline");
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        ++rep.lines;
        const std::string where = "line " + std::to_string(rep.lines) + ": ";
        const auto sections = split_unescaped(line, ' ');
        if (sections.size() != 3) {
            rep.errors.push_back(where + "expected 3 space-separated sections");
            continue;
        }
        const auto head = split_unescaped(sections[0], ',');
        if (!std::regex_match(head[0], measurement)) rep.errors.push_back(where + "bad measurement");
        std::string prev_key;
        for (std::size_t i = 1; i < head.size(); ++i) {
            const auto kv = split_unescaped(head[i], '=');
            if (kv.size() != 2 || !std::regex_match(kv[0], ident) || !std::regex_match(kv[1], ident)) {
                rep.errors.push_back(where + "bad tag '" + head[i] + "'");
                continue;
            }
            if (i > 1 && !(prev_key < kv[0])) rep.errors.push_back(where + "tags not sorted");
            prev_key = kv[0];
        }
        const auto fields = split_unescaped(sections[1], ',');
        prev_key.clear();
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto kv = split_unescaped(fields[i], '=');
            if (kv.size() != 2 || !std::regex_match(kv[0], ident) || !std::regex_match(kv[1], number)) {
                rep.errors.push_back(where + "bad field '" + fields[i] + "'");
                continue;
            }
            if (i > 0 && !(prev_key < kv[0])) rep.errors.push_back(where + "fields not sorted");
            prev_key = kv[0];
        }
        if (!std::regex_match(sections[2], timestamp)) rep.errors.push_back(where + "bad timestamp");
    }
    return rep;
}

}  // namespace oracle
