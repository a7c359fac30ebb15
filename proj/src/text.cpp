#include "semsearch/text.hpp"

#include <cctype>
#include <fstream>

#include "semsearch/error.hpp"

namespace semsearch {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

}  // namespace

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string normalize_surface(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char raw : text) {
        unsigned char c = static_cast<unsigned char>(raw);
        if (c < 0x80 && std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        if (raw >= 'A' && raw <= 'Z') raw = static_cast<char>(raw - 'A' + 'a');
        out.push_back(raw);
    }
    return out;
}

std::vector<std::string> tokenize_lower(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char raw : text) {
        if (is_word_byte(static_cast<unsigned char>(raw))) {
            if (raw >= 'A' && raw <= 'Z') raw = static_cast<char>(raw - 'A' + 'a');
            current.push_back(raw);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

const StopwordSet& default_stopwords() {
    static const StopwordSet words = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",    "but",  "by",
        "does", "for",  "from", "had",  "has",  "have", "how",   "in",   "into",
        "is",   "it",   "many", "no",   "not",  "of",   "on",    "or",   "that",
        "the",  "this", "to",   "what", "where", "with",
    };
    return words;
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open stopword file: " + path);
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string token = normalize_surface(line);
        if (token.empty() || token.front() == '#') continue;
        words.insert(token);
    }
    return words;
}

std::vector<std::string> normalize_text(std::string_view text, const StopwordSet& stopwords) {
    std::vector<std::string> terms;
    for (std::string& token : tokenize_lower(text)) {
        if (stopwords.count(token) != 0) continue;
        terms.push_back(porter_stem(std::move(token)));
    }
    return terms;
}

std::vector<std::string> normalize_text(std::string_view text) {
    return normalize_text(text, default_stopwords());
}

}  // namespace semsearch
