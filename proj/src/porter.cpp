// Porter stemming algorithm (1980), including the two small revisions found
// in the reference implementation (bli -> ble, logi -> log).

#include <array>
#include <string>
#include <string_view>

#include "semsearch/text.hpp"

namespace semsearch {

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(w, i - 1);
        default:
            return true;
    }
}

// The measure m of w[0, len): number of vowel-run -> consonant-run
// transitions, i.e. m in [C](VC)^m[V].
int measure(const std::string& w, std::size_t len) {
    int m = 0;
    bool seen_vowel = false;
    for (std::size_t i = 0; i < len; ++i) {
        if (!is_consonant(w, i)) {
            seen_vowel = true;
        } else if (seen_vowel) {
            ++m;
            seen_vowel = false;
        }
    }
    return m;
}

bool contains_vowel(const std::string& w, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        if (!is_consonant(w, i)) return true;
    }
    return false;
}

bool ends_double_consonant(const std::string& w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant at the end of w[0, len), final consonant not
// one of w, x, y.
bool ends_cvc(const std::string& w, std::size_t len) {
    if (len < 3) return false;
    if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) {
        return false;
    }
    char last = w[len - 1];
    return last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

// Within a step the longest matching suffix decides; if its measure
// condition fails no other rule of the step applies. Lists are ordered so a
// suffix never precedes a longer suffix it terminates.
void apply_rule_list(std::string& w, const Rule* rules, std::size_t count, int min_measure) {
    for (std::size_t i = 0; i < count; ++i) {
        const Rule& rule = rules[i];
        if (!ends_with(w, rule.suffix)) continue;
        std::size_t stem_len = w.size() - rule.suffix.size();
        if (measure(w, stem_len) > min_measure) {
            w.resize(stem_len);
            w.append(rule.replacement);
        }
        return;
    }
}

void step_1a(std::string& w) {
    if (ends_with(w, "sses")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
        // keep
    } else if (ends_with(w, "s")) {
        w.pop_back();
    }
}

void step_1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(w, w.size() - 3) > 0) w.pop_back();
        return;
    }
    bool stripped = false;
    if (ends_with(w, "ed") && contains_vowel(w, w.size() - 2)) {
        w.resize(w.size() - 2);
        stripped = true;
    } else if (ends_with(w, "ing") && contains_vowel(w, w.size() - 3)) {
        w.resize(w.size() - 3);
        stripped = true;
    }
    if (!stripped) return;
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w.push_back('e');
    } else if (ends_double_consonant(w)) {
        char last = w.back();
        if (last != 'l' && last != 's' && last != 'z') w.pop_back();
    } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
        w.push_back('e');
    }
}

void step_1c(std::string& w) {
    if (ends_with(w, "y") && contains_vowel(w, w.size() - 1)) w.back() = 'i';
}

void step_2(std::string& w) {
    static constexpr std::array<Rule, 21> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"bli", "ble"},     {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        {"logi", "log"},
    }};
    apply_rule_list(w, rules.data(), rules.size(), 0);
}

void step_3(std::string& w) {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    }};
    apply_rule_list(w, rules.data(), rules.size(), 0);
}

void step_4(std::string& w) {
    static constexpr std::array<Rule, 19> rules{{
        {"al", ""},    {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},
        {"able", ""},  {"ible", ""}, {"ant", ""},  {"ement", ""}, {"ment", ""},
        {"ent", ""},   {"ion", ""},  {"ou", ""},   {"ism", ""}, {"ate", ""},
        {"iti", ""},   {"ous", ""},  {"ive", ""},  {"ize", ""},
    }};
    for (const Rule& rule : rules) {
        if (!ends_with(w, rule.suffix)) continue;
        std::size_t stem_len = w.size() - rule.suffix.size();
        if (rule.suffix == "ion" &&
            !(stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't'))) {
            return;
        }
        if (measure(w, stem_len) > 1) w.resize(stem_len);
        return;
    }
}

void step_5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    std::size_t stem_len = w.size() - 1;
    int m = measure(w, stem_len);
    if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) w.pop_back();
}

void step_5b(std::string& w) {
    if (w.back() == 'l' && ends_double_consonant(w) && measure(w, w.size()) > 1) {
        w.pop_back();
    }
}

}  // namespace

std::string porter_stem(std::string word) {
    if (word.size() <= 2) return word;
    step_1a(word);
    step_1b(word);
    step_1c(word);
    step_2(word);
    step_3(word);
    step_4(word);
    step_5a(word);
    step_5b(word);
    return word;
}

}  // namespace semsearch
