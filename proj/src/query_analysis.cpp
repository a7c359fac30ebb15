#include "semsearch/query_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "semsearch/text.hpp"

namespace semsearch {

namespace {

constexpr std::size_t kPhraseWindow = 8;        // max span of a relation phrase, in tokens
constexpr const char* kGapMarker = "\xe2\x80\xa6";  // U+2026 ellipsis

std::vector<std::string> split_whitespace(const std::string& text) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    std::string part;
    while (in >> part) parts.push_back(part);
    return parts;
}

std::vector<std::string> read_lines(std::istream& in, const std::string& name) {
    if (!in) throw DataError(ErrorKind::Io, "cannot read " + name);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool skip_line(const std::string& line) {
    return line.find_first_not_of(" \t") == std::string::npos || line.front() == '#';
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

std::string join_tokens(const std::vector<Token>& tokens, TokenSpan span) {
    std::string out;
    for (std::size_t i = span.begin; i < span.end; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += tokens[i].text;
    }
    return out;
}

}  // namespace

const char* to_string(Side side) { return side == Side::Subject ? "subject" : "object"; }

bool spans_overlap(TokenSpan a, TokenSpan b) { return a.begin < b.end && b.begin < a.end; }

std::size_t span_distance(TokenSpan a, TokenSpan b) {
    if (spans_overlap(a, b)) return 0;
    return a.end <= b.begin ? b.begin - a.end : a.begin - b.end;
}

std::vector<Token> tokenize_spans(std::string_view raw) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
        if (!is_word_byte(static_cast<unsigned char>(raw[i]))) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < raw.size() && is_word_byte(static_cast<unsigned char>(raw[i]))) ++i;
        tokens.push_back(Token{std::string(raw.substr(begin, i - begin)), begin, i});
    }
    return tokens;
}

std::size_t RelationPhraseEntry::token_count() const {
    std::size_t count = 0;
    for (const auto& group : groups) count += group.size();
    return count;
}

PhraseDictionary load_phrase_dictionary(std::istream& in, const std::string& name,
                                        const KnowledgeBase& kb) {
    std::vector<RelationPhraseEntry> entries;
    std::size_t line_no = 0;
    for (const std::string& line : read_lines(in, name)) {
        ++line_no;
        if (skip_line(line)) continue;
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 3) {
            throw DataError(ErrorKind::Parse, name + ":" + std::to_string(line_no) +
                                                  ": expected `phrase<TAB>relation<TAB>side`");
        }
        RelationPhraseEntry entry;
        entry.phrase = fields[0];
        entry.relation = fields[1];
        if (fields[2] == "subject") {
            entry.unknown_side = Side::Subject;
        } else if (fields[2] == "object") {
            entry.unknown_side = Side::Object;
        } else {
            throw DataError(ErrorKind::Parse, name + ":" + std::to_string(line_no) +
                                                  ": side must be subject or object");
        }
        if (!kb.has_relation(entry.relation)) {
            throw DataError(ErrorKind::UnknownReference,
                            name + ":" + std::to_string(line_no) + ": unknown relation " +
                                entry.relation);
        }
        std::vector<std::string> group;
        for (const std::string& word : split_whitespace(fields[0])) {
            if (word == kGapMarker) {
                if (group.empty()) {
                    throw DataError(ErrorKind::Parse, name + ":" + std::to_string(line_no) +
                                                          ": empty phrase group");
                }
                entry.groups.push_back(std::move(group));
                group.clear();
            } else {
                group.push_back(ascii_lower(word));
            }
        }
        if (group.empty()) {
            throw DataError(ErrorKind::Parse,
                            name + ":" + std::to_string(line_no) + ": empty phrase group");
        }
        entry.groups.push_back(std::move(group));
        entries.push_back(std::move(entry));
    }
    return PhraseDictionary(std::move(entries));
}

PhraseDictionary load_phrase_dictionary(const std::string& path, const KnowledgeBase& kb) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open " + path);
    return load_phrase_dictionary(in, path, kb);
}

ClassLexicon load_class_lexicon(std::istream& in, const std::string& name,
                                const KnowledgeBase& kb) {
    std::vector<ClassRule> rules;
    std::size_t line_no = 0;
    for (const std::string& line : read_lines(in, name)) {
        ++line_no;
        if (skip_line(line)) continue;
        std::vector<std::string> fields = split_tabs(line);
        if (fields.size() != 3) {
            throw DataError(ErrorKind::Parse, name + ":" + std::to_string(line_no) +
                                                  ": expected `surface<TAB>class_id<TAB>kind`");
        }
        ClassRule rule;
        for (const std::string& word : split_whitespace(fields[0])) {
            rule.surface_tokens.push_back(ascii_lower(word));
        }
        if (rule.surface_tokens.empty()) {
            throw DataError(ErrorKind::Parse,
                            name + ":" + std::to_string(line_no) + ": empty surface");
        }
        rule.class_id = fields[1];
        if (!kb.has_class(rule.class_id)) {
            throw DataError(ErrorKind::UnknownReference, name + ":" + std::to_string(line_no) +
                                                             ": unknown class " + rule.class_id);
        }
        if (fields[2] == "wh") {
            rule.kind = ClassRule::Kind::WhWord;
        } else if (fields[2] == "noun") {
            rule.kind = ClassRule::Kind::ClassNoun;
        } else {
            throw DataError(ErrorKind::Parse,
                            name + ":" + std::to_string(line_no) + ": kind must be wh or noun");
        }
        rules.push_back(std::move(rule));
    }
    return ClassLexicon(std::move(rules));
}

ClassLexicon load_class_lexicon(const std::string& path, const KnowledgeBase& kb) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open " + path);
    return load_class_lexicon(in, path, kb);
}

namespace {

bool group_matches_at(const std::vector<std::string>& lower_tokens,
                      const std::vector<std::string>& group, std::size_t at) {
    if (at + group.size() > lower_tokens.size()) return false;
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (lower_tokens[at + i] != group[i]) return false;
    }
    return true;
}

// Leftmost placement of all groups starting at `start`; returns the end
// token index (exclusive) or 0 when no placement fits the window.
std::size_t match_groups(const std::vector<std::string>& lower_tokens,
                         const RelationPhraseEntry& entry, std::size_t start) {
    if (!group_matches_at(lower_tokens, entry.groups.front(), start)) return 0;
    std::size_t pos = start + entry.groups.front().size();
    for (std::size_t g = 1; g < entry.groups.size(); ++g) {
        const auto& group = entry.groups[g];
        std::size_t found = lower_tokens.size();
        for (std::size_t at = pos; at + group.size() <= lower_tokens.size(); ++at) {
            if (at + group.size() - start > kPhraseWindow) break;
            if (group_matches_at(lower_tokens, group, at)) {
                found = at;
                break;
            }
        }
        if (found == lower_tokens.size()) return 0;
        pos = found + group.size();
    }
    if (pos - start > kPhraseWindow) return 0;
    return pos;
}

}  // namespace

std::vector<RelationMention> detect_relation_mentions(const std::vector<Token>& tokens,
                                                      const PhraseDictionary& dict) {
    std::vector<std::string> lower;
    lower.reserve(tokens.size());
    for (const Token& token : tokens) lower.push_back(ascii_lower(token.text));

    std::vector<RelationMention> candidates;
    for (const RelationPhraseEntry& entry : dict.entries()) {
        for (std::size_t start = 0; start < lower.size(); ++start) {
            std::size_t end = match_groups(lower, entry, start);
            if (end != 0) candidates.push_back(RelationMention{{start, end}, entry});
        }
    }

    // Longest phrase wins at overlapping spans; earlier start breaks ties.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const RelationMention& a, const RelationMention& b) {
                         std::size_t na = a.entry.token_count();
                         std::size_t nb = b.entry.token_count();
                         if (na != nb) return na > nb;
                         if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
                         return a.entry.phrase < b.entry.phrase;
                     });
    std::vector<RelationMention> kept;
    for (RelationMention& candidate : candidates) {
        bool overlaps = std::any_of(kept.begin(), kept.end(), [&](const RelationMention& k) {
            return spans_overlap(k.span, candidate.span);
        });
        if (!overlaps) kept.push_back(std::move(candidate));
    }
    std::sort(kept.begin(), kept.end(), [](const RelationMention& a, const RelationMention& b) {
        return a.span.begin < b.span.begin;
    });
    return kept;
}

std::vector<EntityMention> detect_entity_mentions(const std::vector<Token>& tokens,
                                                  const KnowledgeBase& kb) {
    std::vector<EntityMention> mentions;
    std::size_t window = kb.max_alias_tokens();
    if (window == 0) return mentions;
    std::size_t i = 0;
    while (i < tokens.size()) {
        std::size_t longest = std::min(window, tokens.size() - i);
        bool matched = false;
        for (std::size_t len = longest; len >= 1 && !matched; --len) {
            TokenSpan span{i, i + len};
            std::string surface = join_tokens(tokens, span);
            std::set<std::string> ids = kb.entities_by_alias(surface);
            if (ids.empty()) continue;
            for (const std::string& id : ids) {
                mentions.push_back(EntityMention{span, surface, id});
            }
            i += len;
            matched = true;
        }
        if (!matched) ++i;
    }
    return mentions;
}

std::vector<ClassMention> detect_class_mentions(const std::vector<Token>& tokens,
                                                const ClassLexicon& lexicon) {
    std::vector<std::string> lower;
    lower.reserve(tokens.size());
    for (const Token& token : tokens) lower.push_back(ascii_lower(token.text));

    std::vector<ClassMention> mentions;
    for (const ClassRule& rule : lexicon.rules()) {
        for (std::size_t start = 0; start + rule.surface_tokens.size() <= lower.size(); ++start) {
            if (group_matches_at(lower, rule.surface_tokens, start)) {
                mentions.push_back(ClassMention{{start, start + rule.surface_tokens.size()},
                                                rule.class_id, rule.kind});
            }
        }
    }
    std::stable_sort(mentions.begin(), mentions.end(),
                     [](const ClassMention& a, const ClassMention& b) {
                         return a.span.begin < b.span.begin;
                     });
    return mentions;
}

namespace {

// target class compatible with the relation slot when one contains the other
bool classes_compatible(const KnowledgeBase& kb, const std::string& target,
                        const std::string& slot) {
    return kb.is_subclass(target, slot) || kb.is_subclass(slot, target);
}

bool pattern_valid(const KnowledgeBase& kb, const RelationPattern& pattern) {
    const RelationType& rel = kb.relation(pattern.relation);
    const std::string& anchor_class = kb.class_of(pattern.anchor);
    if (pattern.anchor_role == Side::Subject) {
        return kb.is_subclass(anchor_class, rel.domain_class) &&
               classes_compatible(kb, pattern.target_class, rel.range_class);
    }
    return kb.is_subclass(anchor_class, rel.range_class) &&
           classes_compatible(kb, pattern.target_class, rel.domain_class);
}

}  // namespace

std::vector<RelationPattern> build_patterns(const std::vector<RelationMention>& relations,
                                            const std::vector<EntityMention>& entities,
                                            const std::vector<ClassMention>& classes,
                                            const KnowledgeBase& kb,
                                            std::vector<std::string>* notes) {
    auto note = [notes](const std::string& text) {
        if (notes != nullptr) notes->push_back(text);
    };

    std::vector<RelationPattern> patterns;
    for (const RelationMention& rel : relations) {
        if (entities.empty()) {
            note("relation " + rel.entry.relation + ": no entity mention to anchor");
            continue;
        }
        if (classes.empty()) {
            note("relation " + rel.entry.relation + ": no class mention for the open slot");
            continue;
        }

        // nearest entity span (ties leftward); every entity on that span is
        // a candidate anchor
        TokenSpan best_span{};
        std::size_t best_distance = std::numeric_limits<std::size_t>::max();
        for (const EntityMention& mention : entities) {
            std::size_t distance = span_distance(rel.span, mention.span);
            if (distance < best_distance ||
                (distance == best_distance && mention.span.begin < best_span.begin)) {
                best_distance = distance;
                best_span = mention.span;
            }
        }

        const ClassMention* best_class = nullptr;
        std::size_t best_class_distance = std::numeric_limits<std::size_t>::max();
        for (const ClassMention& mention : classes) {
            std::size_t distance = span_distance(rel.span, mention.span);
            if (distance < best_class_distance ||
                (distance == best_class_distance && best_class != nullptr &&
                 mention.span.begin < best_class->span.begin)) {
                best_class_distance = distance;
                best_class = &mention;
            }
        }

        Side anchor_role =
            rel.entry.unknown_side == Side::Subject ? Side::Object : Side::Subject;
        for (const EntityMention& mention : entities) {
            if (!(mention.span == best_span)) continue;
            RelationPattern pattern{mention.entity, rel.entry.relation, best_class->class_id,
                                    anchor_role};
            if (pattern_valid(kb, pattern)) {
                patterns.push_back(std::move(pattern));
            } else {
                note("dropped incompatible pattern: anchor=" + mention.entity +
                     " relation=" + rel.entry.relation + " target=" + best_class->class_id +
                     " anchor_role=" + to_string(anchor_role));
            }
        }
    }
    return patterns;
}

std::vector<std::string> QueryAnalysis::mentioned_entities() const {
    std::vector<std::string> ids;
    for (const EntityMention& mention : entity_mentions) {
        if (std::find(ids.begin(), ids.end(), mention.entity) == ids.end()) {
            ids.push_back(mention.entity);
        }
    }
    return ids;
}

QueryAnalysis analyze_query(std::string_view raw, const KnowledgeBase& kb,
                            const PhraseDictionary& dict, const ClassLexicon& lexicon) {
    QueryAnalysis analysis;
    analysis.raw = std::string(raw);
    analysis.tokens = tokenize_spans(raw);
    analysis.relation_mentions = detect_relation_mentions(analysis.tokens, dict);
    analysis.entity_mentions = detect_entity_mentions(analysis.tokens, kb);
    analysis.class_mentions = detect_class_mentions(analysis.tokens, lexicon);
    analysis.patterns = build_patterns(analysis.relation_mentions, analysis.entity_mentions,
                                       analysis.class_mentions, kb, &analysis.notes);
    return analysis;
}

}  // namespace semsearch
