#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "semsearch/knowledge_base.hpp"

namespace semsearch {

enum class Side { Subject, Object };

const char* to_string(Side side);

/// A token of the raw query, original case preserved, with byte offsets.
struct Token {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Half-open range of token indexes.
struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const TokenSpan&) const = default;
    std::size_t size() const { return end - begin; }
};

bool spans_overlap(TokenSpan a, TokenSpan b);

/// Token distance between two spans: 0 when they touch or overlap, otherwise
/// the number of tokens strictly between them.
std::size_t span_distance(TokenSpan a, TokenSpan b);

/// Tokenize a raw query, keeping the original casing and offsets so matched
/// spans can be reported verbatim.
std::vector<Token> tokenize_spans(std::string_view raw);

/// One dictionary entry mapping a (possibly gapped) relation phrase onto a
/// relation. `groups` holds the lowercase token groups; a gap may separate
/// consecutive groups. `unknown_side` names the relation slot the query
/// leaves open, i.e. the slot the activated entities will fill.
struct RelationPhraseEntry {
    std::string phrase;
    std::vector<std::vector<std::string>> groups;
    std::string relation;
    Side unknown_side = Side::Subject;

    std::size_t token_count() const;

    bool operator==(const RelationPhraseEntry&) const = default;
};

class PhraseDictionary {
public:
    explicit PhraseDictionary(std::vector<RelationPhraseEntry> entries)
        : entries_(std::move(entries)) {}
    const std::vector<RelationPhraseEntry>& entries() const { return entries_; }

private:
    std::vector<RelationPhraseEntry> entries_;
};

/// Format per line: `token1 token2 ...<TAB>relation_id<TAB>subject|object`.
/// A `…` between token groups marks a gap. Relation ids are checked against
/// the knowledge base.
PhraseDictionary load_phrase_dictionary(const std::string& path, const KnowledgeBase& kb);
PhraseDictionary load_phrase_dictionary(std::istream& in, const std::string& name,
                                        const KnowledgeBase& kb);

struct ClassRule {
    std::vector<std::string> surface_tokens;  // lowercase
    std::string class_id;
    enum class Kind { WhWord, ClassNoun } kind = Kind::ClassNoun;
};

class ClassLexicon {
public:
    explicit ClassLexicon(std::vector<ClassRule> rules) : rules_(std::move(rules)) {}
    const std::vector<ClassRule>& rules() const { return rules_; }

private:
    std::vector<ClassRule> rules_;
};

/// Format per line: `surface<TAB>class_id<TAB>wh|noun`.
ClassLexicon load_class_lexicon(const std::string& path, const KnowledgeBase& kb);
ClassLexicon load_class_lexicon(std::istream& in, const std::string& name,
                                const KnowledgeBase& kb);

struct RelationMention {
    TokenSpan span;
    RelationPhraseEntry entry;
};

struct EntityMention {
    TokenSpan span;
    std::string surface;  // span tokens joined with single spaces
    std::string entity;
};

struct ClassMention {
    TokenSpan span;
    std::string class_id;
    ClassRule::Kind source = ClassRule::Kind::ClassNoun;
};

/// A relation triple extracted from the query: a known anchor entity on one
/// side, an open class slot on the other. `anchor_role` is the slot the
/// anchor occupies (the activated entities fill the opposite one).
struct RelationPattern {
    std::string anchor;
    std::string relation;
    std::string target_class;
    Side anchor_role = Side::Subject;

    bool operator==(const RelationPattern&) const = default;
};

struct QueryAnalysis {
    std::string raw;
    std::vector<Token> tokens;
    std::vector<RelationMention> relation_mentions;
    std::vector<EntityMention> entity_mentions;
    std::vector<ClassMention> class_mentions;
    std::vector<RelationPattern> patterns;
    std::vector<std::string> notes;  // dropped candidates, ambiguity remarks

    /// Distinct entities mentioned in the query, in first-mention order.
    std::vector<std::string> mentioned_entities() const;
};

/// All dictionary phrases found in the token stream. Phrases match as
/// ordered token groups within a window of 8 tokens; at overlapping spans the
/// phrase with more tokens wins. Results are ordered by start position.
std::vector<RelationMention> detect_relation_mentions(const std::vector<Token>& tokens,
                                                      const PhraseDictionary& dict);

/// Greedy left-to-right longest match over the alias index. Spans never
/// overlap; an ambiguous surface yields one mention per candidate entity on
/// the same span.
std::vector<EntityMention> detect_entity_mentions(const std::vector<Token>& tokens,
                                                  const KnowledgeBase& kb);

std::vector<ClassMention> detect_class_mentions(const std::vector<Token>& tokens,
                                                const ClassLexicon& lexicon);

/// Pair each relation mention with the nearest entity mention (anchor) and
/// the nearest class mention (target slot); ties break leftward. Candidates
/// whose classes are incompatible with the relation signature are dropped and
/// recorded in `notes`.
std::vector<RelationPattern> build_patterns(const std::vector<RelationMention>& relations,
                                            const std::vector<EntityMention>& entities,
                                            const std::vector<ClassMention>& classes,
                                            const KnowledgeBase& kb,
                                            std::vector<std::string>* notes = nullptr);

/// Runs the full pipeline: tokenize, detect mentions, assemble patterns.
QueryAnalysis analyze_query(std::string_view raw, const KnowledgeBase& kb,
                            const PhraseDictionary& dict, const ClassLexicon& lexicon);

}  // namespace semsearch
