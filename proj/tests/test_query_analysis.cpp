#include <doctest.h>

#include <sstream>

#include "semsearch/query_analysis.hpp"

using namespace semsearch;

namespace {

const std::string kDataDir = SEMSEARCH_DATA_DIR;

struct Fixture {
    KnowledgeBase kb;
    PhraseDictionary dict;
    ClassLexicon lexicon;

    Fixture()
        : kb(load_knowledge_base(kDataDir + "/kb/classes.tsv", kDataDir + "/kb/entities.tsv",
                                 kDataDir + "/kb/relations.tsv", kDataDir + "/kb/facts.tsv")),
          dict(load_phrase_dictionary(kDataDir + "/phrases.tsv", kb)),
          lexicon(load_class_lexicon(kDataDir + "/class_lexicon.tsv", kb)) {}
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

}  // namespace

TEST_CASE("tokenize_spans keeps casing and byte offsets") {
    auto tokens = tokenize_spans("Where is the actress, Marion Davies, buried?");
    REQUIRE(tokens.size() == 7);
    CHECK(tokens[4].text == "Marion");
    CHECK(tokens[5].text == "Davies");
    std::string raw = "Where is the actress, Marion Davies, buried?";
    for (const Token& token : tokens) {
        CHECK(raw.substr(token.begin, token.end - token.begin) == token.text);
    }
}

TEST_CASE("relation phrases map to relations with their open side") {
    const Fixture& f = fixture();

    SUBCASE("contiguous phrase") {
        auto mentions =
            detect_relation_mentions(tokenize_spans("What is the capital of Italy?"), f.dict);
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].entry.relation == "capitalOf");
        CHECK(mentions[0].entry.unknown_side == Side::Subject);
        CHECK(mentions[0].span == TokenSpan{3, 5});
    }
    SUBCASE("gapped phrase split across the sentence") {
        auto mentions = detect_relation_mentions(
            tokenize_spans("Where is the actress, Marion Davies, buried?"), f.dict);
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].entry.relation == "buriedIn");
        CHECK(mentions[0].entry.unknown_side == Side::Object);
        CHECK(mentions[0].span == TokenSpan{0, 7});
    }
    SUBCASE("no dictionary phrase") {
        CHECK(detect_relation_mentions(tokenize_spans("Hello world"), f.dict).empty());
    }
    SUBCASE("gap beyond the window does not match") {
        auto mentions = detect_relation_mentions(
            tokenize_spans("Where oh my one two three four five six seven buried"), f.dict);
        CHECK(mentions.empty());
    }
}

TEST_CASE("longest phrase wins at overlapping spans") {
    const Fixture& f = fixture();
    std::istringstream phrases("capital\tcapitalOf\tsubject\ncapital of\tcapitalOf\tsubject\n");
    PhraseDictionary dict = load_phrase_dictionary(phrases, "phrases", f.kb);
    auto mentions = detect_relation_mentions(tokenize_spans("the capital of Italy"), dict);
    REQUIRE(mentions.size() == 1);
    CHECK(mentions[0].span.size() == 2);
}

TEST_CASE("entity mentions use greedy longest alias matches") {
    const Fixture& f = fixture();

    SUBCASE("longest span beats its prefix") {
        auto mentions = detect_entity_mentions(
            tokenize_spans("What famous communist leader died in Mexico City?"), f.kb);
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].entity == "#Mexico_City");
        CHECK(mentions[0].surface == "Mexico City");
    }
    SUBCASE("plain surface") {
        auto mentions = detect_entity_mentions(tokenize_spans("capital of Italy"), f.kb);
        REQUIRE(mentions.size() == 1);
        CHECK(mentions[0].entity == "#Italy");
    }
    SUBCASE("no surface") {
        CHECK(detect_entity_mentions(tokenize_spans("nothing to see here"), f.kb).empty());
    }
    SUBCASE("spans never overlap and matches are maximal") {
        auto queries = {"Where is the actress, Marion Davies, buried?",
                        "cities that are tourist destinations of Thailand",
                        "Mexico City and Mexico and Chiang Mai"};
        for (const char* query : queries) {
            auto tokens = tokenize_spans(query);
            auto mentions = detect_entity_mentions(tokens, f.kb);
            for (std::size_t i = 1; i < mentions.size(); ++i) {
                CHECK_FALSE(spans_overlap(mentions[i - 1].span, mentions[i].span));
            }
            for (const EntityMention& mention : mentions) {
                if (mention.span.end < tokens.size()) {
                    std::string longer = mention.surface + " " + tokens[mention.span.end].text;
                    CHECK(f.kb.entities_by_alias(longer).empty());
                }
            }
        }
    }
}

TEST_CASE("ambiguous aliases yield one mention per candidate on the same span") {
    std::istringstream classes("Thing\t\n");
    std::istringstream entities(
        "#A\tAlpha\tThing\tmercury\n"
        "#B\tBeta\tThing\tmercury\n");
    std::istringstream relations("rel\tThing\tThing\n");
    std::istringstream facts("");
    KnowledgeBase kb = load_knowledge_base(classes, entities, relations, facts);
    auto mentions = detect_entity_mentions(tokenize_spans("about mercury today"), kb);
    REQUIRE(mentions.size() == 2);
    CHECK(mentions[0].span == mentions[1].span);
    CHECK(mentions[0].entity == "#A");
    CHECK(mentions[1].entity == "#B");
}

TEST_CASE("class mentions come from wh-words and class nouns") {
    const Fixture& f = fixture();

    auto where = detect_class_mentions(tokenize_spans("Where is it buried?"), f.lexicon);
    REQUIRE(where.size() == 1);
    CHECK(where[0].class_id == "Location");
    CHECK(where[0].source == ClassRule::Kind::WhWord);

    auto how_many =
        detect_class_mentions(tokenize_spans("How many moons does Jupiter have?"), f.lexicon);
    REQUIRE(how_many.size() == 1);
    CHECK(how_many[0].class_id == "Number");

    auto leader = detect_class_mentions(
        tokenize_spans("What famous communist leader died in Mexico City?"), f.lexicon);
    REQUIRE(leader.size() == 2);  // "leader" and the "City" of Mexico City
    CHECK(leader[0].class_id == "Leader");
    CHECK(leader[0].source == ClassRule::Kind::ClassNoun);
    CHECK(leader[1].class_id == "City");
}

TEST_CASE("build_patterns pairs each relation with the nearest mentions") {
    const Fixture& f = fixture();

    SUBCASE("anchor fills the side opposite the open slot") {
        QueryAnalysis a = analyze_query("Where is the actress, Marion Davies, buried?", f.kb,
                                        f.dict, f.lexicon);
        REQUIRE(a.patterns.size() == 1);
        CHECK(a.patterns[0] ==
              RelationPattern{"#Marion_Davies", "buriedIn", "Location", Side::Subject});
    }
    SUBCASE("object-side anchor") {
        QueryAnalysis a = analyze_query("What is the capital of Italy?", f.kb, f.dict, f.lexicon);
        REQUIRE(a.patterns.size() == 1);
        CHECK(a.patterns[0] == RelationPattern{"#Italy", "capitalOf", "Capital", Side::Object});
    }
    SUBCASE("nearest class wins over a farther one") {
        QueryAnalysis a = analyze_query("What famous communist leader died in Mexico City?",
                                        f.kb, f.dict, f.lexicon);
        REQUIRE(a.patterns.size() == 1);
        CHECK(a.patterns[0] == RelationPattern{"#Mexico_City", "diedIn", "Leader", Side::Object});
    }
    SUBCASE("relation mention without an entity mention yields nothing") {
        QueryAnalysis a = analyze_query("Where is anyone buried?", f.kb, f.dict, f.lexicon);
        CHECK(a.patterns.empty());
        CHECK_FALSE(a.notes.empty());
    }
    SUBCASE("incompatible classes are dropped and noted") {
        // "how many moons" pairs with #Rome: Rome is not a Planet
        QueryAnalysis a =
            analyze_query("How many moons does Rome have?", f.kb, f.dict, f.lexicon);
        CHECK(a.patterns.empty());
        CHECK_FALSE(a.notes.empty());
    }
}

TEST_CASE("emitted patterns always satisfy the compatibility invariant") {
    const Fixture& f = fixture();
    auto queries = {"What is the capital of Italy?", "How many moons does Jupiter have?",
                    "Where is the actress, Marion Davies, buried?",
                    "What famous communist leader died in Mexico City?",
                    "cities that are tourist destinations of Thailand"};
    for (const char* query : queries) {
        QueryAnalysis a = analyze_query(query, f.kb, f.dict, f.lexicon);
        for (const RelationPattern& p : a.patterns) {
            const RelationType& rel = f.kb.relation(p.relation);
            const std::string& anchor_class = f.kb.class_of(p.anchor);
            const std::string& anchor_slot =
                p.anchor_role == Side::Subject ? rel.domain_class : rel.range_class;
            const std::string& open_slot =
                p.anchor_role == Side::Subject ? rel.range_class : rel.domain_class;
            CHECK(f.kb.is_subclass(anchor_class, anchor_slot));
            CHECK((f.kb.is_subclass(p.target_class, open_slot) ||
                   f.kb.is_subclass(open_slot, p.target_class)));
        }
    }
}

TEST_CASE("analysis is deterministic") {
    const Fixture& f = fixture();
    const char* query = "What famous communist leader died in Mexico City?";
    QueryAnalysis first = analyze_query(query, f.kb, f.dict, f.lexicon);
    QueryAnalysis second = analyze_query(query, f.kb, f.dict, f.lexicon);
    CHECK(first.patterns == second.patterns);
    CHECK(first.notes == second.notes);
    REQUIRE(first.entity_mentions.size() == second.entity_mentions.size());
    for (std::size_t i = 0; i < first.entity_mentions.size(); ++i) {
        CHECK(first.entity_mentions[i].entity == second.entity_mentions[i].entity);
        CHECK(first.entity_mentions[i].span == second.entity_mentions[i].span);
    }
}

TEST_CASE("lexicon and phrase files validate their references") {
    const Fixture& f = fixture();
    {
        std::istringstream bad("capital of\tnoSuchRelation\tsubject\n");
        CHECK_THROWS_AS(load_phrase_dictionary(bad, "phrases", f.kb), DataError);
    }
    {
        std::istringstream bad("capital of\tcapitalOf\tsideways\n");
        CHECK_THROWS_AS(load_phrase_dictionary(bad, "phrases", f.kb), DataError);
    }
    {
        std::istringstream bad("where\tNoSuchClass\twh\n");
        CHECK_THROWS_AS(load_class_lexicon(bad, "lexicon", f.kb), DataError);
    }
}
