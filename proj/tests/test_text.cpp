#include <doctest.h>

#include "semsearch/text.hpp"

using namespace semsearch;

TEST_CASE("tokenize_lower splits on non-alphanumerics and lowercases") {
    CHECK(tokenize_lower("Where is the actress, Marion Davies, buried?") ==
          std::vector<std::string>{"where", "is", "the", "actress", "marion", "davies",
                                   "buried"});
    CHECK(tokenize_lower("") == std::vector<std::string>{});
    CHECK(tokenize_lower("...!!...") == std::vector<std::string>{});
    CHECK(tokenize_lower("founded in 1296.") ==
          std::vector<std::string>{"founded", "in", "1296"});
}

TEST_CASE("normalize_surface lowercases and collapses whitespace") {
    CHECK(normalize_surface("Marion   Davies") == "marion davies");
    CHECK(normalize_surface("  Mexico\tCity \n") == "mexico city");
    CHECK(normalize_surface("A.S. Roma") == "a.s. roma");  // punctuation kept
    CHECK(normalize_surface("") == "");
}

TEST_CASE("normalize_surface keeps multi-byte sequences intact") {
    std::string with_accent = "S\xc3\xa3o Paulo";  // ã
    CHECK(normalize_surface(with_accent) == "s\xc3\xa3o paulo");
}

TEST_CASE("porter stemmer matches the reference behavior") {
    const std::pair<const char*, const char*> vectors[] = {
        {"caresses", "caress"}, {"ponies", "poni"},     {"ties", "ti"},
        {"caress", "caress"},   {"cats", "cat"},        {"feed", "feed"},
        {"agreed", "agre"},     {"plastered", "plaster"}, {"bled", "bled"},
        {"motoring", "motor"},  {"sing", "sing"},       {"conflated", "conflat"},
        {"troubled", "troubl"}, {"sized", "size"},      {"hopping", "hop"},
        {"tanned", "tan"},      {"falling", "fall"},    {"hissing", "hiss"},
        {"fizzed", "fizz"},     {"failing", "fail"},    {"filing", "file"},
        {"happy", "happi"},     {"sky", "sky"},         {"relational", "relat"},
        {"conditional", "condit"}, {"rational", "ration"}, {"digitizer", "digit"},
        {"conformabli", "conform"}, {"radicalli", "radic"}, {"differentli", "differ"},
        {"vileli", "vile"},     {"analogousli", "analog"}, {"vietnamization", "vietnam"},
        {"predication", "predic"}, {"operator", "oper"}, {"feudalism", "feudal"},
        {"decisiveness", "decis"}, {"hopefulness", "hope"}, {"callousness", "callous"},
        {"formaliti", "formal"}, {"sensitiviti", "sensit"}, {"sensibiliti", "sensibl"},
        {"triplicate", "triplic"}, {"formative", "form"}, {"formalize", "formal"},
        {"electriciti", "electr"}, {"electrical", "electr"}, {"hopeful", "hope"},
        {"goodness", "good"},   {"revival", "reviv"},   {"allowance", "allow"},
        {"inference", "infer"}, {"airliner", "airlin"}, {"gyroscopic", "gyroscop"},
        {"adjustable", "adjust"}, {"defensible", "defens"}, {"irritant", "irrit"},
        {"replacement", "replac"}, {"adjustment", "adjust"}, {"dependent", "depend"},
        {"adoption", "adopt"},  {"communism", "commun"}, {"activate", "activ"},
        {"effective", "effect"}, {"bowdlerize", "bowdler"}, {"probate", "probat"},
        {"rate", "rate"},       {"cease", "ceas"},      {"controll", "control"},
        {"roll", "roll"},       {"archaeology", "archaeolog"},
    };
    for (const auto& [word, stem] : vectors) {
        CAPTURE(word);
        CHECK(porter_stem(word) == stem);
    }
}

TEST_CASE("porter stems the surfaces the pipeline depends on") {
    CHECK(porter_stem("davies") == "davi");
    CHECK(porter_stem("buried") == "buri");
    CHECK(porter_stem("actress") == "actress");
    CHECK(porter_stem("marion") == "marion");
    CHECK(porter_stem("cities") == "citi");
    CHECK(porter_stem("capital") == "capit");
    CHECK(porter_stem("italy") == "itali");
    CHECK(porter_stem("jupiter") == "jupit");
    CHECK(porter_stem("moons") == "moon");
    CHECK(porter_stem("cemetery") == "cemeteri");
    CHECK(porter_stem("died") == "di");
    CHECK(porter_stem("rome") == "rome");
    CHECK(porter_stem("cortines") == "cortin");
}

TEST_CASE("short tokens are left alone") {
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("is") == "is");
    CHECK(porter_stem("g8") == "g8");
}

TEST_CASE("default stopword list has 33 entries and matches the shipped file") {
    CHECK(default_stopwords().size() == 33);
    StopwordSet from_file = load_stopwords(std::string(SEMSEARCH_DATA_DIR) + "/stopwords.txt");
    CHECK(from_file == default_stopwords());
}

TEST_CASE("normalize_text lowercases, drops stopwords and stems") {
    CHECK(normalize_text("Where is the actress, Marion Davies, buried?") ==
          std::vector<std::string>{"actress", "marion", "davi", "buri"});
    CHECK(normalize_text("") == std::vector<std::string>{});
    CHECK(normalize_text("THE the The") == std::vector<std::string>{});
    CHECK(normalize_text("What is the capital of Italy?") ==
          std::vector<std::string>{"capit", "itali"});
}
