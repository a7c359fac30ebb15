#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "semsearch/knowledge_base.hpp"
#include "support/random_kb.hpp"

using namespace semsearch;

namespace {

const std::string kKbDir = std::string(SEMSEARCH_DATA_DIR) + "/kb";

KnowledgeBase load_fixture() {
    return load_knowledge_base(kKbDir + "/classes.tsv", kKbDir + "/entities.tsv",
                               kKbDir + "/relations.tsv", kKbDir + "/facts.tsv");
}

KnowledgeBase load_from_strings(const std::string& classes, const std::string& entities,
                                const std::string& relations, const std::string& facts) {
    std::istringstream c(classes), e(entities), r(relations), f(facts);
    return load_knowledge_base(c, e, r, f);
}

const std::string kToyClasses = "Thing\t\nPlace\tThing\nCity\tPlace\nCountry\tPlace\n";
const std::string kToyEntities =
    "#Rome\tRome\tCity\tRome|Roma\n"
    "#Italy\tItaly\tCountry\tItaly\n";
const std::string kToyRelations = "capitalOf\tCity\tCountry\n";
const std::string kToyFacts = "#Rome\tcapitalOf\t#Italy\n";

}  // namespace

TEST_CASE("fixture knowledge base loads with the expected shape") {
    KnowledgeBase kb = load_fixture();
    CHECK(kb.entities().size() == 21);
    CHECK(kb.relations().size() == 9);
    CHECK(kb.facts().size() == 16);
    CHECK(kb.root_class() == "Entity");
}

TEST_CASE("empty fact file yields a KB with no facts and empty neighbor sets") {
    KnowledgeBase kb = load_from_strings(kToyClasses, kToyEntities, kToyRelations, "");
    CHECK(kb.facts().empty());
    CHECK(kb.neighbors("#Rome", "capitalOf", Direction::AnchorIsSubject).empty());
    CHECK(kb.neighbors("#Italy", "capitalOf", Direction::AnchorIsObject).empty());
}

TEST_CASE("load errors carry distinct kinds") {
    auto expect_kind = [](ErrorKind kind, const std::string& classes,
                          const std::string& entities, const std::string& relations,
                          const std::string& facts) {
        try {
            load_from_strings(classes, entities, relations, facts);
            FAIL_CHECK("expected a DataError");
        } catch (const DataError& e) {
            CHECK(e.kind() == kind);
        }
    };

    SUBCASE("domain/range violation") {
        // Rome's class City is not a subclass of Country
        expect_kind(ErrorKind::DomainRangeViolation, kToyClasses, kToyEntities, kToyRelations,
                    "#Rome\tcapitalOf\t#Rome\n");
    }
    SUBCASE("parse error reports malformed lines") {
        expect_kind(ErrorKind::Parse, kToyClasses, "#Rome\tRome\n", kToyRelations, "");
    }
    SUBCASE("unknown class in entity row") {
        expect_kind(ErrorKind::UnknownReference, kToyClasses, "#X\tX\tNowhere\tX\n",
                    kToyRelations, "");
    }
    SUBCASE("unknown entity in fact") {
        expect_kind(ErrorKind::UnknownReference, kToyClasses, kToyEntities, kToyRelations,
                    "#Ghost\tcapitalOf\t#Italy\n");
    }
    SUBCASE("unknown relation in fact") {
        expect_kind(ErrorKind::UnknownReference, kToyClasses, kToyEntities, kToyRelations,
                    "#Rome\tnear\t#Italy\n");
    }
    SUBCASE("hierarchy cycle") {
        expect_kind(ErrorKind::HierarchyCycle, "Thing\t\nA\tB\nB\tA\n", "", "", "");
    }
    SUBCASE("multiple roots") {
        expect_kind(ErrorKind::Format, "A\t\nB\t\n", "", "", "");
    }
    SUBCASE("duplicate fact") {
        expect_kind(ErrorKind::DuplicateFact, kToyClasses, kToyEntities, kToyRelations,
                    "#Rome\tcapitalOf\t#Italy\n#Rome\tcapitalOf\t#Italy\n");
    }
    SUBCASE("entity id must be '#'-prefixed") {
        expect_kind(ErrorKind::Parse, kToyClasses, "Rome\tRome\tCity\tRome\n", kToyRelations,
                    "");
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_knowledge_base("no/such/file", "x", "y", "z"), DataError);
    }
}

TEST_CASE("is_subclass follows parent links reflexively and transitively") {
    KnowledgeBase kb = load_fixture();
    CHECK(kb.is_subclass("Capital", "Location"));
    CHECK(kb.is_subclass("Capital", "City"));
    CHECK_FALSE(kb.is_subclass("Location", "Capital"));
    for (const auto& [id, cls] : kb.classes()) CHECK(kb.is_subclass(id, id));
    CHECK_THROWS_AS(kb.is_subclass("Capital", "Nowhere"), std::invalid_argument);
    CHECK_THROWS_AS(kb.is_subclass("Nowhere", "Capital"), std::invalid_argument);
}

TEST_CASE("neighbors resolves both directions") {
    KnowledgeBase kb = load_fixture();
    CHECK(kb.neighbors("#Italy", "capitalOf", Direction::AnchorIsObject) ==
          std::set<std::string>{"#Rome"});
    CHECK(kb.neighbors("#Marion_Davies", "buriedIn", Direction::AnchorIsSubject) ==
          std::set<std::string>{"#Hollywood_Cemetery"});
    CHECK(kb.neighbors("#Rome", "buriedIn", Direction::AnchorIsSubject).empty());
    CHECK_THROWS_AS(kb.neighbors("#Nobody", "buriedIn", Direction::AnchorIsSubject),
                    std::invalid_argument);
    CHECK_THROWS_AS(kb.neighbors("#Rome", "orbits", Direction::AnchorIsSubject),
                    std::invalid_argument);
}

TEST_CASE("entities_by_alias normalizes case and whitespace") {
    KnowledgeBase kb = load_fixture();
    CHECK(kb.entities_by_alias("Marion Davies") == std::set<std::string>{"#Marion_Davies"});
    CHECK(kb.entities_by_alias("marion   davies") == std::set<std::string>{"#Marion_Davies"});
    CHECK(kb.entities_by_alias("SIAM") == std::set<std::string>{"#Thailand"});
    CHECK(kb.entities_by_alias("Zanzibar").empty());
}

TEST_CASE("indexes are exactly the fact projections and neighbors invert") {
    std::mt19937 rng(20240811);
    for (int round = 0; round < 25; ++round) {
        KnowledgeBase kb = semsearch::testing::random_kb(rng);

        KnowledgeBase::PairIndex sp;
        KnowledgeBase::PairIndex po;
        for (const Fact& fact : kb.facts()) {
            sp[{fact.subject, fact.relation}].insert(fact.object);
            po[{fact.relation, fact.object}].insert(fact.subject);
        }
        CHECK(kb.sp_index() == sp);
        CHECK(kb.po_index() == po);

        for (const Fact& fact : kb.facts()) {
            auto objects = kb.neighbors(fact.subject, fact.relation, Direction::AnchorIsSubject);
            CHECK(objects.count(fact.object) == 1);
            auto subjects = kb.neighbors(fact.object, fact.relation, Direction::AnchorIsObject);
            CHECK(subjects.count(fact.subject) == 1);
        }
    }
}

TEST_CASE("is_subclass is a partial order on random hierarchies") {
    std::mt19937 rng(7);
    for (int round = 0; round < 25; ++round) {
        KnowledgeBase kb = semsearch::testing::random_kb(rng);
        std::vector<std::string> ids;
        for (const auto& [id, cls] : kb.classes()) ids.push_back(id);
        for (const std::string& a : ids) {
            CHECK(kb.is_subclass(a, a));
            for (const std::string& b : ids) {
                if (a != b && kb.is_subclass(a, b)) CHECK_FALSE(kb.is_subclass(b, a));
                for (const std::string& c : ids) {
                    if (kb.is_subclass(a, b) && kb.is_subclass(b, c)) {
                        CHECK(kb.is_subclass(a, c));
                    }
                }
            }
        }
    }
}

TEST_CASE("save/load round trip reproduces identical contents") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "semsearch_kb_roundtrip";
    fs::create_directories(dir);
    auto path = [&dir](const char* name) { return (dir / name).string(); };

    std::mt19937 rng(99);
    for (int round = 0; round < 10; ++round) {
        KnowledgeBase kb = round == 0 ? load_fixture() : semsearch::testing::random_kb(rng);
        save_knowledge_base(kb, path("classes.tsv"), path("entities.tsv"),
                            path("relations.tsv"), path("facts.tsv"));
        KnowledgeBase reloaded =
            load_knowledge_base(path("classes.tsv"), path("entities.tsv"),
                                path("relations.tsv"), path("facts.tsv"));
        CHECK(reloaded == kb);
    }
    fs::remove_all(dir);
}

TEST_CASE("fixture facts satisfy the relation signatures") {
    KnowledgeBase kb = load_fixture();
    for (const Fact& fact : kb.facts()) {
        const RelationType& rel = kb.relation(fact.relation);
        CHECK(kb.is_subclass(kb.class_of(fact.subject), rel.domain_class));
        CHECK(kb.is_subclass(kb.class_of(fact.object), rel.range_class));
    }
}
