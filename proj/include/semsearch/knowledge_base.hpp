#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semsearch/error.hpp"

namespace semsearch {

/// One node of the class hierarchy. The hierarchy is a tree: every class has
/// exactly one parent except the single root, whose parent is empty.
struct OntologyClass {
    std::string id;
    std::string parent;

    bool operator==(const OntologyClass&) const = default;
};

/// A uniquely identified individual. Ids are '#'-prefixed opaque tokens
/// (e.g. "#Rome"); the primary name is the display string appended to
/// expanded queries; aliases are the surfaces the gazetteer recognizes and
/// always include the primary name.
struct NamedEntity {
    std::string id;
    std::string primary_name;
    std::string class_id;
    std::set<std::string> aliases;

    bool operator==(const NamedEntity&) const = default;
};

/// A typed binary relation with domain and range class constraints.
struct RelationType {
    std::string id;
    std::string domain_class;
    std::string range_class;

    bool operator==(const RelationType&) const = default;
};

/// One subject-relation-object triple.
struct Fact {
    std::string subject;
    std::string relation;
    std::string object;

    auto operator<=>(const Fact&) const = default;
};

enum class Direction { AnchorIsSubject, AnchorIsObject };

/// In-memory ontology: classes, entities, relations and facts plus the
/// lookup indexes derived from them. Immutable after load; safe for any
/// number of concurrent readers.
class KnowledgeBase {
public:
    using PairIndex = std::map<std::pair<std::string, std::string>, std::set<std::string>>;

    const std::map<std::string, OntologyClass>& classes() const { return classes_; }
    const std::map<std::string, NamedEntity>& entities() const { return entities_; }
    const std::map<std::string, RelationType>& relations() const { return relations_; }
    const std::vector<Fact>& facts() const { return facts_; }
    const std::string& root_class() const { return root_class_; }

    bool has_class(const std::string& id) const { return classes_.count(id) != 0; }
    bool has_entity(const std::string& id) const { return entities_.count(id) != 0; }
    bool has_relation(const std::string& id) const { return relations_.count(id) != 0; }

    /// Throw std::invalid_argument when the id is undeclared.
    const NamedEntity& entity(const std::string& id) const;
    const RelationType& relation(const std::string& id) const;
    const std::string& class_of(const std::string& entity_id) const;

    /// True iff `super` is reachable from `sub` by zero or more parent steps.
    bool is_subclass(const std::string& sub, const std::string& super) const;

    /// Entities directly related to `anchor` through `relation`. With
    /// AnchorIsSubject the anchor fills the subject slot and the objects come
    /// back; with AnchorIsObject the reverse. Empty set when no facts match.
    std::set<std::string> neighbors(const std::string& anchor,
                                    const std::string& relation,
                                    Direction direction) const;

    /// Entities whose alias set contains the normalized surface.
    std::set<std::string> entities_by_alias(std::string_view surface) const;

    const PairIndex& sp_index() const { return sp_index_; }
    const PairIndex& po_index() const { return po_index_; }
    const std::map<std::string, std::set<std::string>>& alias_index() const {
        return alias_index_;
    }

    /// Longest alias, in tokens, after normalization. Bounds the gazetteer
    /// match window.
    std::size_t max_alias_tokens() const { return max_alias_tokens_; }

    bool operator==(const KnowledgeBase&) const = default;

private:
    friend class KnowledgeBaseLoader;

    std::map<std::string, OntologyClass> classes_;
    std::map<std::string, NamedEntity> entities_;
    std::map<std::string, RelationType> relations_;
    std::vector<Fact> facts_;
    std::string root_class_;

    PairIndex sp_index_;
    PairIndex po_index_;
    std::map<std::string, std::set<std::string>> alias_index_;
    std::size_t max_alias_tokens_ = 0;
};

/// Load and validate the four tab-separated ontology files. Lines starting
/// with "# " (or "##", or a lone "#") are comments; entity references such as
/// "#Rome" are data. Any violation aborts the load with a DataError carrying
/// the specific kind.
KnowledgeBase load_knowledge_base(const std::string& class_path,
                                  const std::string& entity_path,
                                  const std::string& relation_path,
                                  const std::string& fact_path);

/// Stream variant; the names are used in error messages only.
KnowledgeBase load_knowledge_base(std::istream& classes, std::istream& entities,
                                  std::istream& relations, std::istream& facts);

/// Write the knowledge base back out in the load format (rows sorted by id,
/// facts in stored order). Reloading the result reproduces an equal KB.
void save_knowledge_base(const KnowledgeBase& kb, const std::string& class_path,
                         const std::string& entity_path,
                         const std::string& relation_path,
                         const std::string& fact_path);

}  // namespace semsearch
