#include "semsearch/knowledge_base.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "semsearch/text.hpp"

namespace semsearch {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::UnknownReference: return "unknown-reference";
        case ErrorKind::HierarchyCycle: return "hierarchy-cycle";
        case ErrorKind::DomainRangeViolation: return "domain-range-violation";
        case ErrorKind::DuplicateFact: return "duplicate-fact";
        case ErrorKind::DuplicateDocument: return "duplicate-document";
        case ErrorKind::Format: return "format";
    }
    return "unknown";
}

namespace {

struct TsvRow {
    std::size_t line_no = 0;
    std::vector<std::string> fields;
};

// A line is a comment when its first character is '#' followed by
// whitespace, another '#', or nothing. '#'-prefixed identifiers such as
// "#Rome" always continue with a non-space character.
bool is_comment(const std::string& line) {
    if (line.empty() || line.front() != '#') return false;
    if (line.size() == 1) return true;
    char next = line[1];
    return next == ' ' || next == '\t' || next == '#';
}

std::vector<TsvRow> read_tsv(std::istream& in, const std::string& name) {
    if (!in) throw DataError(ErrorKind::Io, "cannot read " + name);
    std::vector<TsvRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (blank || is_comment(line)) continue;
        TsvRow row;
        row.line_no = line_no;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                row.fields.push_back(line.substr(start));
                break;
            }
            row.fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

[[noreturn]] void fail(ErrorKind kind, const std::string& name, std::size_t line_no,
                       const std::string& message) {
    throw DataError(kind, name + ":" + std::to_string(line_no) + ": " + message);
}

std::vector<std::string> split_pipe(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t bar = text.find('|', start);
        std::string part =
            bar == std::string::npos ? text.substr(start) : text.substr(start, bar - start);
        if (!part.empty()) parts.push_back(std::move(part));
        if (bar == std::string::npos) break;
        start = bar + 1;
    }
    return parts;
}

}  // namespace

class KnowledgeBaseLoader {
public:
    KnowledgeBase load(std::istream& classes, std::istream& entities, std::istream& relations,
                       std::istream& facts) {
        load_classes(read_tsv(classes, "classes"));
        load_entities(read_tsv(entities, "entities"));
        load_relations(read_tsv(relations, "relations"));
        load_facts(read_tsv(facts, "facts"));
        build_indexes();
        return std::move(kb_);
    }

private:
    void load_classes(const std::vector<TsvRow>& rows) {
        for (const TsvRow& row : rows) {
            if (row.fields.empty() || row.fields.size() > 2 || row.fields[0].empty()) {
                fail(ErrorKind::Parse, "classes", row.line_no,
                     "expected `class_id<TAB>parent_id`");
            }
            OntologyClass cls;
            cls.id = row.fields[0];
            cls.parent = row.fields.size() == 2 ? row.fields[1] : std::string();
            if (!kb_.classes_.emplace(cls.id, cls).second) {
                fail(ErrorKind::Parse, "classes", row.line_no, "duplicate class id " + cls.id);
            }
            class_lines_[cls.id] = row.line_no;
        }
        validate_hierarchy();
    }

    void validate_hierarchy() {
        for (const auto& [id, cls] : kb_.classes_) {
            if (cls.parent.empty()) {
                if (!kb_.root_class_.empty()) {
                    throw DataError(ErrorKind::Format,
                                    "classes: multiple root classes: " + kb_.root_class_ +
                                        " and " + id);
                }
                kb_.root_class_ = id;
            } else if (kb_.classes_.count(cls.parent) == 0) {
                fail(ErrorKind::UnknownReference, "classes", class_lines_[id],
                     "unknown parent class " + cls.parent);
            }
        }
        if (kb_.root_class_.empty() && !kb_.classes_.empty()) {
            throw DataError(ErrorKind::Format, "classes: no root class declared");
        }
        // Every parent chain must reach the root without revisiting a node.
        for (const auto& [id, cls] : kb_.classes_) {
            std::set<std::string> seen;
            std::string cur = id;
            while (!kb_.classes_.at(cur).parent.empty()) {
                if (!seen.insert(cur).second) {
                    fail(ErrorKind::HierarchyCycle, "classes", class_lines_[id],
                         "class hierarchy cycle through " + cur);
                }
                cur = kb_.classes_.at(cur).parent;
            }
        }
    }

    void load_entities(const std::vector<TsvRow>& rows) {
        for (const TsvRow& row : rows) {
            if (row.fields.size() != 4) {
                fail(ErrorKind::Parse, "entities", row.line_no,
                     "expected `entity_id<TAB>primary_name<TAB>class_id<TAB>aliases`");
            }
            NamedEntity entity;
            entity.id = row.fields[0];
            entity.primary_name = row.fields[1];
            entity.class_id = row.fields[2];
            if (entity.id.size() < 2 || entity.id.front() != '#' ||
                entity.id[1] == ' ' || entity.id[1] == '#') {
                fail(ErrorKind::Parse, "entities", row.line_no,
                     "entity id must start with '#': " + entity.id);
            }
            if (entity.primary_name.empty()) {
                fail(ErrorKind::Parse, "entities", row.line_no, "empty primary name");
            }
            if (kb_.classes_.count(entity.class_id) == 0) {
                fail(ErrorKind::UnknownReference, "entities", row.line_no,
                     "unknown class " + entity.class_id);
            }
            for (std::string& alias : split_pipe(row.fields[3])) {
                entity.aliases.insert(std::move(alias));
            }
            entity.aliases.insert(entity.primary_name);
            if (!kb_.entities_.emplace(entity.id, std::move(entity)).second) {
                fail(ErrorKind::Parse, "entities", row.line_no,
                     "duplicate entity id " + row.fields[0]);
            }
        }
    }

    void load_relations(const std::vector<TsvRow>& rows) {
        for (const TsvRow& row : rows) {
            if (row.fields.size() != 3) {
                fail(ErrorKind::Parse, "relations", row.line_no,
                     "expected `relation_id<TAB>domain_class<TAB>range_class`");
            }
            RelationType rel{row.fields[0], row.fields[1], row.fields[2]};
            if (rel.id.empty()) fail(ErrorKind::Parse, "relations", row.line_no, "empty id");
            for (const std::string& cls : {rel.domain_class, rel.range_class}) {
                if (kb_.classes_.count(cls) == 0) {
                    fail(ErrorKind::UnknownReference, "relations", row.line_no,
                         "unknown class " + cls);
                }
            }
            if (!kb_.relations_.emplace(rel.id, rel).second) {
                fail(ErrorKind::Parse, "relations", row.line_no, "duplicate relation id " + rel.id);
            }
        }
    }

    void load_facts(const std::vector<TsvRow>& rows) {
        std::set<Fact> seen;
        for (const TsvRow& row : rows) {
            if (row.fields.size() != 3) {
                fail(ErrorKind::Parse, "facts", row.line_no,
                     "expected `subject_id<TAB>relation_id<TAB>object_id`");
            }
            Fact fact{row.fields[0], row.fields[1], row.fields[2]};
            for (const std::string& entity : {fact.subject, fact.object}) {
                if (kb_.entities_.count(entity) == 0) {
                    fail(ErrorKind::UnknownReference, "facts", row.line_no,
                         "unknown entity " + entity);
                }
            }
            auto rel_it = kb_.relations_.find(fact.relation);
            if (rel_it == kb_.relations_.end()) {
                fail(ErrorKind::UnknownReference, "facts", row.line_no,
                     "unknown relation " + fact.relation);
            }
            const RelationType& rel = rel_it->second;
            const std::string& subj_class = kb_.entities_.at(fact.subject).class_id;
            const std::string& obj_class = kb_.entities_.at(fact.object).class_id;
            if (!kb_.is_subclass(subj_class, rel.domain_class)) {
                fail(ErrorKind::DomainRangeViolation, "facts", row.line_no,
                     fact.subject + "'s class " + subj_class + " is not a subclass of domain " +
                         rel.domain_class + " of " + rel.id);
            }
            if (!kb_.is_subclass(obj_class, rel.range_class)) {
                fail(ErrorKind::DomainRangeViolation, "facts", row.line_no,
                     fact.object + "'s class " + obj_class + " is not a subclass of range " +
                         rel.range_class + " of " + rel.id);
            }
            if (!seen.insert(fact).second) {
                fail(ErrorKind::DuplicateFact, "facts", row.line_no,
                     "duplicate fact " + fact.subject + " " + fact.relation + " " + fact.object);
            }
            kb_.facts_.push_back(std::move(fact));
        }
    }

    void build_indexes() {
        for (const Fact& fact : kb_.facts_) {
            kb_.sp_index_[{fact.subject, fact.relation}].insert(fact.object);
            kb_.po_index_[{fact.relation, fact.object}].insert(fact.subject);
        }
        for (const auto& [id, entity] : kb_.entities_) {
            for (const std::string& alias : entity.aliases) {
                std::string key = normalize_surface(alias);
                if (key.empty()) continue;
                kb_.alias_index_[key].insert(id);
                std::size_t tokens = 1 + static_cast<std::size_t>(
                                             std::count(key.begin(), key.end(), ' '));
                kb_.max_alias_tokens_ = std::max(kb_.max_alias_tokens_, tokens);
            }
        }
    }

    KnowledgeBase kb_;
    std::map<std::string, std::size_t> class_lines_;
};

const NamedEntity& KnowledgeBase::entity(const std::string& id) const {
    auto it = entities_.find(id);
    if (it == entities_.end()) throw std::invalid_argument("unknown entity id: " + id);
    return it->second;
}

const RelationType& KnowledgeBase::relation(const std::string& id) const {
    auto it = relations_.find(id);
    if (it == relations_.end()) throw std::invalid_argument("unknown relation id: " + id);
    return it->second;
}

const std::string& KnowledgeBase::class_of(const std::string& entity_id) const {
    return entity(entity_id).class_id;
}

bool KnowledgeBase::is_subclass(const std::string& sub, const std::string& super) const {
    if (classes_.count(sub) == 0) throw std::invalid_argument("unknown class id: " + sub);
    if (classes_.count(super) == 0) throw std::invalid_argument("unknown class id: " + super);
    const std::string* cur = &sub;
    while (true) {
        if (*cur == super) return true;
        const std::string& parent = classes_.at(*cur).parent;
        if (parent.empty()) return false;
        cur = &classes_.at(*cur).parent;
    }
}

std::set<std::string> KnowledgeBase::neighbors(const std::string& anchor,
                                               const std::string& relation,
                                               Direction direction) const {
    if (entities_.count(anchor) == 0) throw std::invalid_argument("unknown entity id: " + anchor);
    if (relations_.count(relation) == 0) {
        throw std::invalid_argument("unknown relation id: " + relation);
    }
    const PairIndex& index = direction == Direction::AnchorIsSubject ? sp_index_ : po_index_;
    auto key = direction == Direction::AnchorIsSubject ? std::make_pair(anchor, relation)
                                                       : std::make_pair(relation, anchor);
    auto it = index.find(key);
    return it == index.end() ? std::set<std::string>{} : it->second;
}

std::set<std::string> KnowledgeBase::entities_by_alias(std::string_view surface) const {
    auto it = alias_index_.find(normalize_surface(surface));
    return it == alias_index_.end() ? std::set<std::string>{} : it->second;
}

KnowledgeBase load_knowledge_base(std::istream& classes, std::istream& entities,
                                  std::istream& relations, std::istream& facts) {
    KnowledgeBaseLoader loader;
    return loader.load(classes, entities, relations, facts);
}

KnowledgeBase load_knowledge_base(const std::string& class_path, const std::string& entity_path,
                                  const std::string& relation_path,
                                  const std::string& fact_path) {
    std::ifstream classes(class_path);
    if (!classes) throw DataError(ErrorKind::Io, "cannot open " + class_path);
    std::ifstream entities(entity_path);
    if (!entities) throw DataError(ErrorKind::Io, "cannot open " + entity_path);
    std::ifstream relations(relation_path);
    if (!relations) throw DataError(ErrorKind::Io, "cannot open " + relation_path);
    std::ifstream facts(fact_path);
    if (!facts) throw DataError(ErrorKind::Io, "cannot open " + fact_path);
    return load_knowledge_base(classes, entities, relations, facts);
}

void save_knowledge_base(const KnowledgeBase& kb, const std::string& class_path,
                         const std::string& entity_path, const std::string& relation_path,
                         const std::string& fact_path) {
    auto open = [](const std::string& path) {
        std::ofstream out(path);
        if (!out) throw DataError(ErrorKind::Io, "cannot write " + path);
        return out;
    };

    std::ofstream classes = open(class_path);
    for (const auto& [id, cls] : kb.classes()) classes << id << '\t' << cls.parent << '\n';

    std::ofstream entities = open(entity_path);
    for (const auto& [id, entity] : kb.entities()) {
        entities << id << '\t' << entity.primary_name << '\t' << entity.class_id << '\t';
        bool first = true;
        for (const std::string& alias : entity.aliases) {
            if (!first) entities << '|';
            entities << alias;
            first = false;
        }
        entities << '\n';
    }

    std::ofstream relations = open(relation_path);
    for (const auto& [id, rel] : kb.relations()) {
        relations << id << '\t' << rel.domain_class << '\t' << rel.range_class << '\n';
    }

    std::ofstream facts = open(fact_path);
    for (const Fact& fact : kb.facts()) {
        facts << fact.subject << '\t' << fact.relation << '\t' << fact.object << '\n';
    }
}

}  // namespace semsearch
