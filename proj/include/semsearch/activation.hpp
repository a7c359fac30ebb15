#pragma once

#include <set>
#include <string>
#include <vector>

#include "semsearch/knowledge_base.hpp"
#include "semsearch/query_analysis.hpp"
#include "semsearch/text.hpp"

namespace semsearch {

enum class SpreadStrategy { Free, DistanceCsa, RelationCsa };

const char* to_string(SpreadStrategy strategy);

/// Why an entity was activated: the seed (or pattern anchor) it was reached
/// from and the fact that connected it.
struct ActivationTraceEntry {
    std::string entity;
    std::string origin;
    Fact fact;

    bool operator==(const ActivationTraceEntry&) const = default;
};

struct ActivationResult {
    SpreadStrategy strategy = SpreadStrategy::Free;
    std::set<std::string> activated;  // never contains a seed
    std::vector<ActivationTraceEntry> trace;
};

/// Breadth-first closure over facts in both directions, all relations, up to
/// `depth` hops from any seed. Seeds are excluded from the result.
ActivationResult free_spread(const KnowledgeBase& kb, const std::set<std::string>& seeds,
                             int depth);

/// The distance-1 baseline: every direct neighbor, any relation, either
/// direction. Equivalent to free_spread(kb, seeds, 1).
ActivationResult distance_constrained_spread(const KnowledgeBase& kb,
                                             const std::set<std::string>& seeds);

/// Relation- and class-constrained activation: for each pattern, the
/// entities one hop from the anchor through the pattern's relation whose
/// class is the target class or a subclass of it.
ActivationResult relation_constrained_spread(const KnowledgeBase& kb,
                                             const std::vector<RelationPattern>& patterns);

/// The original terms plus the activated entities' primary names, all
/// lowercased and stopword-filtered. `terms()` is the disjunctive union.
struct ExpandedQuery {
    std::vector<std::string> original_terms;
    std::vector<std::string> added_terms;

    std::vector<std::string> terms() const;
};

/// Append the primary name tokens of each activated entity to the query, in
/// entity-id order, deduplicated against the original terms and each other.
/// `max_added` > 0 caps the number of entities taken (0 = unlimited).
ExpandedQuery expand(const std::vector<std::string>& query_tokens,
                     const ActivationResult& activation, const KnowledgeBase& kb,
                     const StopwordSet& stopwords = default_stopwords(),
                     std::size_t max_added = 0);

/// One line per activated entity:
/// `entity<TAB>strategy<TAB>seed_or_anchor<TAB>relation<TAB>direction`.
std::string serialize_trace(const ActivationResult& activation);

}  // namespace semsearch
