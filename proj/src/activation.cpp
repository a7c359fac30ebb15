#include "semsearch/activation.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace semsearch {

const char* to_string(SpreadStrategy strategy) {
    switch (strategy) {
        case SpreadStrategy::Free: return "free";
        case SpreadStrategy::DistanceCsa: return "distance-csa";
        case SpreadStrategy::RelationCsa: return "r-csa";
    }
    return "unknown";
}

namespace {

ActivationResult spread(const KnowledgeBase& kb, const std::set<std::string>& seeds, int depth,
                        SpreadStrategy strategy) {
    if (depth < 1) throw std::invalid_argument("spread depth must be >= 1");
    for (const std::string& seed : seeds) {
        if (!kb.has_entity(seed)) throw std::invalid_argument("unknown seed entity: " + seed);
    }

    std::map<std::string, std::vector<const Fact*>> adjacency;
    for (const Fact& fact : kb.facts()) {
        adjacency[fact.subject].push_back(&fact);
        if (fact.object != fact.subject) adjacency[fact.object].push_back(&fact);
    }

    ActivationResult result;
    result.strategy = strategy;
    std::set<std::string> visited = seeds;
    std::set<std::string> frontier = seeds;
    std::map<std::string, std::string> origin;  // node -> seed it was reached from
    for (const std::string& seed : seeds) origin[seed] = seed;

    for (int hop = 0; hop < depth && !frontier.empty(); ++hop) {
        std::set<std::string> next;
        for (const std::string& node : frontier) {
            auto it = adjacency.find(node);
            if (it == adjacency.end()) continue;
            for (const Fact* fact : it->second) {
                const std::string& other =
                    fact->subject == node ? fact->object : fact->subject;
                if (visited.count(other) != 0 || next.count(other) != 0) continue;
                next.insert(other);
                origin[other] = origin[node];
                result.trace.push_back(ActivationTraceEntry{other, origin[node], *fact});
            }
        }
        visited.insert(next.begin(), next.end());
        frontier = std::move(next);
    }

    for (const std::string& node : visited) {
        if (seeds.count(node) == 0) result.activated.insert(node);
    }
    return result;
}

}  // namespace

ActivationResult free_spread(const KnowledgeBase& kb, const std::set<std::string>& seeds,
                             int depth) {
    return spread(kb, seeds, depth, SpreadStrategy::Free);
}

ActivationResult distance_constrained_spread(const KnowledgeBase& kb,
                                             const std::set<std::string>& seeds) {
    return spread(kb, seeds, 1, SpreadStrategy::DistanceCsa);
}

ActivationResult relation_constrained_spread(const KnowledgeBase& kb,
                                             const std::vector<RelationPattern>& patterns) {
    ActivationResult result;
    result.strategy = SpreadStrategy::RelationCsa;

    std::set<std::string> anchors;
    for (const RelationPattern& pattern : patterns) anchors.insert(pattern.anchor);

    for (const RelationPattern& pattern : patterns) {
        Direction direction = pattern.anchor_role == Side::Subject ? Direction::AnchorIsSubject
                                                                   : Direction::AnchorIsObject;
        for (const std::string& id : kb.neighbors(pattern.anchor, pattern.relation, direction)) {
            if (!kb.is_subclass(kb.class_of(id), pattern.target_class)) continue;
            if (anchors.count(id) != 0) continue;
            if (!result.activated.insert(id).second) continue;
            Fact fact = pattern.anchor_role == Side::Subject
                            ? Fact{pattern.anchor, pattern.relation, id}
                            : Fact{id, pattern.relation, pattern.anchor};
            result.trace.push_back(ActivationTraceEntry{id, pattern.anchor, std::move(fact)});
        }
    }
    return result;
}

std::vector<std::string> ExpandedQuery::terms() const {
    std::vector<std::string> all = original_terms;
    all.insert(all.end(), added_terms.begin(), added_terms.end());
    return all;
}

ExpandedQuery expand(const std::vector<std::string>& query_tokens,
                     const ActivationResult& activation, const KnowledgeBase& kb,
                     const StopwordSet& stopwords, std::size_t max_added) {
    ExpandedQuery expanded;
    std::set<std::string> seen;
    for (const std::string& token : query_tokens) {
        std::string lower = ascii_lower(token);
        if (lower.empty() || stopwords.count(lower) != 0) continue;
        if (seen.insert(lower).second) expanded.original_terms.push_back(std::move(lower));
    }

    std::size_t taken = 0;
    for (const std::string& id : activation.activated) {  // entity-id order
        if (max_added != 0 && taken == max_added) break;
        ++taken;
        for (std::string& term : tokenize_lower(kb.entity(id).primary_name)) {
            if (stopwords.count(term) != 0) continue;
            if (seen.insert(term).second) expanded.added_terms.push_back(std::move(term));
        }
    }
    return expanded;
}

std::string serialize_trace(const ActivationResult& activation) {
    std::ostringstream out;
    for (const ActivationTraceEntry& entry : activation.trace) {
        const char* direction = entry.entity == entry.fact.subject ? "subject" : "object";
        out << entry.entity << '\t' << to_string(activation.strategy) << '\t' << entry.origin
            << '\t' << entry.fact.relation << '\t' << direction << '\n';
    }
    return out.str();
}

}  // namespace semsearch
