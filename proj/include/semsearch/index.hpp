#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "semsearch/text.hpp"

namespace semsearch {

struct Document {
    std::string id;
    std::string text;
};

struct Posting {
    std::string doc;
    std::int64_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct ScoredDoc {
    std::string doc;
    double score = 0.0;

    bool operator==(const ScoredDoc&) const = default;
};

/// tf * ln(N / df). Zero when the term is absent (tf = 0), unknown (df = 0)
/// or ubiquitous (df = N, since ln 1 = 0). df > N is a programming error.
double tf_idf_weight(std::int64_t tf, std::int64_t df, std::int64_t n_docs);

/// Term -> postings (sorted by doc id) plus per-document vector norms, built
/// once and then read-only. Documents that normalize to zero terms still
/// count toward N and keep a zero norm.
class InvertedIndex {
public:
    InvertedIndex() = default;

    std::int64_t doc_count() const { return static_cast<std::int64_t>(doc_ids_.size()); }
    std::size_t vocabulary_size() const { return postings_.size(); }

    std::int64_t df(const std::string& term) const;
    const std::map<std::string, std::vector<Posting>>& postings() const { return postings_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }  // sorted
    double doc_norm(const std::string& doc) const;
    const std::map<std::string, double>& doc_norms() const { return doc_norms_; }

    /// Recomputes norms from the given postings. `doc_ids` must cover every
    /// document referenced by the postings.
    static InvertedIndex from_postings(std::vector<std::string> doc_ids,
                                       std::map<std::string, std::vector<Posting>> postings);

    bool operator==(const InvertedIndex&) const = default;

private:
    std::vector<std::string> doc_ids_;
    std::map<std::string, std::vector<Posting>> postings_;
    std::map<std::string, double> doc_norms_;
};

/// Index a corpus through the normalize_text pipeline. Duplicate ids are a
/// load error; the result is independent of document order.
InvertedIndex build_index(const std::vector<Document>& corpus,
                          const StopwordSet& stopwords = default_stopwords());

/// Cosine ranking of the (already normalized) query terms against the index.
/// Query weights use query-local tf with the index's df and N. At most `k`
/// results, descending score, ties broken by ascending doc id; zero-score
/// documents are omitted. Scores are clamped into [0, 1].
std::vector<ScoredDoc> rank(const InvertedIndex& index,
                            const std::vector<std::string>& query_terms, std::int64_t k);

/// JSON-lines corpus: one {"id": ..., "text": ...} object per line.
std::vector<Document> read_corpus_jsonl(const std::string& path);

/// Versioned single-file JSON persistence; save/load round-trips losslessly
/// and the bytes are identical for identical input.
void save_index(const InvertedIndex& index, const std::string& path);
InvertedIndex load_index(const std::string& path);

}  // namespace semsearch
