#include "semsearch/index.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "semsearch/error.hpp"

namespace semsearch {

double tf_idf_weight(std::int64_t tf, std::int64_t df, std::int64_t n_docs) {
    assert(df >= 0 && df <= n_docs && tf >= 0);
    if (tf <= 0 || df <= 0 || df == n_docs) return 0.0;
    return static_cast<double>(tf) *
           std::log(static_cast<double>(n_docs) / static_cast<double>(df));
}

std::int64_t InvertedIndex::df(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : static_cast<std::int64_t>(it->second.size());
}

double InvertedIndex::doc_norm(const std::string& doc) const {
    auto it = doc_norms_.find(doc);
    return it == doc_norms_.end() ? 0.0 : it->second;
}

InvertedIndex InvertedIndex::from_postings(
    std::vector<std::string> doc_ids, std::map<std::string, std::vector<Posting>> postings) {
    InvertedIndex index;
    std::sort(doc_ids.begin(), doc_ids.end());
    index.doc_ids_ = std::move(doc_ids);
    index.postings_ = std::move(postings);

    std::int64_t n = index.doc_count();
    for (const std::string& doc : index.doc_ids_) index.doc_norms_[doc] = 0.0;
    // accumulate squared weights per document, in sorted term order
    for (const auto& [term, postings_list] : index.postings_) {
        std::int64_t df = static_cast<std::int64_t>(postings_list.size());
        for (const Posting& posting : postings_list) {
            auto it = index.doc_norms_.find(posting.doc);
            if (it == index.doc_norms_.end()) {
                throw DataError(ErrorKind::Format,
                                "posting references undeclared document " + posting.doc);
            }
            double w = tf_idf_weight(posting.tf, df, n);
            it->second += w * w;
        }
    }
    for (auto& [doc, norm] : index.doc_norms_) norm = std::sqrt(norm);
    return index;
}

InvertedIndex build_index(const std::vector<Document>& corpus, const StopwordSet& stopwords) {
    std::map<std::string, std::map<std::string, std::int64_t>> term_doc_tf;
    std::vector<std::string> doc_ids;
    {
        std::set<std::string> seen;
        for (const Document& doc : corpus) {
            if (!seen.insert(doc.id).second) {
                throw DataError(ErrorKind::DuplicateDocument, "duplicate document id " + doc.id);
            }
            doc_ids.push_back(doc.id);
            for (const std::string& term : normalize_text(doc.text, stopwords)) {
                ++term_doc_tf[term][doc.id];
            }
        }
    }
    std::map<std::string, std::vector<Posting>> postings;
    for (const auto& [term, doc_tf] : term_doc_tf) {
        std::vector<Posting>& list = postings[term];
        list.reserve(doc_tf.size());
        for (const auto& [doc, tf] : doc_tf) list.push_back(Posting{doc, tf});
    }
    return InvertedIndex::from_postings(std::move(doc_ids), std::move(postings));
}

std::vector<ScoredDoc> rank(const InvertedIndex& index,
                            const std::vector<std::string>& query_terms, std::int64_t k) {
    if (k <= 0) throw std::invalid_argument("result cap k must be >= 1");

    std::map<std::string, std::int64_t> query_tf;
    for (const std::string& term : query_terms) ++query_tf[term];

    std::int64_t n = index.doc_count();
    double query_norm_sq = 0.0;
    for (const auto& [term, tf] : query_tf) {
        double w = tf_idf_weight(tf, index.df(term), n);
        query_norm_sq += w * w;
    }
    if (query_norm_sq == 0.0) return {};
    double query_norm = std::sqrt(query_norm_sq);

    std::map<std::string, double> dot;
    for (const auto& [term, tf] : query_tf) {
        auto it = index.postings().find(term);
        if (it == index.postings().end()) continue;
        std::int64_t df = static_cast<std::int64_t>(it->second.size());
        double wq = tf_idf_weight(tf, df, n);
        if (wq == 0.0) continue;
        for (const Posting& posting : it->second) {
            dot[posting.doc] += wq * tf_idf_weight(posting.tf, df, n);
        }
    }

    std::vector<ScoredDoc> scored;
    for (const auto& [doc, product] : dot) {
        double score = std::min(1.0, product / (query_norm * index.doc_norm(doc)));
        if (score > 0.0) scored.push_back(ScoredDoc{doc, score});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc < b.doc;
    });
    if (scored.size() > static_cast<std::size_t>(k)) scored.resize(static_cast<std::size_t>(k));
    return scored;
}

std::vector<Document> read_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open corpus " + path);
    std::vector<Document> docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json parsed = nlohmann::json::parse(line, nullptr, false);
        if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("id") ||
            !parsed.contains("text") || !parsed["id"].is_string() ||
            !parsed["text"].is_string()) {
            throw DataError(ErrorKind::Parse,
                            path + ":" + std::to_string(line_no) +
                                ": expected {\"id\": string, \"text\": string}");
        }
        docs.push_back(Document{parsed["id"].get<std::string>(),
                                parsed["text"].get<std::string>()});
    }
    return docs;
}

namespace {
constexpr const char* kIndexFormat = "semsearch-index";
constexpr int kIndexVersion = 1;
}  // namespace

void save_index(const InvertedIndex& index, const std::string& path) {
    nlohmann::json j;
    j["format"] = kIndexFormat;
    j["version"] = kIndexVersion;
    j["doc_ids"] = index.doc_ids();
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, list] : index.postings()) {
        nlohmann::json entries = nlohmann::json::array();
        for (const Posting& posting : list) {
            entries.push_back(nlohmann::json::array({posting.doc, posting.tf}));
        }
        postings[term] = std::move(entries);
    }
    j["postings"] = std::move(postings);

    std::ofstream out(path);
    if (!out) throw DataError(ErrorKind::Io, "cannot write index " + path);
    out << j.dump() << '\n';
}

InvertedIndex load_index(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open index " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw DataError(ErrorKind::Format, path + ": not a JSON index file");
    }
    if (j.value("format", "") != kIndexFormat || j.value("version", 0) != kIndexVersion) {
        throw DataError(ErrorKind::Format, path + ": unsupported index format/version");
    }
    if (!j.contains("doc_ids") || !j["doc_ids"].is_array() || !j.contains("postings") ||
        !j["postings"].is_object()) {
        throw DataError(ErrorKind::Format, path + ": missing doc_ids/postings");
    }
    std::vector<std::string> doc_ids;
    for (const auto& id : j["doc_ids"]) {
        if (!id.is_string()) throw DataError(ErrorKind::Format, path + ": bad doc id");
        doc_ids.push_back(id.get<std::string>());
    }
    std::map<std::string, std::vector<Posting>> postings;
    for (const auto& [term, entries] : j["postings"].items()) {
        std::vector<Posting>& list = postings[term];
        for (const auto& entry : entries) {
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
                !entry[1].is_number_integer()) {
                throw DataError(ErrorKind::Format, path + ": bad posting for term " + term);
            }
            list.push_back(Posting{entry[0].get<std::string>(), entry[1].get<std::int64_t>()});
        }
    }
    return InvertedIndex::from_postings(std::move(doc_ids), std::move(postings));
}

}  // namespace semsearch
