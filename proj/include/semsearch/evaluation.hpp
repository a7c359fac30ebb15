#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semsearch/error.hpp"

namespace semsearch {

/// query id -> relevant document ids. A query judged only non-relevant keeps
/// an (empty) entry so reports can list it as excluded.
using Qrels = std::map<std::string, std::set<std::string>>;

/// query id -> ranked document ids (best first).
using Run = std::map<std::string, std::vector<std::string>>;

/// TREC-style qrels: `query_id 0 doc_id relevance(0|1)` per line.
Qrels load_qrels(const std::string& path);
Qrels parse_qrels(std::istream& in, const std::string& name);

/// TREC-style run: `query_id Q0 doc_id rank score tag`. Rankings are ordered
/// by the rank field.
Run load_run(const std::string& path);
Run parse_run(std::istream& in, const std::string& name);

/// Mean of precision@r over the ranks r holding a relevant document, divided
/// by the total number of relevant documents (unretrieved ones contribute 0).
double average_precision(const std::vector<std::string>& ranked,
                         const std::set<std::string>& relevant);

/// Max-interpolated precision at recall 0.0, 0.1, ..., 1.0:
/// P(r) = max { precision@k : recall@k >= r }, or 0 when no cutoff reaches r.
std::array<double, 11> interpolated_precision_curve(const std::vector<std::string>& ranked,
                                                    const std::set<std::string>& relevant);

/// Balanced harmonic mean 2PR/(P+R); 0 when P + R = 0.
double f_measure(double precision, double recall);

double mean_average_precision(const std::vector<double>& per_query_ap);

/// Relative improvement of a over b, in percent: 100 * (a - b) / b.
double improvement_pct(double map_a, double map_b);

/// min(1, (n_minus + n_plus) / permutations) — the reporting identity.
double two_sided_p(std::int64_t n_minus, std::int64_t n_plus, std::int64_t permutations);

struct RandomizationReport {
    double observed_diff = 0.0;  // MAP(A) - MAP(B)
    std::int64_t n_minus = 0;    // permutations with mean <= -|diff|
    std::int64_t n_plus = 0;     // permutations with mean >= +|diff|
    std::int64_t permutations = 0;
    double p_two_sided = 1.0;
    std::uint64_t rng_seed = 0;
    std::string mode;  // "sampled" | "exhaustive"

    std::string to_json() const;
    /// Parses and re-checks the p identity; throws DataError on violation.
    static RandomizationReport from_json(const std::string& text);
};

/// Fisher randomization test on per-query score differences: each of the S
/// permutations flips every difference's sign independently; N+ and N- count
/// permutation means at or beyond +/-|observed|. Deterministic given seed.
RandomizationReport fisher_randomization(const std::vector<double>& ap_a,
                                         const std::vector<double>& ap_b,
                                         std::int64_t permutations, std::uint64_t seed);

/// Enumerates all 2^n sign vectors (n <= 20).
RandomizationReport fisher_randomization_exhaustive(const std::vector<double>& ap_a,
                                                    const std::vector<double>& ap_b);

/// Metrics of one run against the qrels, over the queries with at least one
/// relevant document.
struct ModelEval {
    std::string tag;
    std::map<std::string, double> per_query_ap;
    std::map<std::string, std::array<double, 11>> per_query_curve;
    double map = 0.0;
    std::array<double, 11> avg_precision{};  // macro average per recall level
    std::array<double, 11> f_macro{};        // mean of per-query F at each level
    std::array<double, 11> f_of_avg{};       // F applied to the averaged precision
};

struct ModelComparison {
    int wins = 0;    // queries where A's AP > B's (1e-9 tolerance)
    int ties = 0;
    int losses = 0;
    double improvement_pct = 0.0;  // of MAP(A) over MAP(B)
};

struct EvalReport {
    ModelEval model_a;
    std::optional<ModelEval> model_b;
    std::vector<std::string> excluded_queries;  // judged but no relevant docs
    std::optional<ModelComparison> comparison;
    std::optional<RandomizationReport> randomization;
};

ModelEval evaluate_run(const Run& run, const Qrels& qrels, const std::string& tag);

/// Full report for one or two runs; with two runs, adds the win/tie/loss
/// comparison and the Fisher test (`permutations` <= 0 selects exhaustive
/// mode). Throws DataError when a run shares no query with the qrels.
EvalReport build_eval_report(const Run& run_a, const std::string& tag_a,
                             const std::optional<Run>& run_b, const std::string& tag_b,
                             const Qrels& qrels, std::int64_t permutations,
                             std::uint64_t seed);

std::string render_report_table(const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace semsearch
