#include "semsearch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace semsearch {

namespace {

constexpr double kApTolerance = 1e-9;  // AP comparison tolerance for win/tie/loss

std::vector<std::string> split_whitespace(const std::string& text) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    std::string part;
    while (in >> part) parts.push_back(part);
    return parts;
}

[[noreturn]] void fail_parse(const std::string& name, std::size_t line_no,
                             const std::string& message) {
    throw DataError(ErrorKind::Parse, name + ":" + std::to_string(line_no) + ": " + message);
}

std::string format_double(const char* fmt, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), fmt, value);
    return buffer;
}

}  // namespace

Qrels parse_qrels(std::istream& in, const std::string& name) {
    if (!in) throw DataError(ErrorKind::Io, "cannot read " + name);
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
        std::vector<std::string> fields = split_whitespace(line);
        if (fields.size() != 4) {
            fail_parse(name, line_no, "expected `query_id 0 doc_id relevance`");
        }
        if (fields[3] != "0" && fields[3] != "1") {
            fail_parse(name, line_no, "relevance must be 0 or 1");
        }
        auto& relevant = qrels[fields[0]];  // registers the query even when rel = 0
        if (fields[3] == "1") relevant.insert(fields[2]);
    }
    return qrels;
}

Qrels load_qrels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open qrels " + path);
    return parse_qrels(in, path);
}

Run parse_run(std::istream& in, const std::string& name) {
    if (!in) throw DataError(ErrorKind::Io, "cannot read " + name);
    std::map<std::string, std::vector<std::pair<std::int64_t, std::string>>> by_query;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
        std::vector<std::string> fields = split_whitespace(line);
        if (fields.size() != 6) {
            fail_parse(name, line_no, "expected `query_id Q0 doc_id rank score tag`");
        }
        std::int64_t rank_value = 0;
        try {
            rank_value = std::stoll(fields[3]);
            (void)std::stod(fields[4]);
        } catch (const std::exception&) {
            fail_parse(name, line_no, "rank/score not numeric");
        }
        by_query[fields[0]].emplace_back(rank_value, fields[2]);
    }
    Run run;
    for (auto& [query, entries] : by_query) {
        std::stable_sort(entries.begin(), entries.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        std::set<std::string> seen;
        std::vector<std::string>& ranked = run[query];
        for (auto& [rank_value, doc] : entries) {
            if (!seen.insert(doc).second) {
                throw DataError(ErrorKind::Parse,
                                name + ": duplicate document " + doc + " for query " + query);
            }
            ranked.push_back(std::move(doc));
        }
    }
    return run;
}

Run load_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(ErrorKind::Io, "cannot open run " + path);
    return parse_run(in, path);
}

double average_precision(const std::vector<std::string>& ranked,
                         const std::set<std::string>& relevant) {
    if (relevant.empty()) throw std::invalid_argument("average_precision: empty relevant set");
    std::int64_t hits = 0;
    double sum = 0.0;
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        if (relevant.count(ranked[r]) != 0) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(r + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

std::array<double, 11> interpolated_precision_curve(const std::vector<std::string>& ranked,
                                                    const std::set<std::string>& relevant) {
    if (relevant.empty()) {
        throw std::invalid_argument("interpolated_precision_curve: empty relevant set");
    }
    std::array<double, 11> curve{};
    const std::int64_t total_relevant = static_cast<std::int64_t>(relevant.size());

    // precision and relevant count at every cutoff
    std::vector<std::pair<std::int64_t, double>> cutoffs;  // (hits@k, precision@k)
    std::int64_t hits = 0;
    for (std::size_t k = 1; k <= ranked.size(); ++k) {
        if (relevant.count(ranked[k - 1]) != 0) ++hits;
        cutoffs.emplace_back(hits, static_cast<double>(hits) / static_cast<double>(k));
    }
    for (int level = 0; level <= 10; ++level) {
        double best = 0.0;
        for (const auto& [hits_k, precision_k] : cutoffs) {
            // recall@k >= level/10  <=>  10 * hits_k >= level * |relevant|
            if (10 * hits_k >= level * total_relevant) best = std::max(best, precision_k);
        }
        curve[static_cast<std::size_t>(level)] = best;
    }
    return curve;
}

double f_measure(double precision, double recall) {
    double denom = precision + recall;
    if (denom == 0.0) return 0.0;
    return 2.0 * precision * recall / denom;
}

double mean_average_precision(const std::vector<double>& per_query_ap) {
    if (per_query_ap.empty()) {
        throw std::invalid_argument("mean_average_precision: no evaluated queries");
    }
    double sum = 0.0;
    for (double ap : per_query_ap) sum += ap;
    return sum / static_cast<double>(per_query_ap.size());
}

double improvement_pct(double map_a, double map_b) {
    if (map_b == 0.0) throw std::invalid_argument("improvement_pct: baseline MAP is zero");
    return 100.0 * (map_a - map_b) / map_b;
}

double two_sided_p(std::int64_t n_minus, std::int64_t n_plus, std::int64_t permutations) {
    if (permutations <= 0) throw std::invalid_argument("two_sided_p: permutations must be >= 1");
    return std::min(1.0, static_cast<double>(n_minus + n_plus) /
                             static_cast<double>(permutations));
}

namespace {

std::vector<double> paired_differences(const std::vector<double>& ap_a,
                                       const std::vector<double>& ap_b) {
    if (ap_a.size() != ap_b.size()) {
        throw std::invalid_argument("fisher_randomization: lists differ in length");
    }
    if (ap_a.empty()) throw std::invalid_argument("fisher_randomization: empty lists");
    std::vector<double> d(ap_a.size());
    for (std::size_t i = 0; i < ap_a.size(); ++i) d[i] = ap_a[i] - ap_b[i];
    return d;
}

double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

RandomizationReport fisher_randomization(const std::vector<double>& ap_a,
                                         const std::vector<double>& ap_b,
                                         std::int64_t permutations, std::uint64_t seed) {
    if (permutations < 1) {
        throw std::invalid_argument("fisher_randomization: permutations must be >= 1");
    }
    std::vector<double> d = paired_differences(ap_a, ap_b);
    const std::size_t n = d.size();
    const double observed = mean_of(d);
    const double threshold = std::fabs(observed);

    std::mt19937_64 rng(seed);
    std::int64_t n_plus = 0;
    std::int64_t n_minus = 0;
    for (std::int64_t s = 0; s < permutations; ++s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += (rng() & 1u) != 0 ? -d[i] : d[i];
        }
        double permuted = sum / static_cast<double>(n);
        if (permuted >= threshold) ++n_plus;
        if (permuted <= -threshold) ++n_minus;
    }

    RandomizationReport report;
    report.observed_diff = observed;
    report.n_minus = n_minus;
    report.n_plus = n_plus;
    report.permutations = permutations;
    report.p_two_sided = two_sided_p(n_minus, n_plus, permutations);
    report.rng_seed = seed;
    report.mode = "sampled";
    return report;
}

RandomizationReport fisher_randomization_exhaustive(const std::vector<double>& ap_a,
                                                    const std::vector<double>& ap_b) {
    std::vector<double> d = paired_differences(ap_a, ap_b);
    const std::size_t n = d.size();
    if (n > 20) {
        throw std::invalid_argument("fisher_randomization_exhaustive: more than 20 queries");
    }
    const double observed = mean_of(d);
    const double threshold = std::fabs(observed);
    const std::uint64_t total = std::uint64_t{1} << n;

    std::int64_t n_plus = 0;
    std::int64_t n_minus = 0;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sum += (mask >> i & 1u) != 0 ? -d[i] : d[i];
        }
        double permuted = sum / static_cast<double>(n);
        if (permuted >= threshold) ++n_plus;
        if (permuted <= -threshold) ++n_minus;
    }

    RandomizationReport report;
    report.observed_diff = observed;
    report.n_minus = n_minus;
    report.n_plus = n_plus;
    report.permutations = static_cast<std::int64_t>(total);
    report.p_two_sided = two_sided_p(n_minus, n_plus, report.permutations);
    report.rng_seed = 0;
    report.mode = "exhaustive";
    return report;
}

std::string RandomizationReport::to_json() const {
    nlohmann::json j;
    j["observed_diff"] = observed_diff;
    j["n_minus"] = n_minus;
    j["n_plus"] = n_plus;
    j["permutations"] = permutations;
    j["p_two_sided"] = p_two_sided;
    j["rng_seed"] = rng_seed;
    j["mode"] = mode;
    return j.dump();
}

RandomizationReport RandomizationReport::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw DataError(ErrorKind::Format, "randomization report: not a JSON object");
    }
    RandomizationReport report;
    try {
        report.observed_diff = j.at("observed_diff").get<double>();
        report.n_minus = j.at("n_minus").get<std::int64_t>();
        report.n_plus = j.at("n_plus").get<std::int64_t>();
        report.permutations = j.at("permutations").get<std::int64_t>();
        report.p_two_sided = j.at("p_two_sided").get<double>();
        report.rng_seed = j.at("rng_seed").get<std::uint64_t>();
        report.mode = j.at("mode").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(ErrorKind::Format, std::string("randomization report: ") + e.what());
    }
    if (report.permutations <= 0 || report.n_minus < 0 || report.n_plus < 0 ||
        report.n_minus > report.permutations || report.n_plus > report.permutations) {
        throw DataError(ErrorKind::Format, "randomization report: counts out of range");
    }
    double expected = two_sided_p(report.n_minus, report.n_plus, report.permutations);
    if (std::fabs(expected - report.p_two_sided) > 1e-12) {
        throw DataError(ErrorKind::Format,
                        "randomization report: p does not equal (N- + N+)/S");
    }
    return report;
}

ModelEval evaluate_run(const Run& run, const Qrels& qrels, const std::string& tag) {
    ModelEval eval;
    eval.tag = tag;
    static const std::vector<std::string> kEmptyRanking;

    std::vector<double> aps;
    std::array<double, 11> precision_sum{};
    std::array<double, 11> f_sum{};
    for (const auto& [query, relevant] : qrels) {
        if (relevant.empty()) continue;
        auto it = run.find(query);
        const std::vector<std::string>& ranked = it == run.end() ? kEmptyRanking : it->second;
        double ap = average_precision(ranked, relevant);
        std::array<double, 11> curve = interpolated_precision_curve(ranked, relevant);
        eval.per_query_ap[query] = ap;
        eval.per_query_curve[query] = curve;
        aps.push_back(ap);
        for (int level = 0; level <= 10; ++level) {
            precision_sum[level] += curve[level];
            f_sum[level] += f_measure(curve[level], level / 10.0);
        }
    }
    if (aps.empty()) {
        throw DataError(ErrorKind::Format, "evaluation: no query with relevant documents");
    }
    eval.map = mean_average_precision(aps);
    for (int level = 0; level <= 10; ++level) {
        eval.avg_precision[level] = precision_sum[level] / static_cast<double>(aps.size());
        eval.f_macro[level] = f_sum[level] / static_cast<double>(aps.size());
        eval.f_of_avg[level] = f_measure(eval.avg_precision[level], level / 10.0);
    }
    return eval;
}

EvalReport build_eval_report(const Run& run_a, const std::string& tag_a,
                             const std::optional<Run>& run_b, const std::string& tag_b,
                             const Qrels& qrels, std::int64_t permutations,
                             std::uint64_t seed) {
    EvalReport report;
    std::vector<std::string> evaluated;
    for (const auto& [query, relevant] : qrels) {
        if (relevant.empty()) {
            report.excluded_queries.push_back(query);
        } else {
            evaluated.push_back(query);
        }
    }
    if (evaluated.empty()) {
        throw DataError(ErrorKind::Format, "evaluation: qrels contain no relevant documents");
    }
    auto overlaps = [&evaluated](const Run& run) {
        return std::any_of(evaluated.begin(), evaluated.end(),
                           [&run](const std::string& q) { return run.count(q) != 0; });
    };
    if (!overlaps(run_a) || (run_b && !overlaps(*run_b))) {
        throw DataError(ErrorKind::Format, "evaluation: run shares no query id with the qrels");
    }

    report.model_a = evaluate_run(run_a, qrels, tag_a);
    if (!run_b) return report;

    report.model_b = evaluate_run(*run_b, qrels, tag_b);

    ModelComparison comparison;
    std::vector<double> ap_a;
    std::vector<double> ap_b;
    for (const std::string& query : evaluated) {
        double a = report.model_a.per_query_ap.at(query);
        double b = report.model_b->per_query_ap.at(query);
        ap_a.push_back(a);
        ap_b.push_back(b);
        if (a > b + kApTolerance) {
            ++comparison.wins;
        } else if (b > a + kApTolerance) {
            ++comparison.losses;
        } else {
            ++comparison.ties;
        }
    }
    comparison.improvement_pct = improvement_pct(report.model_a.map, report.model_b->map);
    report.comparison = comparison;
    report.randomization = permutations > 0
                               ? fisher_randomization(ap_a, ap_b, permutations, seed)
                               : fisher_randomization_exhaustive(ap_a, ap_b);
    return report;
}

namespace {

void render_curve_row(std::ostringstream& out, const std::string& label,
                      const std::array<double, 11>& values) {
    out << label;
    for (double value : values) out << '\t' << format_double("%5.1f", 100.0 * value);
    out << '\n';
}

}  // namespace

std::string render_report_table(const EvalReport& report) {
    std::ostringstream out;
    if (!report.excluded_queries.empty()) {
        out << "excluded queries (no relevant documents):";
        for (const std::string& query : report.excluded_queries) out << ' ' << query;
        out << '\n';
    }

    out << "query\tAP[" << report.model_a.tag << ']';
    if (report.model_b) out << "\tAP[" << report.model_b->tag << ']';
    out << '\n';
    for (const auto& [query, ap] : report.model_a.per_query_ap) {
        out << query << '\t' << format_double("%.4f", ap);
        if (report.model_b) {
            out << '\t' << format_double("%.4f", report.model_b->per_query_ap.at(query));
        }
        out << '\n';
    }
    out << "MAP\t" << format_double("%.4f", report.model_a.map);
    if (report.model_b) out << '\t' << format_double("%.4f", report.model_b->map);
    out << '\n';

    out << "\n11-point interpolated precision and F (percent)\n";
    out << "recall";
    for (int level = 0; level <= 10; ++level) out << '\t' << format_double("%5.0f", level * 10.0);
    out << '\n';
    render_curve_row(out, "P[" + report.model_a.tag + "]", report.model_a.avg_precision);
    render_curve_row(out, "Fq[" + report.model_a.tag + "]", report.model_a.f_macro);
    render_curve_row(out, "Fp[" + report.model_a.tag + "]", report.model_a.f_of_avg);
    if (report.model_b) {
        render_curve_row(out, "P[" + report.model_b->tag + "]", report.model_b->avg_precision);
        render_curve_row(out, "Fq[" + report.model_b->tag + "]", report.model_b->f_macro);
        render_curve_row(out, "Fp[" + report.model_b->tag + "]", report.model_b->f_of_avg);
    }

    if (report.comparison) {
        out << "\nimprovement of " << report.model_a.tag << " over " << report.model_b->tag
            << ": " << format_double("%.1f", report.comparison->improvement_pct) << "%\n";
        out << "wins/ties/losses: " << report.comparison->wins << '/' << report.comparison->ties
            << '/' << report.comparison->losses << '\n';
    }
    if (report.randomization) {
        const RandomizationReport& r = *report.randomization;
        out << "Fisher randomization (" << r.mode << "): diff="
            << format_double("%.4f", r.observed_diff) << " N-=" << r.n_minus
            << " N+=" << r.n_plus << " S=" << r.permutations
            << " p=" << format_double("%.5f", r.p_two_sided) << " seed=" << r.rng_seed << '\n';
    }
    return out.str();
}

namespace {

nlohmann::json model_to_json(const ModelEval& model) {
    nlohmann::json j;
    j["tag"] = model.tag;
    j["map"] = model.map;
    j["per_query_ap"] = model.per_query_ap;
    nlohmann::json curves = nlohmann::json::object();
    for (const auto& [query, curve] : model.per_query_curve) curves[query] = curve;
    j["per_query_precision_curve"] = std::move(curves);
    j["avg_precision_curve"] = model.avg_precision;
    j["f_macro_curve"] = model.f_macro;
    j["f_of_avg_curve"] = model.f_of_avg;
    return j;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["model_a"] = model_to_json(report.model_a);
    if (report.model_b) j["model_b"] = model_to_json(*report.model_b);
    j["excluded_queries"] = report.excluded_queries;
    if (report.comparison) {
        j["comparison"] = {{"wins", report.comparison->wins},
                           {"ties", report.comparison->ties},
                           {"losses", report.comparison->losses},
                           {"improvement_pct", report.comparison->improvement_pct}};
    }
    if (report.randomization) {
        j["randomization"] = nlohmann::json::parse(report.randomization->to_json());
    }
    return j.dump(2);
}

}  // namespace semsearch
