#include "wdisc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "wdisc/error.hpp"

namespace wdisc::metrics {

namespace {

void require_scores(std::span<const double> id_scores,
                    std::span<const double> ood_scores) {
    if (id_scores.empty() || ood_scores.empty())
        throw Error(ErrorKind::EmptyInput, "metric needs non-empty ID and OOD scores");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(id_scores.begin(), id_scores.end(), finite) ||
        !std::all_of(ood_scores.begin(), ood_scores.end(), finite))
        throw Error(ErrorKind::NonFinite, "metric inputs contain NaN or Inf");
}

}  // namespace

double auroc(std::span<const double> id_scores, std::span<const double> ood_scores) {
    require_scores(id_scores, ood_scores);
    const std::size_t n = id_scores.size();
    const std::size_t m = ood_scores.size();

    // Pool, sort, and rank with average ranks for ties. Scores and tie-group
    // midpoints are multiples of 0.5, so the ID rank sum is exact in double
    // precision; wins + half-ties follows from it without pairwise loops.
    struct Tagged {
        double score;
        bool is_id;
    };
    std::vector<Tagged> pool;
    pool.reserve(n + m);
    for (double s : id_scores) pool.push_back({s, true});
    for (double s : ood_scores) pool.push_back({s, false});
    std::sort(pool.begin(), pool.end(),
              [](const Tagged& a, const Tagged& b) { return a.score < b.score; });

    double id_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < pool.size()) {
        std::size_t j = i;
        std::size_t id_in_group = 0;
        while (j < pool.size() && pool[j].score == pool[i].score) {
            if (pool[j].is_id) ++id_in_group;
            ++j;
        }
        // 1-based ranks i+1 .. j share the average rank (i + j + 1) / 2.
        const double avg_rank = 0.5 * static_cast<double>(i + j + 1);
        id_rank_sum += avg_rank * static_cast<double>(id_in_group);
        i = j;
    }

    const double wins_plus_half_ties =
        id_rank_sum - 0.5 * static_cast<double>(n) * static_cast<double>(n + 1);
    const double pairs = static_cast<double>(n) * static_cast<double>(m);

    // Dividing the smaller of (wins, complement) keeps auroc(a,b)+auroc(b,a)
    // an exact 1.0: the two calls hit opposite branches and produce y and
    // fl(1-y) with y <= 1/2, which sum to exactly 1 under round-to-nearest.
    if (wins_plus_half_ties <= 0.5 * pairs) return wins_plus_half_ties / pairs;
    return 1.0 - (pairs - wins_plus_half_ties) / pairs;
}

double fpr_at_tpr(std::span<const double> id_scores, std::span<const double> ood_scores,
                  double tpr_target) {
    require_scores(id_scores, ood_scores);
    if (!(tpr_target > 0.0) || tpr_target > 1.0)
        throw Error(ErrorKind::BadArgument, "tpr_target must be in (0, 1]");

    const std::size_t n = id_scores.size();
    std::vector<double> sorted(id_scores.begin(), id_scores.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::size_t k = static_cast<std::size_t>(
        std::ceil(tpr_target * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);
    const double threshold = sorted[k - 1];

    const auto above = static_cast<double>(std::count_if(
        ood_scores.begin(), ood_scores.end(),
        [threshold](double s) { return s >= threshold; }));
    return above / static_cast<double>(ood_scores.size());
}

EvalReport evaluate(const std::vector<ScorerResults>& results, double tpr_target) {
    EvalReport report;
    for (const auto& scorer : results) {
        if (scorer.ood.empty())
            throw Error(ErrorKind::EmptyInput,
                        "scorer '" + scorer.scorer_id + "' has no OOD datasets");
        double auroc_sum = 0.0;
        double fpr_sum = 0.0;
        for (const auto& ds : scorer.ood) {
            EvalEntry e;
            e.scorer_id = scorer.scorer_id;
            e.ood_dataset_id = ds.ood_dataset_id;
            e.auroc = auroc(scorer.id_scores, ds.ood_scores);
            e.fpr95 = fpr_at_tpr(scorer.id_scores, ds.ood_scores, tpr_target);
            e.n_id = scorer.id_scores.size();
            e.n_ood = ds.ood_scores.size();
            auroc_sum += e.auroc;
            fpr_sum += e.fpr95;
            report.entries.push_back(std::move(e));
        }
        const double count = static_cast<double>(scorer.ood.size());
        report.averages.push_back(
            {scorer.scorer_id, auroc_sum / count, fpr_sum / count});
    }
    return report;
}

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        j["entries"].push_back({{"scorer", e.scorer_id},
                                {"ood_set", e.ood_dataset_id},
                                {"auroc", e.auroc},
                                {"fpr95", e.fpr95},
                                {"n_id", e.n_id},
                                {"n_ood", e.n_ood}});
    }
    j["averages"] = nlohmann::ordered_json::array();
    for (const auto& a : report.averages)
        j["averages"].push_back(
            {{"scorer", a.scorer_id}, {"auroc", a.auroc}, {"fpr95", a.fpr95}});
    return j.dump(2) + "\n";
}

std::string report_to_markdown(const EvalReport& report) {
    // One row per scorer, one FPR95/AUROC column pair per OOD set, plus the
    // per-scorer average pair at the end.
    std::vector<std::string> sets;
    for (const auto& e : report.entries)
        if (std::find(sets.begin(), sets.end(), e.ood_dataset_id) == sets.end())
            sets.push_back(e.ood_dataset_id);
    std::vector<std::string> scorers;
    for (const auto& a : report.averages) scorers.push_back(a.scorer_id);

    auto cell = [&](const std::string& scorer, const std::string& set,
                    bool want_auroc) -> std::string {
        for (const auto& e : report.entries) {
            if (e.scorer_id == scorer && e.ood_dataset_id == set) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.2f",
                              100.0 * (want_auroc ? e.auroc : e.fpr95));
                return buf;
            }
        }
        return "-";
    };

    std::ostringstream md;
    md << "| Scorer |";
    for (const auto& s : sets) md << ' ' << s << " FPR95 | " << s << " AUROC |";
    md << " Avg FPR95 | Avg AUROC |\n";
    md << "|---|";
    for (std::size_t i = 0; i < sets.size(); ++i) md << "---|---|";
    md << "---|---|\n";
    for (const auto& a : report.averages) {
        md << "| " << a.scorer_id << " |";
        for (const auto& s : sets)
            md << ' ' << cell(a.scorer_id, s, false) << " | " << cell(a.scorer_id, s, true)
               << " |";
        char avg[64];
        std::snprintf(avg, sizeof(avg), " %.2f | %.2f |", 100.0 * a.fpr95,
                      100.0 * a.auroc);
        md << avg << '\n';
    }
    return md.str();
}

}  // namespace wdisc::metrics
