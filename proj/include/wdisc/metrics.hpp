#pragma once

#include <span>
#include <string>
#include <vector>

namespace wdisc::metrics {

/// Area under the ROC curve: the probability that a random ID score exceeds
/// a random OOD score, ties counted half (Mann-Whitney). Computed by rank
/// sum with average ranks, O(n log n). auroc(a, b) + auroc(b, a) == 1.0
/// holds exactly, not just to rounding.
double auroc(std::span<const double> id_scores, std::span<const double> ood_scores);

/// False-positive rate at a true-positive-rate target: the threshold is the
/// ceil(tpr_target * n_id)-th largest ID score and both populations use a
/// >= comparison, so ties at the threshold count as positives.
double fpr_at_tpr(std::span<const double> id_scores, std::span<const double> ood_scores,
                  double tpr_target = 0.95);

struct EvalEntry {
    std::string scorer_id;
    std::string ood_dataset_id;
    double auroc = 0.0;
    double fpr95 = 0.0;
    std::size_t n_id = 0;
    std::size_t n_ood = 0;
};

struct ScorerAverage {
    std::string scorer_id;
    double auroc = 0.0;
    double fpr95 = 0.0;
};

/// Per-(scorer, OOD set) metrics plus the unweighted per-scorer mean over
/// its OOD sets.
struct EvalReport {
    std::vector<EvalEntry> entries;
    std::vector<ScorerAverage> averages;
};

struct ScoredDataset {
    std::string ood_dataset_id;
    std::vector<double> ood_scores;
};

struct ScorerResults {
    std::string scorer_id;
    std::vector<double> id_scores;
    std::vector<ScoredDataset> ood;
};

/// Fills an EvalReport for every (scorer, OOD set) pair, preserving input
/// ordering, and computes per-scorer averages.
EvalReport evaluate(const std::vector<ScorerResults>& results, double tpr_target = 0.95);

std::string report_to_json(const EvalReport& report);
std::string report_to_markdown(const EvalReport& report);

}  // namespace wdisc::metrics
