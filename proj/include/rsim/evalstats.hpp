#pragma once

#include "rsim/corpus.hpp"
#include "rsim/embedding.hpp"
#include "rsim/jsonio.hpp"
#include "rsim/residual.hpp"
#include "rsim/simspace.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace rsim {

struct ScoredSet {
    std::vector<double> scores;
    std::vector<int> labels; // +1 / -1
    std::string system_tag;
};

/// ROC-AUC via the Mann-Whitney rank statistic with mid-rank tie handling.
/// Throws rsim::Error for empty or single-class input.
double auc(const ScoredSet& set);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Monotone ROC curve from (0,0) to (1,1), one point per distinct score.
std::vector<RocPoint> roc_curve(const ScoredSet& set);

double trapezoid_area(const std::vector<RocPoint>& curve);

struct ThresholdMetrics {
    double accuracy = 0.0;
    double f1 = 0.0; // for the +1 class
};

ThresholdMetrics metrics_at(const ScoredSet& set, double threshold);

struct ThresholdObjective {
    enum class Kind { Accuracy, F1, Fixed } kind = Kind::Fixed;
    double fixed_t = 0.5;

    static ThresholdObjective accuracy() { return {Kind::Accuracy, 0.0}; }
    static ThresholdObjective f1() { return {Kind::F1, 0.0}; }
    static ThresholdObjective fixed(double t) { return {Kind::Fixed, t}; }
};

/// Returns the threshold maximizing the objective on the validation set,
/// searching midpoints between adjacent distinct scores (lowest wins on
/// ties). Fixed objectives pass their value through unchanged.
double calibrate_threshold(const ScoredSet& val, const ThresholdObjective& objective);

struct BootstrapResult {
    double delta_auc = 0.0;
    double p_value = 1.0;
    std::size_t iterations = 0;
};

/// Paired bootstrap over pair indices, two-sided p-value realized by
/// sign-flip doubling (capped at 1). Requires the two systems to score the
/// same pairs (identical lengths and labels). Deterministic under seed; the
/// per-iteration stream is derived from (seed, iteration).
BootstrapResult paired_bootstrap(const ScoredSet& a, const ScoredSet& b,
                                 std::size_t iterations, std::uint64_t seed);

struct EvalReport {
    std::string system_tag;
    double auc_value = 0.0;
    std::vector<RocPoint> curve;
    double threshold = 0.0;
    ThresholdMetrics at_threshold;
};

EvalReport evaluate_scored(const ScoredSet& set, double threshold);

json report_to_json(const EvalReport& report);
void write_roc_csv(const std::filesystem::path& path, const std::vector<RocPoint>& curve);

// --- cross-domain harness ---------------------------------------------------

struct DomainSystem {
    ResidualModel model;
    StandardizationStats stats; // fitted on the system's own training domain
};

struct XCell {
    bool ok = false;
    double auc_rs = 0.0;
    double auc_interp = 0.0;
    std::string error;
};

struct XMatrix {
    std::vector<std::string> train_domains;
    std::vector<std::string> eval_domains;
    std::vector<std::vector<XCell>> cells; // [train][eval]
};

/// Full train-domain x eval-domain AUC matrix. Each cell standardizes the
/// eval pairs with the training domain's stats. A fingerprint mismatch
/// marks the cell failed and the run continues.
XMatrix cross_domain_eval(const std::map<std::string, DomainSystem>& systems,
                          const std::map<std::string, PairSet>& test_sets);

json xmatrix_to_json(const XMatrix& m);

} // namespace rsim
