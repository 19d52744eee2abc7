#pragma once

#include "rsim/features.hpp"
#include "rsim/jsonio.hpp"

#include <span>
#include <string>
#include <vector>

namespace rsim {

struct StandardizationStats {
    std::string registry_fingerprint;
    std::vector<double> mean;
    std::vector<double> sd;  // population standard deviation (divide by N)
    std::size_t fitted_on = 0;
};

/// Per-feature population mean/sd over the given vectors (Welford).
/// Requires >= 2 vectors with matching fingerprints.
StandardizationStats fit_stats(const std::vector<FeatureVector>& vectors);

/// z_i = (v_i - mean_i) / sd_i; features with sd_i == 0 map to 0.
/// Throws FingerprintMismatch if vector and stats disagree.
std::vector<double> standardize(const FeatureVector& v, const StandardizationStats& stats);

struct CosineResult {
    double value = 0.0;
    bool zero_norm = false; // either input had zero norm; value forced to 0
};

/// Cosine similarity, clamped to [-1, 1]. Throws rsim::Error on length
/// mismatch. A zero-norm input yields value 0 with the warning flag set.
CosineResult cosine(std::span<const double> a, std::span<const double> b);

/// y - s, the correction a perfect residual predictor would output.
double ground_truth_residual(int label, double sim);

/// +1 if final_score > threshold, else -1 (ties resolve to "different
/// author").
int classify(double final_score, double threshold);

/// The per-pair output record. Invariants: final_score == sim +
/// residual_pred exactly; predicted_label == classify(final_score,
/// threshold); flipped == (predicted_label != g2v_label).
struct PairScore {
    double sim = 0.0;
    double residual_pred = 0.0;
    double final_score = 0.0;
    double threshold = 0.0;
    int predicted_label = -1;
    int g2v_label = -1;
    double intconf = 0.0;
    bool flipped = false;
    bool sim_zero_norm = false;
};

json stats_to_json(const StandardizationStats& stats, std::uint64_t seed);
StandardizationStats stats_from_json(const json& j);

} // namespace rsim
