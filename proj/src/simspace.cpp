#include "rsim/simspace.hpp"

#include "rsim/errors.hpp"

#include <algorithm>
#include <cmath>

namespace rsim {

StandardizationStats fit_stats(const std::vector<FeatureVector>& vectors) {
    if (vectors.size() < 2)
        throw Error("fit_stats requires at least 2 vectors, got " +
                    std::to_string(vectors.size()));
    const std::string& fp = vectors.front().registry_fingerprint;
    for (const FeatureVector& v : vectors)
        if (v.registry_fingerprint != fp)
            throw FingerprintMismatch("fit_stats: mixed registry fingerprints (" + fp +
                                      " vs " + v.registry_fingerprint + ")");

    const std::size_t dim = vectors.front().values.size();
    StandardizationStats stats;
    stats.registry_fingerprint = fp;
    stats.mean.assign(dim, 0.0);
    stats.sd.assign(dim, 0.0); // reused as M2 while accumulating
    std::size_t n = 0;
    for (const FeatureVector& v : vectors) {
        ++n;
        for (std::size_t i = 0; i < dim; ++i) {
            const double x = v.values[i];
            const double delta = x - stats.mean[i];
            stats.mean[i] += delta / static_cast<double>(n);
            stats.sd[i] += delta * (x - stats.mean[i]);
        }
    }
    for (std::size_t i = 0; i < dim; ++i)
        stats.sd[i] = std::sqrt(stats.sd[i] / static_cast<double>(n));
    stats.fitted_on = n;
    return stats;
}

std::vector<double> standardize(const FeatureVector& v, const StandardizationStats& stats) {
    if (v.registry_fingerprint != stats.registry_fingerprint)
        throw FingerprintMismatch("standardize: vector fingerprint " + v.registry_fingerprint +
                                  " does not match stats fingerprint " +
                                  stats.registry_fingerprint);
    if (v.values.size() != stats.mean.size())
        throw Error("standardize: dimension mismatch");
    std::vector<double> z(v.values.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = stats.sd[i] > 0.0 ? (v.values[i] - stats.mean[i]) / stats.sd[i] : 0.0;
    return z;
}

CosineResult cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error("cosine: length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return {0.0, true};
    const double value = dot / (std::sqrt(na) * std::sqrt(nb));
    return {std::clamp(value, -1.0, 1.0), false};
}

double ground_truth_residual(int label, double sim) {
    return static_cast<double>(label) - sim;
}

int classify(double final_score, double threshold) {
    return final_score > threshold ? 1 : -1;
}

json stats_to_json(const StandardizationStats& stats, std::uint64_t seed) {
    return json{
        {"format_version", kFormatVersion},
        {"seed", seed},
        {"registry_fingerprint", stats.registry_fingerprint},
        {"n", stats.fitted_on},
        {"mean", stats.mean},
        {"sd", stats.sd},
    };
}

StandardizationStats stats_from_json(const json& j) {
    StandardizationStats stats;
    try {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw Error("unsupported stats format_version");
        stats.registry_fingerprint = j.at("registry_fingerprint").get<std::string>();
        stats.fitted_on = j.at("n").get<std::size_t>();
        stats.mean = j.at("mean").get<std::vector<double>>();
        stats.sd = j.at("sd").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed stats file: ") + e.what());
    }
    if (stats.mean.size() != stats.sd.size()) throw IoError("stats mean/sd length mismatch");
    for (double s : stats.sd)
        if (s < 0.0) throw IoError("stats sd must be non-negative");
    return stats;
}

} // namespace rsim
