#include "rsim/embedding.hpp"

#include "rsim/rng.hpp"

#include <cmath>
#include <string>

namespace rsim {

std::vector<double> embed(std::string_view text, const EmbeddingConfig& config) {
    std::vector<double> v(config.dims, 0.0);
    if (text.size() < 3) return v;

    std::string lower(text);
    for (char& c : lower)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');

    for (std::size_t i = 0; i + 3 <= lower.size(); ++i) {
        const std::uint64_t h = fnv1a64(std::string_view(lower).substr(i, 3));
        v[h % config.dims] += 1.0;
    }

    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0)
        for (double& x : v) x /= norm;
    return v;
}

} // namespace rsim
