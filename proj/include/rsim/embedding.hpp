#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace rsim {

struct EmbeddingConfig {
    std::size_t dims = 256;
    // The only embedding kind implemented: counts of lowercased character
    // 3-grams hashed with 64-bit FNV-1a modulo dims, then L2-normalized.
    static constexpr const char* kKind = "char3_fnv1a";
};

/// Hashed character-3-gram document embedding. Deterministic; text shorter
/// than three bytes yields the zero vector.
std::vector<double> embed(std::string_view text, const EmbeddingConfig& config);

} // namespace rsim
