#pragma once

#include <stdexcept>
#include <string>

namespace rsim {

// Error taxonomy shared by the library and the CLI exit-code protocol.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Filtering/sampling left nothing to work with (CLI exit code 2).
class CorpusExhausted : public Error {
    using Error::Error;
};

// Registry fingerprints of model/stats/vectors disagree (CLI exit code 4).
class FingerprintMismatch : public Error {
    using Error::Error;
};

// Training produced a non-finite loss (CLI exit code 5).
class NonFiniteTraining : public Error {
    using Error::Error;
};

// File could not be read/written/parsed (CLI exit code 1).
class IoError : public Error {
    using Error::Error;
};

} // namespace rsim
