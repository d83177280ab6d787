#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dynrefl {

/// Structured outcome of one identity check.
struct VerificationReport {
    std::string identity;
    std::string anchor; // where in the source algebra the identity lives
    bool exact = true;
    int trials = 0;
    uint64_t seed = 0;
    bool pass = false;
    struct Witness {
        std::vector<int> row;
        std::vector<int> col;
        std::string residual;
    };
    std::optional<Witness> witness;
    std::string note; // free-form finding (fallback triggers, recorded verdicts)
    double millis = 0.0;

    std::string toJson(bool includeTiming = true) const;
};

} // namespace dynrefl
