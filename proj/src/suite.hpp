#pragma once

#include "builders.hpp"

namespace dynrefl {

/// Named identity campaigns over the rational model. Identities are grouped
/// in tiers by how they scale: the structure/Hamiltonian tier runs at any n,
/// the solution/classical tier up to n=3, and the construction tier
/// (fusion, dressing, coactions, duals, reductions) at n=2 only.
struct SuiteOptions {
    int n = 2;
    CheckMode mode;
};

/// Identity names available at a given n, in execution order.
std::vector<std::string> suiteIdentities(int n);

/// Run one named identity; throws Error on an unknown name or unsupported n.
std::vector<VerificationReport> runIdentity(const std::string& name, const SuiteOptions& opt);

std::vector<VerificationReport> runSuite(const SuiteOptions& opt);

/// Build artifact as JSON. what: bcd-from-a | dual | fuse | dress |
/// monodromy | hamiltonian. params: JSON object, e.g. {"n":2,"spaces":3}.
std::string buildArtifact(const std::string& what, const std::string& paramsJson);

/// Numeric zero-mode sweep. params: JSON with k, parity ("sin"|"cos"), m1,
/// m2, mu, samples, exponent ("derived"|"paper"), seed. Returns CSV rows
/// q,value,residual; summary JSON via the out parameter.
std::string eigenSweepCsv(const std::string& paramsJson, std::string& summaryJson);

} // namespace dynrefl
