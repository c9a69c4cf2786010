#pragma once

#include <stdexcept>
#include <string>

namespace contagion {

// Bad user input: config values, CSV contents, CLI flags.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem problems: missing paths, unreadable or unwritable files.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Rank-deficient weighted design; the caller decides whether to drop the
// dataset or fail.
struct SingularInformation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A fit that did not converge was used where a converged one is required.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The outcome-model stratum is empty or has no treatment variation.
struct EmptyStratum : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every bootstrap replicate failed to produce a converged fit.
struct AllReplicatesFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model fitting failed on the full dataset of a simulated scenario; such
// replicates are excluded and counted by the experiment harness.
struct ScenarioDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace contagion
