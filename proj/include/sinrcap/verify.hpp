#pragma once

#include <cstdint>
#include <iosfwd>

namespace sinrcap {

struct VerifyOptions {
    bool full = false;             // run the larger n=2000 checks as well
    double tamper_capacity = 0.0;  // nonzero offsets the flow/enumeration duality
                                   // comparison; used to prove the failure path works
    std::uint64_t seed = 20240711ULL;
};

// Run the self-verification suite, streaming one line per check to `out`.
// Returns true iff every check passed.  The quick suite finishes in well
// under a minute; the full suite adds large-instance sanity checks.
bool run_verification(const VerifyOptions& opts, std::ostream& out);

}  // namespace sinrcap
