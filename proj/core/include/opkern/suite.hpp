#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace opk {

struct SuiteOptions {
    int workers = 1;
    std::uint64_t seed = 0;
    /* Path to the CLI binary; used by the certificate-determinism criterion
     * to rerun real commands under worker counts 1 and 8. Empty skips the
     * subprocess round and compares in-process serializations instead. */
    std::string cli_path;
};

struct SuiteResult {
    int passed = 0;
    int failed = 0;
    bool ok() const { return failed == 0; }
};

/* Runs every acceptance criterion, printing one PASS/FAIL line per
 * criterion. */
SuiteResult run_acceptance_suite(std::ostream& out, const SuiteOptions& opts);

}  // namespace opk
