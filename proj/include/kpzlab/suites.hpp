#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpzlab/verify.hpp"

namespace kpz::verify {

struct SuiteOptions {
    std::uint64_t seed = 1;
    unsigned threads = 1;
    // Overrides the suite's default trial / sample / replica count when nonzero.
    std::size_t trials = 0;
};

struct SuiteInfo {
    std::string name;
    std::string summary;
};

const std::vector<SuiteInfo>& suites();

// Runs a named suite; unknown names throw std::invalid_argument.
std::vector<Check> run_suite(const std::string& name, const SuiteOptions& options);

bool all_pass(const std::vector<Check>& checks);

}  // namespace kpz::verify
