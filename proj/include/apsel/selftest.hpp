#pragma once

#include <string>
#include <vector>

namespace apsel {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast built-in checks: link budget constants, reward endpoints, baseline
/// decoding and a short train-twice determinism run. Takes well under a second.
std::vector<CheckResult> run_selftest();

}  // namespace apsel
