#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace repsel {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;
inline constexpr int kViolated = 2;
inline constexpr int kReproductionMismatch = 3;
}  // namespace exit_code

/// Worked-example reproduction on the built-in five-agent instance. `passed`
/// is false if any computed value differs from its reference value.
struct Reproduction {
  nlohmann::ordered_json report;
  bool passed = true;
};

Reproduction reproduce_example();

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace repsel
