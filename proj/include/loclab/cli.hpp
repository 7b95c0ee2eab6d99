#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "loclab/caps.hpp"

namespace loclab {

struct RunConfig {
  std::uint64_t seed = 1;
  Caps caps;
  int workers = 1;
  std::string out;  // report path, "-" for stdout, empty for none
  std::string format = "json";
  int verbosity = 0;
};

// Defaults, then the optional JSON file. Throws InputError on malformed files
// or non-positive caps.
RunConfig load_config(const std::optional<std::string>& path);
void validate_config(const RunConfig& config);

// Runs one command line (without the program name). Exit codes: 0 ok,
// 1 a checked property failed, 2 input error, 3 cap exceeded.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace loclab
