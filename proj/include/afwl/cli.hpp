#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace afwl {

struct CliOptions {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;          // overrides OUTPUT_DIR and output_dir
  int threads = -1;             // < 0: from config
  long long seed = -1;          // < 0: from config
  std::string checkpoint_path;  // resume only
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand. Returns 0 on success, 1 for configuration or input
/// errors, 2 for numerical failures (an error.json record is written).
int run_cli(const CliOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace afwl
