#include <iostream>

#include <CLI11.hpp>

#include "afwl/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Wave equation experiments on asymptotically flat backgrounds"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", AFWL_VERSION);

  afwl::CliOptions opts;
  app.add_option("--config", opts.config_path, "key = value configuration file");
  app.add_option("--out", opts.out_dir, "output directory (overrides OUTPUT_DIR and output_dir)");
  app.add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "random seed")->check(CLI::NonNegativeNumber);

  for (const auto& name : afwl::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    if (name == "resume") sub->add_option("--checkpoint", opts.checkpoint_path, "checkpoint file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  opts.subcommand = app.get_subcommands().front()->get_name();
  return afwl::run_cli(opts, std::cout, std::cerr);
}
