// unipulse: command-line front end.
//
//   unipulse <command> --config <path> [--out <path>] [--seed <u64>]

#include "unipulse/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char **argv) {
  using namespace unipulse::cli;

  CLI::App app{"Unidirectional localized pulses: closed forms, syntheses and checks"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  for (const auto &name : command_names()) {
    auto *sub = app.add_subcommand(name, command_summary(name));
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output path (overrides the config)");
    sub->add_option("--seed", seed, "random seed (Monte-Carlo)");
    std::string keys = "\nConfig keys:\n";
    for (const auto &kd : config_keys(name))
      keys += "  " + kd.key + std::string(kd.key.size() < 24 ? 24 - kd.key.size() : 1, ' ') +
              kd.doc + "\n";
    keys += "\nExit codes: 0 ok, 2 config error, 3 numeric failure, 4 check failed\n";
    sub->footer(keys);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }

  CLI::App *sub = app.get_subcommands().front();
  RunOptions opts;
  if (sub->count("--out"))
    opts.out = out;
  if (sub->count("--seed"))
    opts.seed = seed;
  return run_command(sub->get_name(), config, opts, std::cout, std::cerr);
}
