#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "studies.hpp"

namespace {

struct StudyArgs {
  std::string config_path;
  std::string out_dir;
};

int run(const std::string& study, const StudyArgs& args) {
  try {
    cli::Config cfg = cli::Config::load(args.config_path);
    std::printf("study %s: config %s -> %s\n", study.c_str(), args.config_path.c_str(),
                args.out_dir.c_str());
    const bool pass = cli::run_study(study, cfg, args.out_dir);
    for (const std::string& key : cfg.unused_keys())
      std::fprintf(stderr, "warning: unused config key '%s'\n", key.c_str());
    std::printf("study %s: %s\n", study.c_str(), pass ? "PASS" : "FAIL");
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "study %s failed: %s\n", study.c_str(), e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cylspec: spectral studies of Laplacians on asymptotically cylindrical ends"};
  app.set_version_flag("--version", std::string(cylspec_version()));

  bool check_only = false;
  app.add_flag("--check", check_only, "run the built-in property suite and exit");

  const std::vector<std::string> studies{"thresholds", "spectrum", "accumulation",
                                         "decay",      "scaling",  "guide2d"};
  std::map<std::string, StudyArgs> args;
  for (const std::string& name : studies) {
    auto* sub = app.add_subcommand(name, name + " study");
    sub->add_option("--config", args[name].config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", args[name].out_dir, "output artifact directory")->required();
  }
  app.require_subcommand(0, 1);

  CLI11_PARSE(app, argc, argv);

  if (check_only) {
    std::printf("built-in property suite\n");
    const int failures = cli::run_builtin_checks();
    std::printf("%s\n", failures == 0 ? "ALL PROPERTIES PASS" : "PROPERTY FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
  }

  for (const std::string& name : studies)
    if (app.get_subcommand(name)->parsed()) return run(name, args[name]);

  std::fprintf(stderr, "%s\n", app.help().c_str());
  return 2;
}
