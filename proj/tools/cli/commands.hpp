#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cli/config.hpp"

namespace voidinspect::cli {

struct Invocation {
  RunConfig config;
  std::vector<std::filesystem::path> inputs;
  std::optional<std::filesystem::path> truth_dir;
  int count = 1;  // synth: images to generate, seeds seed..seed+count-1
};

/// Each returns the process exit code: 0 ok, 1 some input failed, 2 usage.
int cmd_inspect(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_synth(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_eval(const Invocation& inv, std::ostream& out, std::ostream& err);
int cmd_compare(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Files and directory contents (non-recursive, sorted) whose name ends in
/// one of `suffixes` and none of `excluded`. Explicit files are kept as given.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& inputs,
                                                 const std::vector<std::string>& suffixes,
                                                 const std::vector<std::string>& excluded = {});

}  // namespace voidinspect::cli
