#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flatlimit/cli.hpp"

namespace testing_support {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"flatlimit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = flatlimit::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

/// Command named on the job file's `cmd` line.
inline std::string fixture_command(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("cmd ", 0) == 0) {
      std::istringstream words(line.substr(4));
      std::string c;
      words >> c;
      return c;
    }
  return {};
}

inline std::vector<std::filesystem::path> fixture_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".fl") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline CliRun run_fixture(const std::filesystem::path& path, std::vector<std::string> extra = {}) {
  std::vector<std::string> args = std::move(extra);
  args.push_back(fixture_command(path));
  args.push_back(path.string());
  return run_cli(args);
}

}  // namespace testing_support
