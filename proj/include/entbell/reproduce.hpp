#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "entbell/entropy.hpp"

namespace entbell {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = "out";
  double tol = kViolationTol;
  unsigned jobs = 0;
  std::vector<double> q_list;  // empty: target default
  std::string eps;             // rational text filling a bare parameterized builtin name
  std::string v;
  std::size_t grid = 201;
  std::size_t restarts = 200;

  /// Canonical text of every field that influences outputs.
  std::string canonical() const;
  std::string hash() const;
};

/// Writes manifest.json (command, seed, version, config hash) into out_dir.
void write_manifest(const RunConfig& config);

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct TargetReport {
  std::string target;
  std::vector<CheckLine> checks;
  std::vector<std::filesystem::path> files;
  bool ok() const;
};

std::vector<std::string> reproduce_targets();
/// Runs one experiment, writing its CSV/JSON outputs under config.out_dir.
/// Throws Error(UnknownTarget) for unrecognized names.
TargetReport reproduce(const std::string& target, const RunConfig& config);

}  // namespace entbell
