#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdlab/config.hpp"
#include "cdlab/tables.hpp"

namespace cdlab {

struct Verdict {
  std::string name;
  std::string detail;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct RunReport {
  std::string kind;
  std::string config_echo;
  std::string backend = "spectral";
  std::uint64_t seed = 7;
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

// Experiment kinds: adiabatic-scaling, dressed-scaling, kubo, tfim-sweep,
// orthogonality, growth.
std::vector<std::string> experiment_kinds();
std::string experiment_description(const std::string& kind);
Config default_config(const std::string& kind);

// Validates the config (strict keys) without running.
void validate_config(Config cfg);

RunReport run_experiment(Config cfg);

// Writes <table>.csv per table, plot-ready <table>.xy files, and summary.txt;
// table bytes depend only on config and seed.
void emit_report(const RunReport& report, const std::string& dir);
std::string report_summary(const RunReport& report);

}  // namespace cdlab
