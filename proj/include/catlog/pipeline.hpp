#pragma once

// Batch front end: loading fixture files, wiring the modules into the
// check / prove / slash / extract / glue / pipeline commands, and writing
// deterministic reports. The CLI binary is a thin wrapper over these.

#include "catlog/extractor.hpp"
#include "catlog/freyd.hpp"

#include <filesystem>
#include <iosfwd>

namespace catlog {

struct RunConfig {
  std::filesystem::path theoryFile;
  std::filesystem::path categoryFile;
  std::filesystem::path modelFile;                 // optional
  std::vector<std::filesystem::path> goalFiles;    // goal + certificate
  std::vector<std::filesystem::path> checkFiles;   // for cmd_check
  std::string formulaText;                         // for cmd_slash / cmd_prove
  std::string contextText;                         // for cmd_prove
  std::string oracleSpec = "congruence";           // congruence | search:<n> | certs:<dir>
  std::string terminal = "One";
  std::size_t budget = 0;      // term-completion entry budget
  std::size_t depth = 10;      // proof search depth
  std::size_t wordBudget = 4;  // congruence oracle word length
  std::filesystem::path outDir;
};

// File loading helpers (formats per the module documentation).
Theory load_theory(const std::filesystem::path& file, const RunConfig& cfg);
FiniteCategory load_category(const std::filesystem::path& file);
Model load_model(const Theory& t, const std::filesystem::path& file);

struct GoalFile {
  Formula goal;
  Proof proof;
};
// A proof certificate preceded by a `goal <formula>` line.
GoalFile parse_goal_file(const std::string& text);
std::string print_goal_file(const Formula& goal, const Proof& proof);

// Commands; each returns a process exit status and writes diagnostics to
// `diag`. Identical configs and fixtures produce byte-identical outputs.
int cmd_check(const RunConfig& cfg, std::ostream& diag);
int cmd_prove(const RunConfig& cfg, std::ostream& diag);
int cmd_slash(const RunConfig& cfg, std::ostream& diag);
int cmd_extract(const RunConfig& cfg, std::ostream& diag);
int cmd_glue(const RunConfig& cfg, std::ostream& diag);
int cmd_pipeline(const RunConfig& cfg, std::ostream& diag);

}  // namespace catlog
