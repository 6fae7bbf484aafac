#pragma once

#include <filesystem>
#include <set>
#include <string>

#include "formpipe/batch/pipeline.hpp"

namespace formpipe::batch {

struct RunConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::filesystem::path grammars_dir = "grammars";
  std::filesystem::path journal_path;  // default: <output_dir>/journal.jsonl
  int workers = 0;                     // 0 = hardware concurrency
  std::set<std::string> formats = {"csv", "json", "sql"};
  PipelineConfig pipeline;
};

struct JobReport {
  enum class Outcome { Processed, Skipped, Failed };
  std::string file;
  Outcome outcome = Outcome::Processed;
  std::vector<std::string> forms;
  std::string detail;  // skip reason or error text
  double wall_time = 0;
  int pages = 0;
};

struct RunSummary {
  int processed = 0;
  int skipped = 0;
  int failed = 0;
  long long pages = 0;
  double wall_seconds = 0;
  double docs_per_sec = 0;
  int workers = 1;
  std::vector<JobReport> reports;  // input order
};

// Processes every *.pdf under input_dir with a work-stealing OpenMP pool.
// Per-file outputs are byte-deterministic regardless of worker count; a
// failing file is reported and never aborts the run.
RunSummary run(const RunConfig& config);

}  // namespace formpipe::batch
