#include "formpipe/batch/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <fstream>

#include "formpipe/exporters/exporters.hpp"

namespace formpipe::batch {

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary);
  out.write(data.data(), std::streamsize(data.size()));
}

const char* outcome_name(JobReport::Outcome o) {
  switch (o) {
    case JobReport::Outcome::Processed: return "processed";
    case JobReport::Outcome::Skipped: return "skipped";
    case JobReport::Outcome::Failed: return "failed";
  }
  return "?";
}

}  // namespace

RunSummary run(const RunConfig& config) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(config.input_dir))
    throw std::invalid_argument("input directory does not exist: " + config.input_dir.string());
  fs::create_directories(config.output_dir);

  grammar::Registry registry = grammar::Registry::load_dir(config.grammars_dir);

  std::vector<fs::path> inputs;
  for (const auto& e : fs::directory_iterator(config.input_dir))
    if (e.is_regular_file() && e.path().extension() == ".pdf") inputs.push_back(e.path());
  std::sort(inputs.begin(), inputs.end());

  RunSummary summary;
  summary.workers = config.workers > 0 ? config.workers : omp_get_max_threads();
  summary.reports.resize(inputs.size());

  double t0 = omp_get_wtime();

#pragma omp parallel for schedule(dynamic) num_threads(summary.workers)
  for (long long i = 0; i < (long long)inputs.size(); ++i) {
    const fs::path& path = inputs[i];
    JobReport report;
    report.file = path.filename().string();
    double w0 = omp_get_wtime();
    try {
      std::string bytes = read_file(path);
      pdf::DocumentGraph doc = pdf::DocumentGraph::load(bytes);
      report.pages = int(doc.pages().size());
      if (detect_image_based(doc)) {
        report.outcome = JobReport::Outcome::Skipped;
        report.detail = "image-based";
      } else {
        std::string stem = path.stem().string();
        PipelineConfig pcfg = config.pipeline;
        if (pcfg.dump_layout || pcfg.dump_images || pcfg.dump_components)
          if (pcfg.dump_dir.empty()) pcfg.dump_dir = (config.output_dir / "debug").string();
        DocumentResult result =
            process_document(doc, report.file, registry, pcfg);
        for (const FormExtraction& fx : result.forms) report.forms.push_back(fx.form_id);

        if (config.formats.count("json")) {
          exporters::ojson j = document_json(result, registry);
          write_file(config.output_dir / (stem + ".json"), j.dump(2) + "\n");
        }
        if (config.formats.count("csv") || config.formats.count("sql")) {
          auto tables = document_tables(result, registry);
          if (config.formats.count("csv"))
            for (const auto& [schema, rows] : tables) {
              if (rows.empty() && schema.table_name != "documents") continue;
              write_file(config.output_dir / (stem + "." + schema.table_name + ".csv"),
                         exporters::to_csv(rows, schema));
            }
          if (config.formats.count("sql"))
            write_file(config.output_dir / (stem + ".sql"), exporters::to_sql_dump(tables));
        }
        report.outcome = JobReport::Outcome::Processed;
      }
    } catch (const std::exception& e) {
      report.outcome = JobReport::Outcome::Failed;
      report.detail = e.what();
    } catch (...) {
      report.outcome = JobReport::Outcome::Failed;
      report.detail = "unknown error";
    }
    report.wall_time = omp_get_wtime() - w0;
    summary.reports[i] = std::move(report);
  }

  summary.wall_seconds = omp_get_wtime() - t0;
  for (const JobReport& r : summary.reports) {
    summary.pages += r.pages;
    switch (r.outcome) {
      case JobReport::Outcome::Processed: ++summary.processed; break;
      case JobReport::Outcome::Skipped: ++summary.skipped; break;
      case JobReport::Outcome::Failed: ++summary.failed; break;
    }
  }
  summary.docs_per_sec =
      summary.wall_seconds > 0 ? double(inputs.size()) / summary.wall_seconds : 0.0;

  fs::path journal = config.journal_path.empty() ? config.output_dir / "journal.jsonl"
                                                 : config.journal_path;
  std::string lines;
  for (const JobReport& r : summary.reports) {
    exporters::ojson j;
    j["file"] = r.file;
    j["outcome"] = outcome_name(r.outcome);
    j["forms"] = r.forms;
    if (!r.detail.empty()) j["detail"] = r.detail;
    j["pages"] = r.pages;
    j["wall_time"] = r.wall_time;
    lines += j.dump() + "\n";
  }
  write_file(journal, lines);
  return summary;
}

}  // namespace formpipe::batch
