#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "formpipe/batch/runner.hpp"
#include "formpipe/synth/generator.hpp"

namespace {

int cmd_extract(const formpipe::batch::RunConfig& config) {
  try {
    formpipe::batch::RunSummary s = formpipe::batch::run(config);
    std::printf("processed %d  skipped %d  failed %d  pages %lld\n", s.processed, s.skipped,
                s.failed, s.pages);
    std::printf("workers %d  wall %.2fs  %.1f docs/sec\n", s.workers, s.wall_seconds,
                s.docs_per_sec);
    int total = s.processed + s.skipped + s.failed;
    if (total > 0 && s.failed == total) return 2;
    return 0;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fatal: %s\n", e.what());
    return 2;
  }
}

formpipe::synth::Perturbations parse_perturbations(const std::string& csv) {
  formpipe::synth::Perturbations p;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "altlabels") p.alt_labels = true;
    else if (item == "shiftedcolumns") p.shifted_columns = true;
    else if (item == "extrablanklines") p.extra_blank_lines = true;
    else if (item == "grayrules") p.gray_rules = true;
    else if (!item.empty()) throw CLI::ValidationError("unknown perturbation: " + item);
  }
  return p;
}

std::vector<std::pair<std::string, double>> parse_mix(const std::string& csv) {
  std::vector<std::pair<std::string, double>> mix;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("mix wants form=weight: " + item);
    mix.emplace_back(item.substr(0, eq), std::stod(item.substr(eq + 1)));
  }
  return mix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Form-PDF extraction pipeline"};
  app.require_subcommand(1);

  // -- extract ---------------------------------------------------------------
  auto* extract = app.add_subcommand("extract", "Process a directory of PDFs");
  formpipe::batch::RunConfig rc;
  std::string formats = "csv,json,sql";
  extract->add_option("--input", rc.input_dir, "Input directory of PDFs")->required();
  extract->add_option("--output", rc.output_dir, "Output directory")->required();
  extract->add_option("--workers", rc.workers, "Worker count (0 = all cores)");
  extract->add_option("--dpi", rc.pipeline.dpi, "Raster resolution")->check(CLI::Range(72, 600));
  extract->add_option("--grammars", rc.grammars_dir, "Grammar registry directory");
  extract->add_option("--formats", formats, "Comma list of csv,json,sql");
  extract->add_option("--col-pitch", rc.pipeline.col_pitch, "Layout grid column pitch (pt)");
  extract->add_option("--row-pitch", rc.pipeline.row_pitch, "Layout grid row pitch (pt)");
  extract->add_option("--ink-threshold", rc.pipeline.ink_threshold, "Binarization threshold")
      ->check(CLI::Range(0, 255));
  extract->add_option("--journal", rc.journal_path, "Journal path (jsonl)");
  extract->add_flag("--dump-layout", rc.pipeline.dump_layout, "Dump .layout.txt per page");
  extract->add_flag("--dump-images", rc.pipeline.dump_images, "Dump PGM/PBM rasters per page");
  extract->add_flag("--dump-components", rc.pipeline.dump_components,
                    "Dump component CSV per page");

  // -- synth -----------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Generate a ground-truth corpus");
  formpipe::synth::CorpusSpec spec;
  std::string out_dir, mix_csv, perturb_csv;
  bool paper_fixture = false;
  synth->add_option("--seed", spec.seed, "Corpus seed")->required();
  synth->add_option("--count", spec.count, "Document count")->required();
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--mix", mix_csv, "Form mix, e.g. dcd_flowsheet=0.5,liver_data=0.5");
  synth->add_option("--perturb", perturb_csv,
                    "Comma list of altlabels,shiftedcolumns,extrablanklines,grayrules");
  synth->add_option("--perturb-rate", spec.perturb_rate, "Fraction of documents perturbed");
  synth->add_option("--attachment-pages", spec.attachment_pages,
                    "Emit multi-form attachments with this many pages");
  synth->add_flag("--uncompressed", "Write content streams without FlateDecode");
  synth->add_flag("--paper-table", paper_fixture,
                  "Also emit the published DCD vitals table fixture");

  // -- perturb ---------------------------------------------------------------
  auto* perturb = app.add_subcommand("perturb", "Re-emit a corpus with perturbations");
  std::string manifest_path, p_out, p_perturb;
  double p_rate = 0.5;
  uint64_t p_seed = 1;
  perturb->add_option("--manifest", manifest_path, "manifest.json of the base corpus")
      ->required();
  perturb->add_option("--out", p_out, "Output directory")->required();
  perturb->add_option("--perturb", p_perturb, "Comma list of perturbations")->required();
  perturb->add_option("--rate", p_rate, "Fraction of documents perturbed");
  perturb->add_option("--seed", p_seed, "Selection seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract) {
      std::stringstream ss(formats);
      std::string f;
      rc.formats.clear();
      while (std::getline(ss, f, ',')) {
        if (f != "csv" && f != "json" && f != "sql") {
          std::fprintf(stderr, "error: unknown format '%s'\n", f.c_str());
          return 1;
        }
        rc.formats.insert(f);
      }
      return cmd_extract(rc);
    }
    if (*synth) {
      spec.form_mix = mix_csv.empty() ? decltype(spec.form_mix){} : parse_mix(mix_csv);
      spec.perturbations = parse_perturbations(perturb_csv);
      spec.compress = synth->count("--uncompressed") == 0;
      formpipe::synth::generate(spec, out_dir);
      if (paper_fixture) {
        formpipe::synth::BuiltDocument doc = formpipe::synth::build_paper_fixture(spec.compress);
        std::ofstream pdf(std::filesystem::path(out_dir) / "paper_table.pdf", std::ios::binary);
        pdf << doc.pdf;
        std::ofstream truth(std::filesystem::path(out_dir) / "paper_table.truth.json");
        doc.truth["source_file"] = "paper_table.pdf";
        truth << doc.truth.dump(2) << "\n";
      }
      std::printf("wrote %d documents to %s\n", spec.count, out_dir.c_str());
      return 0;
    }
    if (*perturb) {
      std::ifstream in(manifest_path);
      if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", manifest_path.c_str());
        return 1;
      }
      formpipe::exporters::ojson manifest = formpipe::exporters::ojson::parse(in);
      formpipe::synth::perturb(manifest, parse_perturbations(p_perturb), p_rate, p_seed, p_out);
      std::printf("re-emitted corpus to %s\n", p_out.c_str());
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
