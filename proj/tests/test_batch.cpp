#include "doctest.h"

#include "formpipe/batch/runner.hpp"
#include "formpipe/synth/generator.hpp"
#include "formpipe/synth/pdfwriter.hpp"
#include "support.hpp"

using namespace formpipe;

namespace {

batch::RunConfig base_config(const std::filesystem::path& in,
                             const std::filesystem::path& out) {
  batch::RunConfig rc;
  rc.input_dir = in;
  rc.output_dir = out;
  rc.grammars_dir = testsupport::grammars_dir();
  rc.workers = 2;
  return rc;
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary);
  out.write(data.data(), std::streamsize(data.size()));
}

}  // namespace

TEST_CASE("detect_image_based distinguishes text, image and mixed documents") {
  synth::CorpusSpec spec;
  spec.seed = 20;
  spec.count = 1;
  spec.form_mix = {{"liver_data", 1.0}};
  auto dir = testsupport::temp_dir("img_detect");
  synth::generate(spec, dir);
  pdf::DocumentGraph text_doc =
      pdf::DocumentGraph::load(testsupport::read_file(dir / "doc_00000.pdf"));
  CHECK(!batch::detect_image_based(text_doc));

  pdf::DocumentGraph image_doc = pdf::DocumentGraph::load(synth::make_image_based_pdf());
  CHECK(batch::detect_image_based(image_doc));

  // Mixed: five text pages plus one image-only page -> not image-based;
  // the lone image page is skipped downstream.
  synth::Rng content(5), perturb(5);
  synth::Perturbations none;
  std::vector<synth::PdfPage> pages;
  for (int i = 0; i < 5; ++i) {
    synth::FormInstance fi = synth::make_form("liver_data", content, perturb, none);
    synth::PdfPage page;
    page.content = fi.pages[0].content();
    pages.push_back(std::move(page));
  }
  synth::PdfPage image_page;
  image_page.image_xobject = true;
  pages.push_back(std::move(image_page));
  pdf::DocumentGraph mixed = pdf::DocumentGraph::load(synth::write_pdf(pages, true));
  CHECK(!batch::detect_image_based(mixed));
}

TEST_CASE("run processes a corpus and skips image-based files") {
  auto in = testsupport::temp_dir("run_in");
  auto out = testsupport::temp_dir("run_out");
  synth::CorpusSpec spec;
  spec.seed = 5;
  spec.count = 2;
  synth::generate(spec, in);
  write_file(in / "image_based.pdf", synth::make_image_based_pdf());

  batch::RunSummary s = batch::run(base_config(in, out));
  CHECK(s.processed == 2);
  CHECK(s.skipped == 1);
  CHECK(s.failed == 0);
  CHECK(std::filesystem::exists(out / "doc_00000.json"));
  CHECK(std::filesystem::exists(out / "doc_00000.sql"));
  CHECK(std::filesystem::exists(out / "journal.jsonl"));

  std::string journal = testsupport::read_file(out / "journal.jsonl");
  CHECK(journal.find("image-based") != std::string::npos);
}

TEST_CASE("run on an empty directory reports zero totals") {
  auto in = testsupport::temp_dir("run_empty_in");
  auto out = testsupport::temp_dir("run_empty_out");
  batch::RunSummary s = batch::run(base_config(in, out));
  CHECK(s.processed == 0);
  CHECK(s.skipped == 0);
  CHECK(s.failed == 0);
}

TEST_CASE("a corrupt file fails alone without aborting the batch") {
  auto in = testsupport::temp_dir("run_bad_in");
  auto out = testsupport::temp_dir("run_bad_out");
  synth::CorpusSpec spec;
  spec.seed = 6;
  spec.count = 2;
  synth::generate(spec, in);
  write_file(in / "broken.pdf", "%PDF-1.4\nthis file is nonsense\nstartxref\n123456\n%%EOF");

  batch::RunSummary s = batch::run(base_config(in, out));
  CHECK(s.processed == 2);
  CHECK(s.failed == 1);
}

TEST_CASE("per-file outputs are byte-identical across worker counts") {
  auto in = testsupport::temp_dir("det_in");
  synth::CorpusSpec spec;
  spec.seed = 31;
  spec.count = 6;
  synth::generate(spec, in);

  auto out1 = testsupport::temp_dir("det_out1");
  auto out4 = testsupport::temp_dir("det_out4");
  batch::RunConfig rc1 = base_config(in, out1);
  rc1.workers = 1;
  batch::RunConfig rc4 = base_config(in, out4);
  rc4.workers = 4;
  batch::run(rc1);
  batch::run(rc4);

  int compared = 0;
  for (const auto& e : std::filesystem::directory_iterator(out1)) {
    if (e.path().filename() == "journal.jsonl") continue;  // carries wall times
    auto other = out4 / e.path().filename();
    REQUIRE(std::filesystem::exists(other));
    CHECK(testsupport::read_file(e.path()) == testsupport::read_file(other));
    ++compared;
  }
  CHECK(compared > 6);
}

TEST_CASE("process_document extracts a liver form end to end") {
  synth::CorpusSpec spec;
  spec.seed = 77;
  spec.count = 1;
  spec.form_mix = {{"liver_data", 1.0}};
  auto dir = testsupport::temp_dir("proc_liver");
  synth::generate(spec, dir);

  pdf::DocumentGraph doc =
      pdf::DocumentGraph::load(testsupport::read_file(dir / "doc_00000.pdf"));
  batch::PipelineConfig cfg;
  batch::DocumentResult result =
      batch::process_document(doc, "doc_00000.pdf", testsupport::shipped_registry(), cfg);
  REQUIRE(result.forms.size() == 1);
  const batch::FormExtraction& fx = result.forms[0];
  CHECK(fx.form_id == "liver_data");
  CHECK(fx.parsed);
  REQUIRE(fx.liver.has_value());
  CHECK(fx.liver->checkboxes.size() == 8);

  auto truth = exporters::ojson::parse(testsupport::read_file(dir / "doc_00000.truth.json"));
  const auto& truth_boxes = truth.at("forms").at(0).at("checkboxes");
  for (const auto& [name, state] : fx.liver->checkboxes) {
    INFO(name);
    CHECK(truth_boxes.at(name).get<bool>() == state);
  }
}

TEST_CASE("document_json mirrors the truth schema for a dcd document") {
  synth::CorpusSpec spec;
  spec.seed = 123;
  spec.count = 1;
  spec.form_mix = {{"dcd_flowsheet", 1.0}};
  auto dir = testsupport::temp_dir("proc_dcd");
  synth::generate(spec, dir);

  pdf::DocumentGraph doc =
      pdf::DocumentGraph::load(testsupport::read_file(dir / "doc_00000.pdf"));
  batch::PipelineConfig cfg;
  const auto& reg = testsupport::shipped_registry();
  batch::DocumentResult result = batch::process_document(doc, "doc_00000.pdf", reg, cfg);
  exporters::ojson j = batch::document_json(result, reg);

  auto truth = exporters::ojson::parse(testsupport::read_file(dir / "doc_00000.truth.json"));
  REQUIRE(j.at("forms").size() == truth.at("forms").size());
  const auto& jf = j.at("forms").at(0);
  const auto& tf = truth.at("forms").at(0);
  CHECK(jf.at("form_id") == tf.at("form_id"));
  for (const auto& [key, expected] : tf.at("fields").items()) {
    INFO("field " << key);
    REQUIRE(jf.at("fields").contains(key));
    CHECK(jf.at("fields").at(key) == expected);
  }
  for (const auto& [key, expected] : tf.at("checkboxes").items()) {
    INFO("checkbox " << key);
    CHECK(jf.at("checkboxes").at(key) == expected);
  }
  CHECK(jf.at("tables").at("dcd_flowsheet") == tf.at("tables").at("dcd_flowsheet"));
}
