#include "doctest.h"

#include "formpipe/pdf/content.hpp"
#include "formpipe/pdf/document.hpp"
#include "formpipe/synth/generator.hpp"
#include "support.hpp"

using namespace formpipe;

TEST_CASE("generator determinism: same spec, byte-identical corpus") {
  synth::CorpusSpec spec;
  spec.seed = 42;
  spec.count = 6;
  auto dir_a = testsupport::temp_dir("gen_a");
  auto dir_b = testsupport::temp_dir("gen_b");
  synth::generate(spec, dir_a);
  synth::generate(spec, dir_b);
  int compared = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir_a)) {
    auto other = dir_b / e.path().filename();
    REQUIRE(std::filesystem::exists(other));
    CHECK(testsupport::read_file(e.path()) == testsupport::read_file(other));
    ++compared;
  }
  CHECK(compared == 13);  // 6 pdf + 6 truth + manifest
}

TEST_CASE("every generated PDF loads cleanly under the pdf layer") {
  synth::CorpusSpec spec;
  spec.seed = 7;
  spec.count = 12;
  auto dir = testsupport::temp_dir("gen_load");
  synth::generate(spec, dir);
  int loaded = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".pdf") continue;
    pdf::DocumentGraph g = pdf::DocumentGraph::load(testsupport::read_file(e.path()));
    CHECK(g.pages().size() >= 1);
    for (const auto& page : g.pages())
      for (const pdf::Stream* s : g.page_content_streams(page))
        CHECK_NOTHROW(pdf::tokenize_content(pdf::decode_stream(*s)));
    ++loaded;
  }
  CHECK(loaded == 12);
}

TEST_CASE("checkbox glyph margins clear the threshold by 20% both ways") {
  CHECK_NOTHROW(synth::verify_checkbox_glyph_margins());
}

TEST_CASE("seed 42 single dcd document round-trips through its own truth") {
  synth::CorpusSpec spec;
  spec.seed = 42;
  spec.count = 1;
  spec.form_mix = {{"dcd_flowsheet", 1.0}};
  auto dir = testsupport::temp_dir("gen_one");
  auto manifest = synth::generate(spec, dir);
  CHECK(manifest.at("documents").size() == 1);
  auto truth = exporters::ojson::parse(testsupport::read_file(dir / "doc_00000.truth.json"));
  CHECK(truth.at("forms").at(0).at("form_id") == "dcd_flowsheet");
  CHECK(std::filesystem::exists(dir / "doc_00000.pdf"));
}

TEST_CASE("header-only vitals tables occur and stay valid") {
  // Scan seeds until the generator rolls a zero-row table; the form must
  // still carry the header line and an empty truth table.
  bool found = false;
  for (uint64_t seed = 0; seed < 200 && !found; ++seed) {
    synth::Rng content(seed), perturb(seed);
    synth::Perturbations none;
    synth::FormInstance fi = synth::make_form("dcd_flowsheet", content, perturb, none);
    if (!fi.truth.at("tables").at("dcd_flowsheet").empty()) continue;
    found = true;
    auto lines = fi.pages[1].lines();
    REQUIRE(!lines.empty());
    CHECK(lines[0].find("Minute") != std::string::npos);
  }
  CHECK(found);
}

TEST_CASE("perturb re-emits the corpus with identical ground truth values") {
  synth::CorpusSpec spec;
  spec.seed = 11;
  spec.count = 8;
  auto base_dir = testsupport::temp_dir("pert_base");
  auto manifest = synth::generate(spec, base_dir);

  synth::Perturbations p;
  p.alt_labels = true;
  p.extra_blank_lines = true;
  auto pert_dir = testsupport::temp_dir("pert_out");
  auto pert_manifest = synth::perturb(manifest, p, 0.5, 99, pert_dir);

  int perturbed = 0, same_pdf = 0;
  for (const auto& d : pert_manifest.at("documents")) {
    std::string file = d.at("file");
    auto base_truth = exporters::ojson::parse(testsupport::read_file(
        base_dir / d.at("truth").get<std::string>()));
    auto pert_truth = exporters::ojson::parse(testsupport::read_file(
        pert_dir / d.at("truth").get<std::string>()));
    // Label/layout damage must never change the recorded values.
    CHECK(base_truth.at("forms") == pert_truth.at("forms"));
    if (d.at("perturbed").get<bool>()) {
      ++perturbed;
    } else if (testsupport::read_file(base_dir / file) ==
               testsupport::read_file(pert_dir / file)) {
      ++same_pdf;
    }
  }
  CHECK(perturbed == 4);          // round(0.5 * 8)
  CHECK(same_pdf == 4);           // untouched documents re-emit byte-identically
}

TEST_CASE("paper fixture reproduces the published table shape") {
  synth::BuiltDocument doc = synth::build_paper_fixture();
  const auto& rows = doc.truth.at("forms").at(0).at("tables").at("dcd_flowsheet");
  REQUIRE(rows.size() == 21);
  CHECK(rows[0].at("hr") == 100);
  CHECK(rows[0].at("bp_systolic") == 170);
  CHECK(rows[0].at("bp_diastolic") == 87);
  CHECK(rows[0].at("map") == 115);
  CHECK(rows[0].at("rr") == 12);
  CHECK(rows[0].at("sao2") == 88);
  CHECK(rows[0].at("time") == "2022-01-01 09:47 EST");
  for (int i = 14; i <= 20; ++i) {
    CHECK(rows[i].at("hr").is_null());
    CHECK(rows[i].at("sao2").is_null());
  }
  CHECK(rows[20].at("time") == "2022-01-01 10:07 EST");
  CHECK(rows[6].at("hr") == 0);  // true zeros after arrest

  pdf::DocumentGraph g = pdf::DocumentGraph::load(doc.pdf);
  CHECK(g.pages().size() == 2);
}

TEST_CASE("attachment mode emits the requested page count") {
  synth::CorpusSpec spec;
  spec.seed = 3;
  spec.count = 1;
  spec.attachment_pages = 36;
  auto dir = testsupport::temp_dir("gen_attach");
  synth::generate(spec, dir);
  pdf::DocumentGraph g =
      pdf::DocumentGraph::load(testsupport::read_file(dir / "doc_00000.pdf"));
  CHECK(g.pages().size() == 36);
}

TEST_CASE("image-based fixture has no text operators") {
  pdf::DocumentGraph g = pdf::DocumentGraph::load(synth::make_image_based_pdf());
  REQUIRE(g.pages().size() == 1);
  auto streams = g.page_content_streams(g.pages()[0]);
  REQUIRE(streams.size() == 1);
  auto ops = pdf::tokenize_content(pdf::decode_stream(*streams[0]));
  for (const auto& op : ops) CHECK(op.cls != pdf::OpClass::Text);
}
