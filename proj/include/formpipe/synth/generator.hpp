#pragma once

#include <filesystem>

#include "formpipe/synth/forms.hpp"

namespace formpipe::synth {

struct CorpusSpec {
  uint64_t seed = 1;
  int count = 1;
  std::vector<std::pair<std::string, double>> form_mix;  // empty = uniform mix
  Perturbations perturbations;
  double perturb_rate = 0.5;  // fraction of documents receiving active perturbations
  bool compress = true;
  int attachment_pages = 0;  // >0: every document is a multi-form attachment
};

// Emits doc_NNNNN.pdf + doc_NNNNN.truth.json pairs plus manifest.json.
// Deterministic for a fixed spec. Validates at startup that every checkbox
// glyph style lands >= 20% clear of the 2500 px threshold at 300 dpi.
exporters::ojson generate(const CorpusSpec& spec, const std::filesystem::path& out_dir);

// Re-emits the corpus described by a manifest with perturbations applied to
// round(rate * count) documents (seed-chosen). Content seeds are reused, so
// field values and ground truth stay aligned.
exporters::ojson perturb(const exporters::ojson& manifest, const Perturbations& perturbations,
                         double rate, uint64_t seed, const std::filesystem::path& out_dir);

// One multi-form document with exactly `pages` pages.
struct BuiltDocument {
  std::vector<FormInstance> forms;
  std::string pdf;
  exporters::ojson truth;
};
BuiltDocument build_document(uint64_t doc_seed, const std::vector<std::string>& form_sequence,
                             const Perturbations& p, bool compress);

// Fixture whose single page paints only an image XObject (no text operators):
// the image-based skip path.
std::string make_image_based_pdf();

// The paper-table fixture as a complete document.
BuiltDocument build_paper_fixture(bool compress = true);

// Throws if any glyph style violates the threshold margin; called by
// generate() and directly by tests.
void verify_checkbox_glyph_margins();

}  // namespace formpipe::synth
