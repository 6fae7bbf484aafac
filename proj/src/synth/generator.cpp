#include "formpipe/synth/generator.hpp"

#include <fstream>
#include <numeric>

#include "formpipe/detect/checkbox.hpp"
#include "formpipe/detect/components.hpp"
#include "formpipe/pdf/content.hpp"
#include "formpipe/raster/raster.hpp"
#include "formpipe/raster/scene.hpp"
#include "formpipe/synth/pdfwriter.hpp"

namespace formpipe::synth {

using exporters::ojson;

namespace {

uint64_t mix_seed(uint64_t seed, uint64_t i) {
  // splitmix64 step, so per-document streams are independent.
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void write_file(const std::filesystem::path& p, const std::string& data) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("IoError: cannot write " + p.string());
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw std::runtime_error("IoError: short write to " + p.string());
}

std::string pick_form(Rng& rng, const std::vector<std::pair<std::string, double>>& mix) {
  if (mix.empty()) return rng.pick(form_ids());
  double total = 0;
  for (const auto& [id, w] : mix) total += w;
  double roll = rng.unit() * total;
  double acc = 0;
  for (const auto& [id, w] : mix) {
    acc += w;
    if (roll <= acc) return id;
  }
  return mix.back().first;
}

long long glyph_ink_pixels(bool checked, int style) {
  PageSpec page;
  page.boxes.push_back({10, 10, checked, style});
  raster::GraphicsScene scene = raster::build_scene(
      raster::strip_text_operators(pdf::tokenize_content(page.content())), kPageW, kPageH);
  raster::RasterBitmap bm = raster::rasterize_serial(scene, 300);
  raster::BinaryImage bin = raster::binarize_serial(bm, 100);
  auto comps = detect::connected_components_serial(bin);
  long long total = 0;
  for (const auto& c : comps) total += c.pixel_count;
  return total;
}

}  // namespace

void verify_checkbox_glyph_margins() {
  static bool done = false;
  if (done) return;
  const double threshold = detect::kCheckedThresholdAt300;
  long long unchecked = glyph_ink_pixels(false, 0);
  if (double(unchecked) > 0.8 * threshold)
    throw std::logic_error("unchecked glyph too heavy: " + std::to_string(unchecked));
  for (int style : {0, 1}) {
    long long checked = glyph_ink_pixels(true, style);
    if (double(checked) < 1.2 * threshold)
      throw std::logic_error("checked glyph style " + std::to_string(style) +
                             " too light: " + std::to_string(checked));
  }
  done = true;
}

BuiltDocument build_document(uint64_t doc_seed, const std::vector<std::string>& form_sequence,
                             const Perturbations& p, bool compress) {
  Rng content(doc_seed);
  Rng perturb_rng(mix_seed(doc_seed, 0xBEEF));

  BuiltDocument doc;
  std::vector<PdfPage> pages;
  ojson forms = ojson::array();
  for (const std::string& id : form_sequence) {
    FormInstance fi = make_form(id, content, perturb_rng, p);
    for (const PageSpec& ps : fi.pages) {
      PdfPage page;
      page.content = ps.content();
      pages.push_back(std::move(page));
    }
    forms.push_back(fi.truth);
    doc.forms.push_back(std::move(fi));
  }
  doc.pdf = write_pdf(pages, compress);
  doc.truth["page_count"] = int(pages.size());
  // Bookkeeping truth follows the extraction rule: first form that carries
  // the binding wins.
  ojson generated_at = nullptr, version_note = nullptr;
  for (const ojson& f : forms) {
    const ojson& flds = f.at("fields");
    if (generated_at.is_null() && flds.contains("generated_at"))
      generated_at = flds.at("generated_at");
    if (version_note.is_null() && flds.contains("version_note"))
      version_note = flds.at("version_note");
  }
  doc.truth["generated_at"] = generated_at;
  doc.truth["version_note"] = version_note;
  doc.truth["forms"] = std::move(forms);
  return doc;
}

BuiltDocument build_paper_fixture(bool compress) {
  BuiltDocument doc;
  FormInstance fi = make_paper_dcd_flowsheet();
  std::vector<PdfPage> pages;
  for (const PageSpec& ps : fi.pages) {
    PdfPage page;
    page.content = ps.content();
    pages.push_back(std::move(page));
  }
  doc.pdf = write_pdf(pages, compress);
  doc.truth["page_count"] = int(pages.size());
  doc.truth["generated_at"] = fi.truth["fields"]["generated_at"];
  doc.truth["version_note"] = fi.truth["fields"]["version_note"];
  doc.truth["forms"] = ojson::array({fi.truth});
  doc.forms.push_back(std::move(fi));
  return doc;
}

std::string make_image_based_pdf() {
  PdfPage page;
  page.image_xobject = true;
  return write_pdf({page}, true);
}

namespace {

std::vector<std::string> plan_forms(Rng& rng, const CorpusSpec& spec) {
  if (spec.attachment_pages <= 0) return {pick_form(rng, spec.form_mix)};
  std::vector<std::string> seq;
  int pages = 0;
  while (pages < spec.attachment_pages) {
    std::string id = pick_form(rng, spec.form_mix);
    int need = id == "dcd_flowsheet" ? 2 : 1;
    if (pages + need > spec.attachment_pages) id = "liver_data", need = 1;
    seq.push_back(id);
    pages += need;
  }
  return seq;
}

ojson run_generation(const CorpusSpec& spec, const std::filesystem::path& out_dir,
                     const std::vector<bool>& perturb_doc) {
  verify_checkbox_glyph_margins();
  std::filesystem::create_directories(out_dir);

  ojson manifest;
  manifest["seed"] = spec.seed;
  manifest["count"] = spec.count;
  manifest["perturb_rate"] = spec.perturb_rate;
  ojson mix = ojson::object();
  for (const auto& [id, w] : spec.form_mix) mix[id] = w;
  manifest["form_mix"] = mix;
  ojson pert = ojson::array();
  if (spec.perturbations.alt_labels) pert.push_back("AltLabels");
  if (spec.perturbations.shifted_columns) pert.push_back("ShiftedColumns");
  if (spec.perturbations.extra_blank_lines) pert.push_back("ExtraBlankLines");
  if (spec.perturbations.gray_rules) pert.push_back("GrayRules");
  manifest["perturbations"] = pert;
  manifest["attachment_pages"] = spec.attachment_pages;

  ojson docs = ojson::array();
  for (int i = 0; i < spec.count; ++i) {
    uint64_t doc_seed = mix_seed(spec.seed, uint64_t(i));
    Rng plan_rng(mix_seed(doc_seed, 7));
    std::vector<std::string> seq = plan_forms(plan_rng, spec);
    Perturbations p = perturb_doc[i] ? spec.perturbations : Perturbations{};
    BuiltDocument doc = build_document(doc_seed, seq, p, spec.compress);

    char name[32];
    std::snprintf(name, sizeof(name), "doc_%05d", i);
    std::string pdf_name = std::string(name) + ".pdf";
    std::string truth_name = std::string(name) + ".truth.json";
    doc.truth["source_file"] = pdf_name;
    // source_file leads the truth object.
    ojson truth;
    truth["source_file"] = pdf_name;
    for (auto& [k, v] : doc.truth.items())
      if (k != "source_file") truth[k] = v;

    write_file(out_dir / pdf_name, doc.pdf);
    write_file(out_dir / truth_name, truth.dump(2) + "\n");

    ojson entry;
    entry["file"] = pdf_name;
    entry["truth"] = truth_name;
    entry["doc_seed"] = doc_seed;
    entry["forms"] = int(doc.forms.size());
    entry["perturbed"] = bool(perturb_doc[i]);
    docs.push_back(std::move(entry));
  }
  manifest["documents"] = std::move(docs);
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

std::vector<bool> choose_perturbed(int count, double rate, uint64_t seed, bool any) {
  std::vector<bool> flags(count, false);
  if (!any) return flags;
  int k = int(std::min<double>(count, std::max(0.0, rate * count + 0.5)));
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(mix_seed(seed, 0xA17));
  for (int i = count - 1; i > 0; --i) std::swap(idx[i], idx[rng.range(0, i)]);
  for (int i = 0; i < k; ++i) flags[idx[i]] = true;
  return flags;
}

}  // namespace

ojson generate(const CorpusSpec& spec, const std::filesystem::path& out_dir) {
  if (spec.count < 1) throw std::invalid_argument("corpus count must be >= 1");
  std::vector<bool> flags = choose_perturbed(spec.count, spec.perturb_rate, spec.seed,
                                             spec.perturbations.any());
  return run_generation(spec, out_dir, flags);
}

ojson perturb(const ojson& manifest, const Perturbations& perturbations, double rate,
              uint64_t seed, const std::filesystem::path& out_dir) {
  if (!perturbations.any()) {
    // Nothing to apply: re-emit the corpus unchanged.
  }
  CorpusSpec spec;
  spec.seed = manifest.at("seed").get<uint64_t>();
  spec.count = manifest.at("count").get<int>();
  spec.attachment_pages = manifest.value("attachment_pages", 0);
  if (manifest.contains("form_mix"))
    for (auto& [id, w] : manifest.at("form_mix").items())
      spec.form_mix.emplace_back(id, w.get<double>());
  spec.perturbations = perturbations;
  spec.perturb_rate = rate;
  std::vector<bool> flags = choose_perturbed(spec.count, rate, seed, perturbations.any());
  return run_generation(spec, out_dir, flags);
}

}  // namespace formpipe::synth
