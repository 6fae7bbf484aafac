#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formpipe/detect/checkbox.hpp"
#include "formpipe/exporters/json.hpp"
#include "formpipe/grammar/registry.hpp"
#include "formpipe/layout/layout.hpp"
#include "formpipe/pdf/document.hpp"
#include "formpipe/records/records.hpp"

namespace formpipe::batch {

struct PipelineConfig {
  int dpi = 300;
  double col_pitch = 6.0;
  double row_pitch = 12.0;
  int ink_threshold = 100;
  int kernel_threads = 1;  // inner parallelism; the pool parallelizes per file
  bool dump_layout = false;
  bool dump_images = false;
  bool dump_components = false;
  std::string dump_dir;  // where debug dumps land when enabled
};

struct FormExtraction {
  std::string form_id;
  int first_page = 0;
  int page_count = 0;
  bool parsed = false;
  grammar::ParseResult parse;
  grammar::ParseFailure failure;
  std::vector<detect::CheckboxObservation> observations;  // reading order
  std::vector<std::string> warnings;

  std::vector<records::VitalsSeriesRow> vitals;
  std::optional<records::PreOpRecord> preop;
  std::optional<records::LiverDataRecord> liver;
};

struct DocumentResult {
  records::DocumentMeta meta;
  std::vector<FormExtraction> forms;
  std::vector<std::string> diagnostics;
  std::vector<double> page_heights;
};

// True iff the document should be routed to the OCR-side pipeline this
// artifact does not implement: no text operators anywhere, an undecodable
// sole content stream, or image XObjects dominating with under 16 text
// characters per page on average.
bool detect_image_based(const pdf::DocumentGraph& doc);

DocumentResult process_document(const pdf::DocumentGraph& doc, const std::string& source_name,
                                const grammar::Registry& registry, const PipelineConfig& cfg);

exporters::ojson document_json(const DocumentResult& doc, const grammar::Registry& registry);

std::vector<std::pair<records::TableSchema, std::vector<records::Row>>> document_tables(
    const DocumentResult& doc, const grammar::Registry& registry);

}  // namespace formpipe::batch
