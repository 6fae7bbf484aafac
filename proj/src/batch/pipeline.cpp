#include "formpipe/batch/pipeline.hpp"

#include <filesystem>
#include <fstream>

#include "formpipe/raster/raster.hpp"
#include "formpipe/raster/scene.hpp"

namespace formpipe::batch {

using exporters::ojson;

namespace {

struct PageAnalysis {
  std::vector<std::string> lines;
  std::vector<detect::CheckboxObservation> observations;
  double height = 792, width = 612;
  bool skipped = false;
  std::string skip_reason;
};

long long count_text_chars(const std::vector<pdf::Operator>& ops) {
  long long chars = 0;
  for (const pdf::Operator& op : ops) {
    if (op.name == "Tj" || op.name == "'") {
      if (!op.operands.empty() && op.operands.back().str())
        chars += op.operands.back().str()->size();
    } else if (op.name == "\"") {
      if (op.operands.size() == 3 && op.operands[2].str()) chars += op.operands[2].str()->size();
    } else if (op.name == "TJ") {
      if (!op.operands.empty() && op.operands[0].is_array())
        for (const pdf::PdfValue& v : *op.operands[0].array())
          if (v.str()) chars += v.str()->size();
    }
  }
  return chars;
}

bool page_has_image_xobject(const pdf::PageRef& page, const pdf::DocumentGraph& doc) {
  const pdf::PdfValue* res = page.dict.find("Resources");
  if (!res) return false;
  try {
    const pdf::PdfValue& rv = doc.resolve(*res);
    if (!rv.is_dict()) return false;
    const pdf::PdfValue* xo = rv.dict()->find("XObject");
    if (!xo) return false;
    const pdf::PdfValue& xv = doc.resolve(*xo);
    if (!xv.is_dict()) return false;
    for (const auto& [name, val] : xv.dict()->entries()) {
      const pdf::PdfValue& obj = doc.resolve(val);
      const pdf::Stream* s = obj.stream();
      if (!s) continue;
      const pdf::PdfValue* st = s->dict.find("Subtype");
      if (st && st->name() && *st->name() == "Image") return true;
    }
  } catch (const pdf::PdfError&) {
    return false;
  }
  return false;
}

void dump(const std::string& dir, const std::string& name, const std::string& data) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name, std::ios::binary);
  out.write(data.data(), std::streamsize(data.size()));
}

}  // namespace

bool detect_image_based(const pdf::DocumentGraph& doc) {
  bool all_pages_zero_text = true;
  bool any_image = false;
  int image_pages = 0;
  long long text_chars = 0;
  const int pages = int(doc.pages().size());

  for (const pdf::PageRef& page : doc.pages()) {
    auto streams = doc.page_content_streams(page);
    std::string decoded;
    bool undecodable = false;
    for (const pdf::Stream* s : streams) {
      try {
        decoded += pdf::decode_stream(*s);
        decoded += '\n';
      } catch (const pdf::PdfError& e) {
        if (e.code() == pdf::ErrorCode::UnsupportedFilter) undecodable = true;
        else throw;
      }
    }
    if (undecodable && streams.size() == 1) return true;  // sole content unreadable

    int text_ops = 0;
    try {
      auto ops = pdf::tokenize_content(decoded);
      for (const pdf::Operator& op : ops)
        if (op.cls == pdf::OpClass::Text) ++text_ops;
      text_chars += count_text_chars(ops);
    } catch (const pdf::PdfError&) {
      // Unparseable content counts as zero text.
    }
    if (text_ops > 0) all_pages_zero_text = false;
    if (page_has_image_xobject(page, doc)) {
      ++image_pages;
      any_image = true;
    }
  }
  if (all_pages_zero_text) return true;
  if (any_image && image_pages * 2 > pages && pages > 0 && text_chars / pages < 16) return true;
  return false;
}

namespace {

PageAnalysis analyze_page(const pdf::DocumentGraph& doc, const pdf::PageRef& page, int index,
                          const std::string& source_name, const PipelineConfig& cfg) {
  PageAnalysis pa;
  pa.height = layout::page_height(page, doc);
  pa.width = layout::page_width(page, doc);

  std::string decoded;
  try {
    for (const pdf::Stream* s : doc.page_content_streams(page)) {
      decoded += pdf::decode_stream(*s);
      decoded += '\n';
    }
  } catch (const pdf::PdfError& e) {
    if (e.code() == pdf::ErrorCode::UnsupportedFilter) {
      pa.skipped = true;
      pa.skip_reason = "image-based page (undecodable content)";
      return pa;
    }
    throw;
  }

  std::vector<pdf::Operator> ops = pdf::tokenize_content(decoded);

  try {
    auto runs = layout::text_runs_from_ops(ops);
    layout::LayoutGrid grid =
        layout::compose_layout(runs, pa.height, cfg.col_pitch, cfg.row_pitch);
    pa.lines = layout::render_lines(grid);
    if (cfg.dump_layout) {
      std::string text;
      for (const std::string& l : pa.lines) {
        text += l;
        text += '\n';
      }
      dump(cfg.dump_dir, source_name + ".p" + std::to_string(index) + ".layout.txt", text);
    }
  } catch (const layout::PageSkipError& e) {
    pa.skipped = true;
    pa.skip_reason = e.what();
    return pa;
  }

  raster::GraphicsScene scene =
      raster::build_scene(raster::strip_text_operators(ops), pa.width, pa.height);
  raster::RasterBitmap bitmap = raster::rasterize(scene, cfg.dpi, cfg.kernel_threads);
  raster::BinaryImage binary = raster::binarize(bitmap, cfg.ink_threshold, cfg.kernel_threads);
  std::vector<detect::Component> comps =
      detect::connected_components(binary, cfg.kernel_threads);
  comps = detect::order_reading(comps);

  if (cfg.dump_images) {
    dump(cfg.dump_dir, source_name + ".p" + std::to_string(index) + ".pgm",
         raster::to_pgm(bitmap));
    dump(cfg.dump_dir, source_name + ".p" + std::to_string(index) + ".pbm",
         raster::to_pbm(binary));
  }
  if (cfg.dump_components)
    dump(cfg.dump_dir, source_name + ".p" + std::to_string(index) + ".components.csv",
         detect::components_debug_csv(comps, cfg.dpi, binary.height));

  for (const detect::Component& c : comps)
    if (auto obs = detect::classify_checkbox(c, cfg.dpi, binary.height))
      pa.observations.push_back(*obs);
  return pa;
}

const grammar::FieldSpec* first_field(const grammar::FormGrammar& g, const std::string& name) {
  return g.field(name);
}

}  // namespace

DocumentResult process_document(const pdf::DocumentGraph& doc, const std::string& source_name,
                                const grammar::Registry& registry, const PipelineConfig& cfg) {
  DocumentResult result;
  result.meta.source_file = source_name;
  result.meta.page_count = int(doc.pages().size());

  std::vector<PageAnalysis> pages;
  for (size_t i = 0; i < doc.pages().size(); ++i) {
    PageAnalysis pa = analyze_page(doc, doc.pages()[i], int(i), source_name, cfg);
    if (pa.skipped)
      result.diagnostics.push_back("page " + std::to_string(i) + ": " + pa.skip_reason);
    result.page_heights.push_back(pa.height);
    pages.push_back(std::move(pa));
  }

  // Group pages into forms: a page whose head matches a registered title
  // starts a form; title-less pages continue the open form.
  struct Group {
    std::string form_id;
    int first_page;
    std::vector<int> page_indices;
  };
  std::vector<Group> groups;
  for (int i = 0; i < int(pages.size()); ++i) {
    if (pages[i].skipped) continue;
    std::string id = registry.identify(pages[i].lines);
    if (!id.empty()) {
      groups.push_back({id, i, {i}});
    } else if (!groups.empty()) {
      groups.back().page_indices.push_back(i);
    } else {
      result.diagnostics.push_back("page " + std::to_string(i) + ": no form title recognized");
    }
  }

  for (const Group& g : groups) {
    FormExtraction fx;
    fx.form_id = g.form_id;
    fx.first_page = g.first_page;
    fx.page_count = int(g.page_indices.size());

    std::vector<std::string> lines;
    records::AnchorContext ctx;
    ctx.col_pitch = cfg.col_pitch;
    ctx.row_pitch = cfg.row_pitch;
    for (size_t k = 0; k < g.page_indices.size(); ++k) {
      int pi = g.page_indices[k];
      std::vector<std::string> page_lines = grammar::trim_blank_edges(pages[pi].lines);
      if (k) lines.push_back("");
      lines.insert(lines.end(), page_lines.begin(), page_lines.end());
      for (detect::CheckboxObservation obs : pages[pi].observations) {
        obs.page_index = int(k);  // page index relative to the form
        fx.observations.push_back(obs);
      }
      ctx.page_heights.push_back(pages[pi].height);
    }

    const grammar::FormGrammar* gram = registry.find(g.form_id);
    if (!gram) continue;
    grammar::ParseOutcome outcome = grammar::parse_form(*gram, lines);
    fx.parsed = grammar::parsed_ok(outcome);
    if (fx.parsed) {
      fx.parse = std::get<grammar::ParseResult>(outcome);

      if (fx.form_id == "dcd_flowsheet")
        fx.vitals = records::build_vitals_table(fx.parse, &fx.warnings);

      bool has_preop = fx.form_id == "pre_operative_management" ||
                       (fx.form_id == "dcd_flowsheet" && first_field(*gram, "heparin"));
      if (has_preop) {
        fx.preop = records::build_preop_record(fx.parse, *gram, fx.observations, ctx);
        fx.warnings.insert(fx.warnings.end(), fx.preop->warnings.begin(),
                           fx.preop->warnings.end());
      }
      if (fx.form_id == "liver_data") {
        try {
          fx.liver = records::build_liver_record(fx.parse, *gram, fx.observations);
        } catch (const records::RecordError& e) {
          fx.warnings.push_back(e.what());
        }
      }

      // Bookkeeping bindings: first form carrying them wins.
      auto take_meta = [&](const char* key, std::string& slot) {
        if (!slot.empty()) return;
        auto it = fx.parse.bindings.find(key);
        if (it != fx.parse.bindings.end() && !it->second.missing()) slot = it->second.text;
      };
      take_meta("generated_at", result.meta.generated_at);
      take_meta("version_note", result.meta.version_note);
    } else {
      fx.failure = std::get<grammar::ParseFailure>(outcome);
    }
    result.forms.push_back(std::move(fx));
  }
  return result;
}

namespace {

ojson checkbox_state_json(const FormExtraction& fx, const std::string& name) {
  if (fx.form_id == "liver_data" && fx.liver) {
    for (const auto& [n, st] : fx.liver->checkboxes)
      if (n == name) return st;
    return nullptr;
  }
  if (fx.preop && name == "heparin") {
    if (fx.preop->heparin_checkbox.has_value()) return *fx.preop->heparin_checkbox;
    return nullptr;
  }
  return nullptr;
}

// The derived timestamp column for bare-time tables: the document date from
// the form's own date binding prefixes the row time.
std::string inherit_timestamp(const grammar::RowBindings& scalars, const char* date_key,
                              const grammar::RowBindings& row, const char* time_key) {
  auto d = scalars.find(date_key);
  auto t = row.find(time_key);
  if (d == scalars.end() || d->second.missing() || t == row.end() || t->second.missing())
    return "";
  return d->second.text + " " + t->second.text;
}

}  // namespace

ojson document_json(const DocumentResult& doc, const grammar::Registry& registry) {
  ojson out;
  out["source_file"] = doc.meta.source_file;
  out["page_count"] = doc.meta.page_count;
  out["generated_at"] =
      doc.meta.generated_at.empty() ? ojson(nullptr) : ojson(doc.meta.generated_at);
  out["version_note"] =
      doc.meta.version_note.empty() ? ojson(nullptr) : ojson(doc.meta.version_note);

  ojson forms = ojson::array();
  for (const FormExtraction& fx : doc.forms) {
    ojson f;
    f["form_id"] = fx.form_id;
    f["parsed"] = fx.parsed;
    const grammar::FormGrammar* gram = registry.find(fx.form_id);
    if (fx.parsed && gram) {
      ojson fields = ojson::object();
      ojson checkboxes = ojson::object();
      for (const grammar::FieldSpec& spec : gram->fields) {
        if (spec.kind == grammar::FieldKind::CheckboxAnchor) {
          checkboxes[spec.name] = checkbox_state_json(fx, spec.name);
          if (fx.preop && spec.name == "heparin")
            fields["heparin"] = fx.preop->heparin.empty() ? ojson(nullptr)
                                                          : ojson(fx.preop->heparin);
          continue;
        }
        auto it = fx.parse.bindings.find(spec.name);
        fields[spec.name] =
            it == fx.parse.bindings.end() ? ojson(nullptr) : exporters::field_json(it->second);
      }
      f["fields"] = fields;
      f["checkboxes"] = checkboxes;

      ojson tables = ojson::object();
      for (const auto& [name, rows] : fx.parse.tables) {
        ojson t = exporters::table_json(rows, *gram, name);
        if (fx.form_id == "flowsheet" && name == "vital_signs") {
          for (size_t i = 0; i < rows.size(); ++i) {
            std::string ts = inherit_timestamp(fx.parse.bindings, "fs_date", rows[i], "vs_time");
            t[i]["vs_timestamp"] = ts.empty() ? ojson(nullptr) : ojson(ts);
          }
        }
        tables[name] = std::move(t);
      }
      f["tables"] = tables;
    } else {
      f["failure"] = ojson::object({{"kind", fx.failure.kind ==
                                                 grammar::ParseFailure::Kind::TypedValueError
                                             ? "TypedValueError"
                                             : "NoMatch"},
                                    {"first_unmatched_line", fx.failure.first_unmatched_line},
                                    {"unmatched_text", fx.failure.unmatched_text},
                                    {"matched_prefix_lines", fx.failure.matched_prefix_lines}});
    }
    if (!fx.warnings.empty()) f["warnings"] = fx.warnings;
    forms.push_back(std::move(f));
  }
  out["forms"] = std::move(forms);
  if (!doc.diagnostics.empty()) out["diagnostics"] = doc.diagnostics;
  return out;
}

namespace {

std::string scalar_table_name(const grammar::FormGrammar& g) {
  for (const grammar::LinePattern& lp : g.lines)
    if (lp.kind == grammar::LineKind::Repeat && lp.table == g.form_id)
      return g.form_id + "_info";
  return g.form_id;
}

records::Row scalar_row(const records::TableSchema& schema, const FormExtraction& fx) {
  records::Row row;
  for (const records::Column& col : schema.columns) {
    if (fx.preop && col.name == "heparin") {
      row.push_back(fx.preop->heparin.empty() ? records::Cell::null()
                                              : records::Cell::text(fx.preop->heparin));
      continue;
    }
    if (fx.liver) {
      bool is_box = false;
      for (const auto& [n, st] : fx.liver->checkboxes)
        if (n == col.name) {
          row.push_back(records::Cell::integer(st ? 1 : 0));
          is_box = true;
        }
      if (is_box) continue;
    }
    auto it = fx.parse.bindings.find(col.name);
    row.push_back(it == fx.parse.bindings.end() ? records::Cell::null()
                                                : records::Cell::from_field(it->second));
  }
  return row;
}

}  // namespace

std::vector<std::pair<records::TableSchema, std::vector<records::Row>>> document_tables(
    const DocumentResult& doc, const grammar::Registry& registry) {
  std::vector<std::pair<records::TableSchema, std::vector<records::Row>>> tables;

  tables.emplace_back(records::documents_schema(),
                      std::vector<records::Row>{records::meta_row(doc.meta)});
  {
    std::vector<records::Row> rows;
    for (const FormExtraction& fx : doc.forms)
      rows.push_back({records::Cell::text(doc.meta.source_file), records::Cell::text(fx.form_id),
                      records::Cell::integer(fx.first_page),
                      records::Cell::integer(fx.page_count),
                      records::Cell::integer(fx.parsed ? 1 : 0)});
    tables.emplace_back(records::forms_schema(), std::move(rows));
  }

  for (const FormExtraction& fx : doc.forms) {
    if (!fx.parsed) continue;
    const grammar::FormGrammar* gram = registry.find(fx.form_id);
    if (!gram) continue;

    // The paper's vitals series keeps its published schema.
    if (fx.form_id == "dcd_flowsheet") {
      std::vector<records::Row> rows;
      for (const records::VitalsSeriesRow& r : fx.vitals) rows.push_back(records::vitals_row(r));
      tables.emplace_back(records::vitals_schema(), std::move(rows));
    }

    // Scalar tables: the form's own fields, then each spliced subform's.
    std::vector<std::string> scopes = {""};
    for (const std::string& s : gram->subform_ids) scopes.push_back(s);
    for (const std::string& scope : scopes) {
      std::string tname = scope.empty() ? scalar_table_name(*gram) : scope;
      bool checkbox_as_text = fx.preop.has_value();  // pre-op style Yes/No columns
      records::TableSchema schema = records::scalar_schema(*gram, scope, tname, checkbox_as_text);
      if (schema.columns.empty()) continue;
      tables.emplace_back(schema, std::vector<records::Row>{scalar_row(schema, fx)});
    }

    // Row tables for repeat groups (dcd vitals already covered above).
    for (const auto& [name, rows] : fx.parse.tables) {
      if (fx.form_id == "dcd_flowsheet" && name == "dcd_flowsheet") continue;
      records::TableSchema schema = records::repeat_schema(*gram, name);
      bool vs_extra = fx.form_id == "flowsheet" && name == "vital_signs";
      if (vs_extra) schema.columns.push_back({"vs_timestamp", records::Affinity::Text, true});
      std::vector<records::Row> out_rows;
      for (const grammar::RowBindings& row : rows) {
        records::Row r;
        for (const records::Column& col : schema.columns) {
          if (vs_extra && col.name == "vs_timestamp") {
            std::string ts = inherit_timestamp(fx.parse.bindings, "fs_date", row, "vs_time");
            r.push_back(ts.empty() ? records::Cell::null() : records::Cell::text(ts));
            continue;
          }
          auto it = row.find(col.name);
          r.push_back(it == row.end() ? records::Cell::null()
                                      : records::Cell::from_field(it->second));
        }
        out_rows.push_back(std::move(r));
      }
      tables.emplace_back(std::move(schema), std::move(out_rows));
    }
  }
  return tables;
}

}  // namespace formpipe::batch
