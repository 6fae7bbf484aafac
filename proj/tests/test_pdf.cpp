#include "doctest.h"

#include <zlib.h>

#include "formpipe/pdf/content.hpp"
#include "formpipe/pdf/document.hpp"
#include "formpipe/pdf/lexer.hpp"
#include "formpipe/synth/generator.hpp"
#include "formpipe/synth/pdfwriter.hpp"
#include "support.hpp"

using namespace formpipe;

namespace {

pdf::Bytes minimal_pdf() {
  synth::PdfPage page;
  page.content = "BT /F1 12 Tf 72 700 Td (Hello) Tj ET\n";
  return synth::write_pdf({page}, true);
}

// Stored-mode deflate stream built by hand: zlib header, one stored block,
// adler32 checksum. Fully independent of zlib's compressor.
pdf::Bytes stored_deflate(const std::string& payload) {
  std::string out;
  out += '\x78';
  out += '\x01';
  out += '\x01';  // final block, stored
  uint16_t len = uint16_t(payload.size());
  out += char(len & 0xff);
  out += char(len >> 8);
  out += char(~len & 0xff);
  out += char((~len >> 8) & 0xff);
  out += payload;
  uint32_t s1 = 1, s2 = 0;
  for (unsigned char c : payload) {
    s1 = (s1 + c) % 65521;
    s2 = (s2 + s1) % 65521;
  }
  uint32_t adler = (s2 << 16) | s1;
  for (int shift = 24; shift >= 0; shift -= 8) out += char((adler >> shift) & 0xff);
  return out;
}

}  // namespace

TEST_CASE("load_document parses a minimal generated PDF") {
  pdf::DocumentGraph g = pdf::DocumentGraph::load(minimal_pdf());
  CHECK(g.pages().size() == 1);
  CHECK(g.version().substr(0, 3) == "1.4");
  CHECK(g.trailer().find("Root") != nullptr);
}

TEST_CASE("load_document rejects degenerate inputs with typed errors") {
  CHECK_THROWS_AS(pdf::DocumentGraph::load(""), pdf::PdfError);
  CHECK_THROWS_AS(pdf::DocumentGraph::load("not a pdf at all"), pdf::PdfError);
  try {
    pdf::DocumentGraph::load("");
    FAIL("expected MalformedHeader");
  } catch (const pdf::PdfError& e) {
    CHECK(e.code() == pdf::ErrorCode::MalformedHeader);
  }

  // Valid header, startxref far beyond EOF, nothing recoverable.
  pdf::Bytes broken = "%PDF-1.4\ngarbage\nstartxref\n999999\n%%EOF";
  try {
    pdf::DocumentGraph::load(broken);
    FAIL("expected BrokenXref");
  } catch (const pdf::PdfError& e) {
    CHECK(e.code() == pdf::ErrorCode::BrokenXref);
  }
}

TEST_CASE("load_document detects encryption") {
  pdf::Bytes doc = minimal_pdf();
  size_t at = doc.find("/Root");
  doc.insert(at, "/Encrypt 9 0 R ");
  // Offsets after the insert are stale; reconstruction still finds the
  // trailer, and encryption must win over everything else.
  try {
    pdf::DocumentGraph::load(doc);
    FAIL("expected EncryptedDocument");
  } catch (const pdf::PdfError& e) {
    CHECK(e.code() == pdf::ErrorCode::EncryptedDocument);
  }
}

TEST_CASE("xref reconstruction recovers documents with damaged offsets") {
  pdf::Bytes doc = minimal_pdf();
  size_t xref = doc.find("xref");
  REQUIRE(xref != pdf::Bytes::npos);
  for (size_t i = xref; i + 1 < doc.size(); ++i)
    if (doc[i] == '0' && isdigit((unsigned char)doc[i + 1])) doc[i] = '9';
  pdf::DocumentGraph g = pdf::DocumentGraph::load(doc);
  CHECK(g.pages().size() == 1);
}

TEST_CASE("decode_stream handles identity and FlateDecode") {
  pdf::Stream plain;
  plain.raw = "BT ET";
  CHECK(pdf::decode_stream(plain) == "BT ET");

  pdf::Stream flate;
  flate.dict.set("Filter", pdf::PdfValue(pdf::PdfValue::Name{"FlateDecode"}));
  flate.raw = stored_deflate("BT ET");
  CHECK(pdf::decode_stream(flate) == "BT ET");

  pdf::Stream dct;
  dct.dict.set("Filter", pdf::PdfValue(pdf::PdfValue::Name{"DCTDecode"}));
  dct.raw = "\xff\xd8";
  try {
    pdf::decode_stream(dct);
    FAIL("expected UnsupportedFilter");
  } catch (const pdf::PdfError& e) {
    CHECK(e.code() == pdf::ErrorCode::UnsupportedFilter);
  }
}

TEST_CASE("decode_stream is idempotent on already-decoded data") {
  pdf::Stream s;
  s.raw = "0 0 10 10 re f";
  CHECK(pdf::decode_stream(s) == pdf::decode_stream(s));
}

TEST_CASE("tokenize_content attaches operands and classifies operators") {
  auto ops = pdf::tokenize_content("BT /F1 12 Tf 72 700 Td (Heparin:) Tj ET");
  REQUIRE(ops.size() == 5);
  CHECK(ops[0].name == "BT");
  CHECK(ops[1].name == "Tf");
  REQUIRE(ops[1].operands.size() == 2);
  CHECK(*ops[1].operands[0].name() == "F1");
  CHECK(ops[1].operands[1].number_or(0) == 12);
  CHECK(ops[2].name == "Td");
  CHECK(ops[2].operands[0].number_or(0) == 72);
  CHECK(ops[2].operands[1].number_or(0) == 700);
  CHECK(ops[3].name == "Tj");
  CHECK(*ops[3].operands[0].str() == "Heparin:");
  CHECK(ops[4].name == "ET");
  for (const auto& op : ops) CHECK(op.cls == pdf::OpClass::Text);
}

TEST_CASE("tokenize_content on graphics ops") {
  auto ops = pdf::tokenize_content("0 0 19.2 19.2 re f");
  REQUIRE(ops.size() == 2);
  CHECK(ops[0].name == "re");
  REQUIRE(ops[0].operands.size() == 4);
  CHECK(ops[0].operands[2].number_or(0) == doctest::Approx(19.2));
  CHECK(ops[0].cls == pdf::OpClass::Graphics);
  CHECK(ops[1].name == "f");
  CHECK(ops[1].cls == pdf::OpClass::Graphics);
}

TEST_CASE("tokenize_content of empty stream is empty") {
  CHECK(pdf::tokenize_content("").empty());
}

TEST_CASE("tokenize_content reports unbalanced strings with offsets") {
  try {
    pdf::tokenize_content("BT (unterminated Tj ET");
    FAIL("expected LexError");
  } catch (const pdf::PdfError& e) {
    CHECK(e.code() == pdf::ErrorCode::LexError);
    CHECK(std::string(e.what()).find("offset") != std::string::npos);
  }
}

TEST_CASE("operator classification is total") {
  CHECK(pdf::classify_operator("Tj") == pdf::OpClass::Text);
  CHECK(pdf::classify_operator("T*") == pdf::OpClass::Text);
  CHECK(pdf::classify_operator("'") == pdf::OpClass::Text);
  CHECK(pdf::classify_operator("\"") == pdf::OpClass::Text);
  CHECK(pdf::classify_operator("f*") == pdf::OpClass::Graphics);
  CHECK(pdf::classify_operator("b*") == pdf::OpClass::Graphics);
  CHECK(pdf::classify_operator("n") == pdf::OpClass::Graphics);
  CHECK(pdf::classify_operator("cm") == pdf::OpClass::State);
  CHECK(pdf::classify_operator("gs") == pdf::OpClass::State);
  CHECK(pdf::classify_operator("madeup") == pdf::OpClass::State);
  CHECK(pdf::classify_operator("") == pdf::OpClass::State);
}

TEST_CASE("tokenize round-trips serialized operator sequences") {
  synth::Rng content(7), perturb(7);
  synth::Perturbations none;
  for (const std::string& id : synth::form_ids()) {
    synth::FormInstance fi = synth::make_form(id, content, perturb, none);
    for (const auto& page : fi.pages) {
      auto ops = pdf::tokenize_content(page.content());
      pdf::Bytes text = pdf::serialize_content(ops);
      auto ops2 = pdf::tokenize_content(text);
      REQUIRE(ops.size() == ops2.size());
      for (size_t i = 0; i < ops.size(); ++i) {
        CHECK(ops[i].name == ops2[i].name);
        CHECK(ops[i].cls == ops2[i].cls);
        REQUIRE(ops[i].operands.size() == ops2[i].operands.size());
        for (size_t k = 0; k < ops[i].operands.size(); ++k) {
          const auto& a = ops[i].operands[k];
          const auto& b = ops2[i].operands[k];
          if (a.is_number()) CHECK(a.number_or(0) == doctest::Approx(b.number_or(0)));
          if (a.str()) CHECK(*a.str() == *b.str());
          if (a.name()) CHECK(*a.name() == *b.name());
        }
      }
    }
  }
}

TEST_CASE("lexer handles strings, hex strings, names and nesting") {
  pdf::Bytes src = "<< /A [1 2 (th(re)e) <48690A>] /B#20C true >>";
  pdf::Lexer lex(src);
  pdf::PdfValue v = lex.parse_object();
  REQUIRE(v.is_dict());
  const auto* arr = v.dict()->find("A");
  REQUIRE(arr);
  REQUIRE(arr->is_array());
  CHECK(arr->array()->size() == 4);
  CHECK(*(*arr->array())[2].str() == "th(re)e");
  CHECK(*(*arr->array())[3].str() == "Hi\n");
  CHECK(v.dict()->find("B C") != nullptr);
}

TEST_CASE("deeply nested arrays fail without crashing") {
  pdf::Bytes evil(200, '[');
  pdf::Lexer lex(evil);
  CHECK_THROWS_AS(lex.parse_object(), pdf::PdfError);
}

TEST_CASE("load_document fuzz smoke: mutated fixtures never escape PdfError") {
  pdf::Bytes base = minimal_pdf();
  synth::Rng rng(99);
  for (int iter = 0; iter < 500; ++iter) {
    pdf::Bytes doc = base;
    int mutations = rng.range(1, 8);
    for (int m = 0; m < mutations && !doc.empty(); ++m) {
      switch (rng.range(0, 3)) {
        case 0:
          doc[size_t(rng.range(0, int(doc.size()) - 1))] = char(rng.range(0, 255));
          break;
        case 1:
          doc.insert(size_t(rng.range(0, int(doc.size()))), 1, char(rng.range(0, 255)));
          break;
        case 2:
          doc.erase(size_t(rng.range(0, int(doc.size()) - 1)), size_t(rng.range(1, 16)));
          break;
        case 3:
          doc.resize(size_t(rng.range(0, int(doc.size()))));
          break;
      }
    }
    try {
      pdf::DocumentGraph::load(doc);
    } catch (const pdf::PdfError&) {
      // typed error: acceptable outcome
    }
  }
}
