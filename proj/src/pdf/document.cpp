#include "formpipe/pdf/document.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <set>

#include "formpipe/pdf/lexer.hpp"

namespace formpipe::pdf {

namespace {

// Reads the object body that starts right after "N G obj". Returns the value;
// streams pick up their raw bytes using the /Length entry (clamped to what is
// actually present so damaged files cannot demand absurd buffers).
PdfValue parse_indirect_body(Lexer& lex, const Bytes& data,
                             const std::map<std::pair<int, int>, PdfValue>* objects) {
  PdfValue val = lex.parse_object();
  Lexer::Token t = lex.peek();
  if (t.type == Lexer::TokType::Keyword && t.text == "stream") {
    lex.next();
    if (!val.is_dict())
      throw PdfError(ErrorCode::BadStructure, "stream keyword without dictionary");
    size_t p = lex.pos();
    // EOL after "stream": CRLF or LF.
    if (p < data.size() && data[p] == '\r') ++p;
    if (p < data.size() && data[p] == '\n') ++p;

    const Dict& d = *val.dict();
    long long length = -1;
    if (const PdfValue* lv = d.find("Length")) {
      if (lv->is_number()) {
        length = (long long)lv->number_or(0);
      } else if (lv->is_ref() && objects) {
        auto it = objects->find({lv->ref()->num, lv->ref()->gen});
        if (it != objects->end() && it->second.is_number())
          length = (long long)it->second.number_or(0);
      }
    }
    size_t avail = data.size() > p ? data.size() - p : 0;
    size_t n;
    if (length >= 0 && size_t(length) <= avail) {
      n = size_t(length);
    } else {
      // Unknown or lying /Length: scan for "endstream".
      size_t e = data.find("endstream", p);
      n = (e == Bytes::npos) ? avail : e - p;
      while (n > 0 && (data[p + n - 1] == '\n' || data[p + n - 1] == '\r')) --n;
    }
    auto s = std::make_shared<Stream>();
    s->dict = d;
    s->raw = data.substr(p, n);
    lex.seek(p + n);
    Lexer::Token end = lex.next();
    if (!(end.type == Lexer::TokType::Keyword && end.text == "endstream")) {
      // Tolerate a missing/misplaced endstream; resync on the next keyword.
      size_t e = data.find("endstream", p + n);
      if (e != Bytes::npos) lex.seek(e + 9);
    }
    return PdfValue(std::move(s));
  }
  return val;
}

struct XrefEntry {
  size_t offset = 0;
  int gen = 0;
  bool in_use = false;
};

// Classic cross-reference table sections. Returns trailer dict.
Dict parse_xref_at(const Bytes& data, size_t start, std::map<int, XrefEntry>& entries) {
  std::set<size_t> visited;
  Dict trailer;
  bool have_trailer = false;
  size_t pos = start;
  for (;;) {
    if (pos >= data.size() || visited.count(pos))
      throw PdfError(ErrorCode::BrokenXref, "xref offset out of range or cyclic");
    visited.insert(pos);

    Lexer lex(data, pos);
    Lexer::Token t = lex.next();
    if (!(t.type == Lexer::TokType::Keyword && t.text == "xref"))
      throw PdfError(ErrorCode::BrokenXref, "xref keyword not found at offset " + std::to_string(pos));

    for (;;) {
      Lexer::Token a = lex.peek();
      if (a.type == Lexer::TokType::Keyword && a.text == "trailer") {
        lex.next();
        break;
      }
      if (a.type != Lexer::TokType::Number)
        throw PdfError(ErrorCode::BrokenXref, "bad xref subsection header");
      lex.next();
      Lexer::Token b = lex.next();
      if (b.type != Lexer::TokType::Number)
        throw PdfError(ErrorCode::BrokenXref, "bad xref subsection count");
      int first = int(a.number);
      long long count = (long long)b.number;
      if (count < 0 || count > (long long)data.size())
        throw PdfError(ErrorCode::BrokenXref, "implausible xref count");
      for (long long i = 0; i < count; ++i) {
        Lexer::Token off = lex.next();
        Lexer::Token gen = lex.next();
        Lexer::Token kind = lex.next();
        if (off.type != Lexer::TokType::Number || gen.type != Lexer::TokType::Number ||
            kind.type != Lexer::TokType::Keyword)
          throw PdfError(ErrorCode::BrokenXref, "bad xref entry");
        int num = first + int(i);
        if (!entries.count(num))  // newest section wins; earlier = newer
          entries[num] = {size_t(off.number), int(gen.number), kind.text == "n"};
      }
    }

    PdfValue tv = Lexer(data, lex.pos()).parse_object();
    if (!tv.is_dict())
      throw PdfError(ErrorCode::BrokenXref, "trailer is not a dictionary");
    if (!have_trailer) {
      trailer = *tv.dict();
      have_trailer = true;
    }
    const PdfValue* prev = tv.dict()->find("Prev");
    if (!prev) break;
    if (!prev->is_number())
      throw PdfError(ErrorCode::BrokenXref, "non-numeric /Prev");
    pos = size_t(prev->number_or(0));
  }
  return trailer;
}

bool find_startxref(const Bytes& data, size_t& out) {
  // Look in the last 2 KB, as viewers do.
  size_t tail_begin = data.size() > 2048 ? data.size() - 2048 : 0;
  size_t p = data.rfind("startxref");
  if (p == Bytes::npos || p < tail_begin) p = data.rfind("startxref", Bytes::npos);
  if (p == Bytes::npos) return false;
  Lexer lex(data, p + 9);
  Lexer::Token t = lex.next();
  if (t.type != Lexer::TokType::Number) return false;
  if (t.number < 0) return false;
  out = size_t(t.number);
  return true;
}

}  // namespace

DocumentGraph DocumentGraph::load(const Bytes& data) {
  DocumentGraph g;
  if (data.size() < 8 || data.compare(0, 5, "%PDF-") != 0)
    throw PdfError(ErrorCode::MalformedHeader, "missing %PDF- header");
  {
    size_t eol = data.find_first_of("\r\n", 5);
    g.version_ = data.substr(5, eol == Bytes::npos ? 3 : std::min<size_t>(eol - 5, 8));
  }

  std::map<int, XrefEntry> xref;
  bool xref_ok = false;
  try {
    size_t sx;
    if (!find_startxref(data, sx))
      throw PdfError(ErrorCode::BrokenXref, "no startxref");
    g.trailer_ = parse_xref_at(data, sx, xref);
    xref_ok = true;
  } catch (const PdfError&) {
    xref_ok = false;
  }

  if (xref_ok) {
    // Load every in-use object from its recorded offset.
    for (const auto& [num, e] : xref) {
      if (!e.in_use || num == 0) continue;
      if (e.offset >= data.size()) {
        xref_ok = false;
        break;
      }
      Lexer lex(data, e.offset);
      try {
        Lexer::Token a = lex.next(), b = lex.next(), k = lex.next();
        if (a.type != Lexer::TokType::Number || b.type != Lexer::TokType::Number ||
            k.type != Lexer::TokType::Keyword || k.text != "obj" || int(a.number) != num) {
          xref_ok = false;
          break;
        }
        g.objects_[{num, int(b.number)}] = parse_indirect_body(lex, data, nullptr);
      } catch (const PdfError&) {
        xref_ok = false;
        break;
      }
    }
  }

  if (!xref_ok) {
    // Reconstruction pass: scan the whole file for "N G obj" headers once.
    g.objects_.clear();
    g.trailer_ = Dict{};
    size_t pos = 0;
    while (pos + 3 < data.size()) {
      size_t o = data.find("obj", pos);
      if (o == Bytes::npos) break;
      pos = o + 3;
      // Walk backwards over "N G " directly before the keyword.
      size_t q = o;
      while (q > 0 && Lexer::is_whitespace(data[q - 1])) --q;
      size_t gend = q;
      while (q > 0 && isdigit((unsigned char)data[q - 1])) --q;
      size_t gstart = q;
      if (gstart == gend) continue;
      while (q > 0 && Lexer::is_whitespace(data[q - 1])) --q;
      size_t nend = q;
      while (q > 0 && isdigit((unsigned char)data[q - 1])) --q;
      size_t nstart = q;
      if (nstart == nend) continue;
      if (o + 3 < data.size() && !Lexer::is_whitespace(data[o + 3]) && !Lexer::is_delimiter(data[o + 3]))
        continue;  // e.g. "endobj"
      int num = atoi(data.substr(nstart, nend - nstart).c_str());
      int gen = atoi(data.substr(gstart, gend - gstart).c_str());
      Lexer lex(data, o + 3);
      try {
        g.objects_[{num, gen}] = parse_indirect_body(lex, data, nullptr);
        pos = std::max(pos, lex.pos());
      } catch (const PdfError&) {
        // Damaged object body; skip it and keep scanning.
      }
    }
    // Recover a trailer: prefer an explicit trailer dict, else find /Root in
    // the object soup (catalog objects carry /Type /Catalog).
    size_t tp = data.rfind("trailer");
    if (tp != Bytes::npos) {
      try {
        PdfValue tv = Lexer(data, tp + 7).parse_object();
        if (tv.is_dict()) g.trailer_ = *tv.dict();
      } catch (const PdfError&) {
      }
    }
    if (!g.trailer_.find("Root")) {
      for (const auto& [key, val] : g.objects_) {
        const Dict* d = val.dict();
        if (!d && val.stream()) continue;
        if (d) {
          const PdfValue* t = d->find("Type");
          if (t && t->name() && *t->name() == "Catalog") {
            g.trailer_.set("Root", PdfValue(ObjRef{key.first, key.second}));
            break;
          }
        }
      }
    }
    if (g.objects_.empty() || !g.trailer_.find("Root"))
      throw PdfError(ErrorCode::BrokenXref, "xref unusable and object scan found no document");
  }

  if (g.trailer_.find("Encrypt"))
    throw PdfError(ErrorCode::EncryptedDocument, "encrypted documents are not supported");

  // Walk the page tree.
  const PdfValue* rootv = g.trailer_.find("Root");
  if (!rootv) throw PdfError(ErrorCode::BadStructure, "trailer has no /Root");
  const PdfValue& root = g.resolve(*rootv);
  if (!root.is_dict()) throw PdfError(ErrorCode::BadStructure, "/Root is not a dictionary");
  const PdfValue* pagesv = root.dict()->find("Pages");
  if (!pagesv) throw PdfError(ErrorCode::BadStructure, "catalog has no /Pages");

  std::set<std::pair<int, int>> seen;
  // Iterative DFS over the page tree, cycle-guarded.
  std::vector<PdfValue> stack{*pagesv};
  std::vector<std::vector<PdfValue>> kid_stack;
  struct Frame {
    std::vector<PdfValue> kids;
    size_t i = 0;
  };
  std::vector<Frame> frames;
  auto push_node = [&](const PdfValue& node) {
    if (node.is_ref()) {
      auto key = std::make_pair(node.ref()->num, node.ref()->gen);
      if (seen.count(key)) throw PdfError(ErrorCode::BadStructure, "page tree cycle");
      seen.insert(key);
    }
    const PdfValue& nv = g.resolve(node);
    if (!nv.is_dict()) throw PdfError(ErrorCode::BadStructure, "page tree node is not a dictionary");
    const Dict& nd = *nv.dict();
    const PdfValue* type = nd.find("Type");
    const std::string tname = (type && type->name()) ? *type->name() : "";
    if (tname == "Page") {
      PageRef pr;
      pr.obj = node.is_ref() ? *node.ref() : ObjRef{0, 0};
      pr.dict = nd;
      g.pages_.push_back(std::move(pr));
      return;
    }
    if (tname != "Pages" && !nd.find("Kids"))
      throw PdfError(ErrorCode::BadStructure, "page tree node has unexpected type");
    const PdfValue* kids = nd.find("Kids");
    if (!kids) throw PdfError(ErrorCode::BadStructure, "Pages node has no /Kids");
    const PdfValue& kv = g.resolve(*kids);
    if (!kv.is_array()) throw PdfError(ErrorCode::BadStructure, "/Kids is not an array");
    frames.push_back({*kv.array(), 0});
    if (frames.size() > 64) throw PdfError(ErrorCode::BadStructure, "page tree too deep");
  };

  push_node(*pagesv);
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.i >= f.kids.size()) {
      frames.pop_back();
      continue;
    }
    PdfValue kid = f.kids[f.i++];
    push_node(kid);
  }

  if (g.pages_.empty()) throw PdfError(ErrorCode::BadStructure, "document has no pages");
  return g;
}

const PdfValue* DocumentGraph::get_object(const ObjRef& r) const {
  auto it = objects_.find({r.num, r.gen});
  if (it != objects_.end()) return &it->second;
  // Generation mismatch fallback: match on object number alone.
  for (const auto& [key, val] : objects_)
    if (key.first == r.num) return &val;
  return nullptr;
}

const PdfValue& DocumentGraph::resolve(const PdfValue& v) const {
  const PdfValue* cur = &v;
  int hops = 0;
  while (cur->is_ref()) {
    if (++hops > 32)
      throw PdfError(ErrorCode::DanglingReference, "reference chain too long");
    const PdfValue* next = get_object(*cur->ref());
    if (!next)
      throw PdfError(ErrorCode::DanglingReference,
                     "unresolved object " + std::to_string(cur->ref()->num));
    cur = next;
  }
  return *cur;
}

std::vector<const Stream*> DocumentGraph::page_content_streams(const PageRef& page) const {
  std::vector<const Stream*> out;
  const PdfValue* contents = page.dict.find("Contents");
  if (!contents) return out;
  const PdfValue& cv = resolve(*contents);
  if (const Stream* s = cv.stream()) {
    out.push_back(s);
  } else if (cv.is_array()) {
    for (const PdfValue& item : *cv.array()) {
      const PdfValue& iv = resolve(item);
      if (const Stream* s = iv.stream()) out.push_back(s);
    }
  }
  return out;
}

std::vector<std::string> stream_filters(const Stream& stream) {
  std::vector<std::string> filters;
  const PdfValue* f = stream.dict.find("Filter");
  if (!f) return filters;
  if (f->name()) {
    filters.push_back(*f->name());
  } else if (f->is_array()) {
    for (const PdfValue& item : *f->array())
      if (item.name()) filters.push_back(*item.name());
  }
  return filters;
}

Bytes decode_stream(const Stream& stream) {
  Bytes data = stream.raw;
  for (const std::string& filter : stream_filters(stream)) {
    if (filter == "FlateDecode" || filter == "Fl") {
      z_stream zs;
      std::memset(&zs, 0, sizeof(zs));
      if (inflateInit(&zs) != Z_OK)
        throw PdfError(ErrorCode::UnsupportedFilter, "zlib init failed");
      Bytes out;
      out.resize(std::max<size_t>(data.size() * 4, 1024));
      zs.next_in = reinterpret_cast<Bytef*>(data.data());
      zs.avail_in = uInt(data.size());
      size_t written = 0;
      int rc = Z_OK;
      while (rc == Z_OK) {
        if (written == out.size()) {
          if (out.size() > (100u << 20)) {
            inflateEnd(&zs);
            throw PdfError(ErrorCode::UnsupportedFilter, "decompressed stream too large");
          }
          out.resize(out.size() * 2);
        }
        zs.next_out = reinterpret_cast<Bytef*>(out.data()) + written;
        zs.avail_out = uInt(out.size() - written);
        rc = inflate(&zs, Z_NO_FLUSH);
        written = out.size() - zs.avail_out;
        if (rc == Z_STREAM_END) break;
        if (rc != Z_OK) {
          inflateEnd(&zs);
          throw PdfError(ErrorCode::UnsupportedFilter, "flate data corrupt");
        }
      }
      inflateEnd(&zs);
      out.resize(written);
      data = std::move(out);
    } else {
      throw PdfError(ErrorCode::UnsupportedFilter, filter);
    }
  }
  return data;
}

}  // namespace formpipe::pdf
