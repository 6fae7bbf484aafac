#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace formpipe::pdf {

// Raw byte buffers are passed around as std::string; PDF is an 8-bit format.
using Bytes = std::string;

struct PdfValue;

// Indirect reference "N G R".
struct ObjRef {
  int num = 0;
  int gen = 0;
  friend bool operator==(const ObjRef&, const ObjRef&) = default;
};

// Dictionary keeping insertion order. PDF dicts are small; linear lookup.
class Dict {
public:
  using Entry = std::pair<std::string, PdfValue>;

  const PdfValue* find(const std::string& key) const;
  PdfValue* find(const std::string& key);
  void set(const std::string& key, PdfValue v);
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

private:
  std::vector<Entry> entries_;
};

// A stream object: its dictionary plus the raw (still encoded) bytes.
struct Stream {
  Dict dict;
  Bytes raw;
};

struct PdfValue {
  // Name carries the identifier without the leading slash.
  struct Name {
    std::string id;
    friend bool operator==(const Name&, const Name&) = default;
  };

  using Array = std::vector<PdfValue>;

  std::variant<std::monostate,  // null
               bool, double, Bytes, Name, Array, Dict, std::shared_ptr<Stream>, ObjRef>
      v;

  PdfValue() = default;
  PdfValue(bool b) : v(b) {}
  PdfValue(double d) : v(d) {}
  PdfValue(Bytes s) : v(std::move(s)) {}
  PdfValue(Name n) : v(std::move(n)) {}
  PdfValue(Array a) : v(std::move(a)) {}
  PdfValue(Dict d) : v(std::move(d)) {}
  PdfValue(std::shared_ptr<Stream> s) : v(std::move(s)) {}
  PdfValue(ObjRef r) : v(r) {}

  bool is_null() const { return std::holds_alternative<std::monostate>(v); }
  bool is_number() const { return std::holds_alternative<double>(v); }
  bool is_name() const { return std::holds_alternative<Name>(v); }
  bool is_string() const { return std::holds_alternative<Bytes>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }
  bool is_dict() const { return std::holds_alternative<Dict>(v); }
  bool is_stream() const { return std::holds_alternative<std::shared_ptr<Stream>>(v); }
  bool is_ref() const { return std::holds_alternative<ObjRef>(v); }

  double number_or(double dflt) const {
    if (auto* d = std::get_if<double>(&v)) return *d;
    return dflt;
  }
  const std::string* name() const {
    if (auto* n = std::get_if<Name>(&v)) return &n->id;
    return nullptr;
  }
  const Bytes* str() const { return std::get_if<Bytes>(&v); }
  const Array* array() const { return std::get_if<Array>(&v); }
  const Dict* dict() const { return std::get_if<Dict>(&v); }
  const Stream* stream() const {
    if (auto* s = std::get_if<std::shared_ptr<Stream>>(&v)) return s->get();
    return nullptr;
  }
  const ObjRef* ref() const { return std::get_if<ObjRef>(&v); }
};

inline const PdfValue* Dict::find(const std::string& key) const {
  for (const auto& [k, val] : entries_)
    if (k == key) return &val;
  return nullptr;
}

inline PdfValue* Dict::find(const std::string& key) {
  for (auto& [k, val] : entries_)
    if (k == key) return &val;
  return nullptr;
}

inline void Dict::set(const std::string& key, PdfValue v) {
  if (auto* slot = find(key)) {
    *slot = std::move(v);
    return;
  }
  entries_.emplace_back(key, std::move(v));
}

}  // namespace formpipe::pdf
