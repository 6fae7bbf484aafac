#pragma once

#include <map>
#include <string>
#include <vector>

#include "formpipe/pdf/errors.hpp"
#include "formpipe/pdf/value.hpp"

namespace formpipe::pdf {

struct PageRef {
  ObjRef obj;
  Dict dict;  // the resolved /Page dictionary
};

// Parsed PDF object store: every indirect object, the trailer, and the
// flattened page list. Immutable after load; safe to share across threads.
class DocumentGraph {
public:
  static DocumentGraph load(const Bytes& data);

  const std::string& version() const { return version_; }
  const Dict& trailer() const { return trailer_; }
  const std::vector<PageRef>& pages() const { return pages_; }
  const std::map<std::pair<int, int>, PdfValue>& objects() const { return objects_; }

  // Follows indirect references until a direct value is reached.
  // Missing targets raise DanglingReference.
  const PdfValue& resolve(const PdfValue& v) const;
  const PdfValue* get_object(const ObjRef& r) const;

  // All content streams of a page, concatenated decode order.
  std::vector<const Stream*> page_content_streams(const PageRef& page) const;

private:
  std::string version_;
  std::map<std::pair<int, int>, PdfValue> objects_;
  Dict trailer_;
  std::vector<PageRef> pages_;
};

// Inflates stream data according to its /Filter entry. Supported filters:
// none and FlateDecode. Anything else raises UnsupportedFilter, which the
// pipeline treats as "this content is image-based".
Bytes decode_stream(const Stream& stream);

// Filter names declared on a stream, normalized to a list.
std::vector<std::string> stream_filters(const Stream& stream);

}  // namespace formpipe::pdf
