#include "formpipe/synth/pdfwriter.hpp"

#include <zlib.h>

#include <cstdio>
#include <stdexcept>

namespace formpipe::synth {

namespace {

std::string num(double v) {
  if (v == (long long)v) return std::to_string((long long)v);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  std::string s = buf;
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

std::string escape_string(const std::string& s) {
  std::string out = "(";
  for (unsigned char c : s) {
    if (c == '(' || c == ')' || c == '\\') {
      out += '\\';
      out += char(c);
    } else if (c < 32 || c > 126) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\%03o", c);
      out += buf;
    } else {
      out += char(c);
    }
  }
  out += ')';
  return out;
}

std::string flate(const std::string& data) {
  uLongf bound = compressBound(uLong(data.size()));
  std::string out(bound, '\0');
  if (compress2(reinterpret_cast<Bytef*>(out.data()), &bound,
                reinterpret_cast<const Bytef*>(data.data()), uLong(data.size()),
                6) != Z_OK)
    throw std::runtime_error("deflate failed");
  out.resize(bound);
  return out;
}

}  // namespace

void ContentBuilder::text(double x, double y, const std::string& s, double size) {
  ops_ += "BT /F1 " + num(size) + " Tf " + num(x) + " " + num(y) + " Td " + escape_string(s) +
          " Tj ET\n";
}

void ContentBuilder::rect_stroke(double x, double y, double w, double h, double gray,
                                 double line_width) {
  ops_ += num(gray) + " G " + num(line_width) + " w " + num(x) + " " + num(y) + " " + num(w) +
          " " + num(h) + " re S\n";
}

void ContentBuilder::rect_fill(double x, double y, double w, double h, double gray) {
  ops_ += num(gray) + " g " + num(x) + " " + num(y) + " " + num(w) + " " + num(h) + " re f\n";
}

void ContentBuilder::line(double x0, double y0, double x1, double y1, double gray,
                          double line_width) {
  ops_ += num(gray) + " G " + num(line_width) + " w " + num(x0) + " " + num(y0) + " m " +
          num(x1) + " " + num(y1) + " l S\n";
}

void ContentBuilder::cubic_stroke(double x0, double y0, double c1x, double c1y, double c2x,
                                  double c2y, double x1, double y1, double gray,
                                  double line_width) {
  ops_ += num(gray) + " G " + num(line_width) + " w " + num(x0) + " " + num(y0) + " m " +
          num(c1x) + " " + num(c1y) + " " + num(c2x) + " " + num(c2y) + " " + num(x1) + " " +
          num(y1) + " c S\n";
}

std::string write_pdf(const std::vector<PdfPage>& pages, bool compress) {
  // Object plan: 1 catalog, 2 pages root, 3 font, then per page:
  // page dict, content stream, optional image xobject.
  std::vector<std::string> objects;  // bodies, 1-based ids follow vector order
  objects.emplace_back();            // [0] catalog placeholder
  objects.emplace_back();            // [1] pages placeholder
  objects.emplace_back("<< /Type /Font /Subtype /Type1 /BaseFont /Courier >>");

  // A 1x1 JPEG stub; content bytes are irrelevant (never decoded here).
  static const unsigned char kJpegStub[] = {0xff, 0xd8, 0xff, 0xdb, 0x00, 0x43,
                                            0x00, 0x01, 0xff, 0xd9};

  std::string kids;
  for (const PdfPage& page : pages) {
    int content_id = int(objects.size()) + 2;  // after the page dict
    int image_id = page.image_xobject ? content_id + 1 : 0;

    std::string resources = "<< /Font << /F1 3 0 R >>";
    if (page.image_xobject)
      resources += " /XObject << /Im0 " + std::to_string(image_id) + " 0 R >>";
    resources += " >>";

    std::string dict = "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 " + num(page.width) + " " +
                       num(page.height) + "] /Resources " + resources + " /Contents " +
                       std::to_string(content_id) + " 0 R >>";
    kids += std::to_string(int(objects.size()) + 1) + " 0 R ";
    objects.push_back(dict);

    std::string content = page.content;
    if (page.image_xobject)
      content += "q 612 0 0 792 0 0 cm /Im0 Do Q\n";
    std::string body;
    if (compress) {
      std::string z = flate(content);
      body = "<< /Length " + std::to_string(z.size()) +
             " /Filter /FlateDecode >>\nstream\n" + z + "\nendstream";
    } else {
      body = "<< /Length " + std::to_string(content.size()) + " >>\nstream\n" + content +
             "\nendstream";
    }
    objects.push_back(body);

    if (page.image_xobject) {
      std::string img(reinterpret_cast<const char*>(kJpegStub), sizeof(kJpegStub));
      objects.push_back(
          "<< /Type /XObject /Subtype /Image /Width 1 /Height 1 /ColorSpace /DeviceGray"
          " /BitsPerComponent 8 /Filter /DCTDecode /Length " +
          std::to_string(img.size()) + " >>\nstream\n" + img + "\nendstream");
    }
  }

  objects[0] = "<< /Type /Catalog /Pages 2 0 R >>";
  objects[1] = "<< /Type /Pages /Kids [" + kids + "] /Count " + std::to_string(pages.size()) +
               " >>";

  std::string out = "%PDF-1.4\n%\xe2\xe3\xcf\xd3\n";
  std::vector<size_t> offsets;
  for (size_t i = 0; i < objects.size(); ++i) {
    offsets.push_back(out.size());
    out += std::to_string(i + 1) + " 0 obj\n" + objects[i] + "\nendobj\n";
  }
  size_t xref_at = out.size();
  out += "xref\n0 " + std::to_string(objects.size() + 1) + "\n";
  out += "0000000000 65535 f \n";
  for (size_t off : offsets) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%010zu 00000 n \n", off);
    out += buf;
  }
  out += "trailer\n<< /Size " + std::to_string(objects.size() + 1) +
         " /Root 1 0 R >>\nstartxref\n" + std::to_string(xref_at) + "\n%%EOF\n";
  return out;
}

}  // namespace formpipe::synth
