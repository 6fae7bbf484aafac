#pragma once

#include <string>
#include <vector>

namespace formpipe::synth {

// Assembles content-stream text for one page: Courier text runs plus the
// drawing commands the target forms use (boxes, rules, check glyphs).
class ContentBuilder {
public:
  void text(double x, double y, const std::string& s, double size = 10.0);
  void rect_stroke(double x, double y, double w, double h, double gray = 0.0,
                   double line_width = 1.0);
  void rect_fill(double x, double y, double w, double h, double gray = 0.0);
  void line(double x0, double y0, double x1, double y1, double gray = 0.0,
            double line_width = 1.0);
  void cubic_stroke(double x0, double y0, double c1x, double c1y, double c2x, double c2y,
                    double x1, double y1, double gray = 0.0, double line_width = 1.0);

  const std::string& ops() const { return ops_; }

private:
  std::string ops_;
};

struct PdfPage {
  std::string content;
  double width = 612.0;
  double height = 792.0;
  bool image_xobject = false;  // attach a stub DCT image and paint it
};

// Emits a PDF 1.4 document: classic xref table, Courier base font, optional
// FlateDecode on content streams. Byte-deterministic for fixed input.
std::string write_pdf(const std::vector<PdfPage>& pages, bool compress = true);

}  // namespace formpipe::synth
