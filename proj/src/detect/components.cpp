#include "formpipe/detect/components.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>

namespace formpipe::detect {

namespace {

struct UnionFind {
  std::vector<int32_t> parent;

  int32_t make() {
    parent.push_back(int32_t(parent.size()));
    return int32_t(parent.size() - 1);
  }
  int32_t find(int32_t x) {
    int32_t root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      int32_t next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  }
  void unite(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

// First-pass labeling of rows [y0, y1) writing provisional labels (local ids
// starting at 1) into labels; equivalences go to uf. uf slot 0 is reserved.
void label_rows(const raster::BinaryImage& img, int y0, int y1, std::vector<int32_t>& labels,
                UnionFind& uf) {
  const int w = img.width;
  const uint8_t* fg = img.foreground.data();
  for (int y = y0; y < y1; ++y) {
    const uint8_t* row = fg + size_t(y) * w;
    const int32_t* up = y > y0 ? labels.data() + size_t(y - 1) * w : nullptr;
    int32_t* cur = labels.data() + size_t(y) * w;
    for (int x = 0; x < w; ++x) {
      if (!row[x]) {
        cur[x] = 0;
        continue;
      }
      int32_t best = 0;
      int32_t n[4] = {
          x > 0 ? cur[x - 1] : 0,
          up && x > 0 ? up[x - 1] : 0,
          up ? up[x] : 0,
          up && x + 1 < w ? up[x + 1] : 0,
      };
      for (int32_t v : n)
        if (v && (best == 0 || v < best)) best = v;
      if (best == 0) {
        cur[x] = uf.make();
      } else {
        cur[x] = best;
        for (int32_t v : n)
          if (v && v != best) uf.unite(best, v);
      }
    }
  }
}

// Final pass: resolve provisional labels through uf, assign dense ids in
// row-major first-appearance order, and accumulate region properties.
std::vector<Component> finalize(const raster::BinaryImage& img, std::vector<int32_t>& labels,
                                UnionFind& uf, std::vector<int32_t>* label_image) {
  const int w = img.width, h = img.height;
  std::vector<int32_t> dense(uf.parent.size(), 0);
  std::vector<Component> comps;
  std::vector<double> sum_x, sum_y;

  for (int y = 0; y < h; ++y) {
    int32_t* row = labels.data() + size_t(y) * w;
    for (int x = 0; x < w; ++x) {
      if (!row[x]) continue;
      int32_t root = uf.find(row[x]);
      int32_t id = dense[root];
      if (id == 0) {
        id = int32_t(comps.size() + 1);
        dense[root] = id;
        Component c;
        c.label = id;
        c.min_x = c.max_x = x;
        c.min_y = c.max_y = y;
        comps.push_back(c);
        sum_x.push_back(0);
        sum_y.push_back(0);
      }
      row[x] = id;
      Component& c = comps[id - 1];
      c.min_x = std::min(c.min_x, x);
      c.max_x = std::max(c.max_x, x);
      c.min_y = std::min(c.min_y, y);
      c.max_y = std::max(c.max_y, y);
      c.pixel_count++;
      sum_x[id - 1] += x;
      sum_y[id - 1] += y;
    }
  }
  for (size_t i = 0; i < comps.size(); ++i) {
    comps[i].centroid_x = sum_x[i] / double(comps[i].pixel_count);
    comps[i].centroid_y = sum_y[i] / double(comps[i].pixel_count);
  }
  if (label_image) *label_image = std::move(labels);
  return comps;
}

}  // namespace

std::vector<Component> connected_components_serial(const raster::BinaryImage& img,
                                                   std::vector<int32_t>* label_image) {
  std::vector<int32_t> labels(size_t(img.width) * img.height, 0);
  UnionFind uf;
  uf.make();  // reserve 0
  label_rows(img, 0, img.height, labels, uf);
  return finalize(img, labels, uf, label_image);
}

std::vector<Component> connected_components_serial(const raster::BinaryImage& img) {
  return connected_components_serial(img, nullptr);
}

std::vector<Component> connected_components(const raster::BinaryImage& img, int n_threads) {
  const int w = img.width, h = img.height;
  if (w == 0 || h == 0) return {};
  int threads = n_threads > 0 ? n_threads : omp_get_max_threads();
  threads = std::max(1, std::min(threads, h));
  if (threads == 1) return connected_components_serial(img);

  std::vector<int32_t> labels(size_t(w) * h, 0);
  std::vector<UnionFind> local(threads);
  std::vector<int> strip_y0(threads), strip_y1(threads);
  std::vector<int32_t> strip_count(threads, 0);

  // Pass 1: label strips independently with local provisional ids, then
  // compact each strip to dense local roots (1..m_t).
#pragma omp parallel num_threads(threads)
  {
    int t = omp_get_thread_num();
    int y0 = int((long long)h * t / threads);
    int y1 = int((long long)h * (t + 1) / threads);
    strip_y0[t] = y0;
    strip_y1[t] = y1;
    UnionFind& uf = local[t];
    uf.make();
    label_rows(img, y0, y1, labels, uf);
    // Compact local roots to 1..m.
    std::vector<int32_t> remap(uf.parent.size(), 0);
    int32_t m = 0;
    for (int y = y0; y < y1; ++y) {
      int32_t* row = labels.data() + size_t(y) * w;
      for (int x = 0; x < w; ++x) {
        if (!row[x]) continue;
        int32_t root = uf.find(row[x]);
        if (remap[root] == 0) remap[root] = ++m;
        row[x] = remap[root];
      }
    }
    strip_count[t] = m;
  }

  // Offset local ids to a global provisional space.
  std::vector<int32_t> base(threads + 1, 0);
  for (int t = 0; t < threads; ++t) base[t + 1] = base[t] + strip_count[t];
  int32_t total = base[threads];

#pragma omp parallel num_threads(threads)
  {
    int t = omp_get_thread_num();
    if (base[t] != 0) {
      for (int y = strip_y0[t]; y < strip_y1[t]; ++y) {
        int32_t* row = labels.data() + size_t(y) * w;
        for (int x = 0; x < w; ++x)
          if (row[x]) row[x] += base[t];
      }
    }
  }

  // Pass 2: merge across strip boundaries (serial; boundaries are few).
  UnionFind global;
  global.parent.resize(size_t(total) + 1);
  std::iota(global.parent.begin(), global.parent.end(), 0);
  for (int t = 1; t < threads; ++t) {
    int y = strip_y0[t];
    if (y == 0 || y >= h) continue;
    const int32_t* up = labels.data() + size_t(y - 1) * w;
    const int32_t* cur = labels.data() + size_t(y) * w;
    for (int x = 0; x < w; ++x) {
      if (!cur[x]) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        int nx = x + dx;
        if (nx < 0 || nx >= w) continue;
        if (up[nx]) global.unite(cur[x], up[nx]);
      }
    }
  }

  return finalize(img, labels, global, nullptr);
}

std::vector<Component> order_reading(std::vector<Component> components, double row_tolerance) {
  if (components.empty()) return components;

  if (row_tolerance < 0) {
    std::vector<int> heights;
    heights.reserve(components.size());
    for (const Component& c : components) heights.push_back(c.height());
    std::nth_element(heights.begin(), heights.begin() + heights.size() / 2, heights.end());
    row_tolerance = heights[heights.size() / 2] / 2.0;
  }

  std::sort(components.begin(), components.end(), [](const Component& a, const Component& b) {
    if (a.centroid_y != b.centroid_y) return a.centroid_y < b.centroid_y;
    return a.label < b.label;
  });

  std::vector<Component> out;
  out.reserve(components.size());
  size_t i = 0;
  while (i < components.size()) {
    double anchor = components[i].centroid_y;
    size_t j = i;
    while (j < components.size() && components[j].centroid_y - anchor <= row_tolerance) ++j;
    std::sort(components.begin() + i, components.begin() + j,
              [](const Component& a, const Component& b) {
                if (a.centroid_x != b.centroid_x) return a.centroid_x < b.centroid_x;
                return a.label < b.label;
              });
    for (size_t k = i; k < j; ++k) out.push_back(components[k]);
    i = j;
  }
  return out;
}

}  // namespace formpipe::detect
