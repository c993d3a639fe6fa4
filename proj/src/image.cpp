#include "tvdeblur/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tvdeblur/errors.hpp"
#include "tvdeblur/operators.hpp"
#include "tvdeblur/rng.hpp"

namespace tvdeblur {

Image::Image(int side, std::vector<double> data) : n(side), pixels(std::move(data)) {
  if (n < 0 || pixels.size() != static_cast<std::size_t>(n) * n)
    throw ShapeError("Image: pixel count does not match side length");
}

Image Image::zeros(int side) {
  return Image(side, std::vector<double>(static_cast<std::size_t>(side) * side, 0.0));
}

double Image::mean() const {
  double s = 0.0;
  for (double v : pixels) s += v;
  return pixels.empty() ? 0.0 : s / static_cast<double>(pixels.size());
}

bool Image::all_finite() const {
  for (double v : pixels)
    if (!std::isfinite(v)) return false;
  return true;
}

PhantomKind phantom_kind_from_string(const std::string& name) {
  if (name == "checkerboard") return PhantomKind::checkerboard;
  if (name == "ramp") return PhantomKind::ramp;
  if (name == "disks") return PhantomKind::disks;
  if (name == "text_bars") return PhantomKind::text_bars;
  throw std::invalid_argument("unknown phantom kind: " + name);
}

std::string to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::checkerboard: return "checkerboard";
    case PhantomKind::ramp: return "ramp";
    case PhantomKind::disks: return "disks";
    case PhantomKind::text_bars: return "text_bars";
  }
  return "?";
}

namespace {

// Board of (n/4)^2 cells, so n=8 gives alternating 2x2 blocks.
Image phantom_checkerboard(int n) {
  Image img = Image::zeros(n);
  const int block = std::max(1, n / 4);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      img.at(r, c) = static_cast<double>(((r / block) + (c / block)) % 2);
  return img;
}

Image phantom_ramp(int n) {
  Image img = Image::zeros(n);
  const double den = 2.0 * (n - 1);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) img.at(r, c) = (r + c) / den;
  return img;
}

Image phantom_disks(int n, std::uint64_t seed) {
  Image img = Image::zeros(n);
  std::fill(img.pixels.begin(), img.pixels.end(), 0.05);
  GaussianSampler rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const int ndisks = 4 + n / 16;
  for (int d = 0; d < ndisks; ++d) {
    const double cx = rng.uniform01() * n;
    const double cy = rng.uniform01() * n;
    const double rad = n / 16.0 + rng.uniform01() * (n / 5.0 - n / 16.0);
    const double val = 0.3 + 0.7 * rng.uniform01();
    const double r2 = rad * rad;
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) {
        const double dx = r + 0.5 - cx, dy = c + 0.5 - cy;
        if (dx * dx + dy * dy <= r2) img.at(r, c) = std::max(img.at(r, c), val);
      }
  }
  return img;
}

Image phantom_text_bars(int n, std::uint64_t seed) {
  Image img = Image::zeros(n);
  std::fill(img.pixels.begin(), img.pixels.end(), 0.1);
  GaussianSampler rng(seed ^ 0xd1b54a32d192ed03ULL);
  // vertical bars of seeded width/gap, like coarse glyph strokes
  int c = 1 + static_cast<int>(rng.uniform01() * 3);
  while (c < n) {
    const int w = 2 + static_cast<int>(rng.uniform01() * std::max(1, n / 8));
    for (int cc = c; cc < std::min(n, c + w); ++cc)
      for (int r = 0; r < n; ++r) img.at(r, cc) = 0.85;
    c += w + 2 + static_cast<int>(rng.uniform01() * std::max(1, n / 8));
  }
  // two horizontal cuts through the bars
  for (int band = 0; band < 2; ++band) {
    const int r0 = static_cast<int>(rng.uniform01() * (n - n / 8));
    const int h = std::max(1, n / 16);
    for (int r = r0; r < std::min(n, r0 + h); ++r)
      for (int cc = 0; cc < n; ++cc) img.at(r, cc) = 0.45;
  }
  return img;
}

}  // namespace

Image make_phantom(PhantomKind kind, int n, std::uint64_t seed) {
  if (n < 8) throw std::invalid_argument("make_phantom: n must be >= 8");
  switch (kind) {
    case PhantomKind::checkerboard: return phantom_checkerboard(n);
    case PhantomKind::ramp: return phantom_ramp(n);
    case PhantomKind::disks: return phantom_disks(n, seed);
    case PhantomKind::text_bars: return phantom_text_bars(n, seed);
  }
  throw std::invalid_argument("make_phantom: bad kind");
}

std::vector<double> vectorize(const Image& img) {
  if (img.pixels.size() != static_cast<std::size_t>(img.n) * img.n)
    throw ShapeError("vectorize: pixel count does not match side length");
  return img.pixels;
}

Image devectorize(std::span<const double> vec, int n) {
  if (vec.size() != static_cast<std::size_t>(n) * n)
    throw ShapeError("devectorize: vector length does not match n^2");
  return Image(n, std::vector<double>(vec.begin(), vec.end()));
}

Image degrade(const Image& img, const DegradationSpec& spec, const BlurOperator& blur) {
  if (blur.n() != img.n) throw ShapeError("degrade: blur operator built for different side");
  std::vector<double> out(img.pixels.size());
  blur.apply(img.pixels, out);
  if (spec.noise_sigma > 0.0) {
    GaussianSampler rng(spec.rng_seed);
    for (double& v : out) v += spec.noise_sigma * rng();
  }
  return Image(img.n, std::move(out));
}

// ----------------------------------------------------------------------------
// PGM I/O
// ----------------------------------------------------------------------------

namespace {

// Next token skipping whitespace and '#' comment lines.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) {
      tok.push_back(static_cast<char>(ch));
      while ((ch = in.peek()) != EOF && !std::isspace(ch)) {
        tok.push_back(static_cast<char>(in.get()));
      }
      return tok;
    }
  }
  return tok;
}

int parse_pgm_int(std::istream& in, const char* field) {
  const std::string tok = pgm_token(in);
  if (tok.empty()) throw FormatError(std::string("pgm: missing ") + field);
  try {
    std::size_t pos = 0;
    const int v = std::stoi(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError(std::string("pgm: bad ") + field + " '" + tok + "'");
  }
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("pgm: cannot open '" + path + "'");

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') throw FormatError("pgm: magic is not P5");

  const int width = parse_pgm_int(in, "width");
  const int height = parse_pgm_int(in, "height");
  const int maxval = parse_pgm_int(in, "maxval");
  if (width != height)
    throw FormatError("pgm: non-square image (" + std::to_string(width) + "x" +
                      std::to_string(height) + ")");
  if (maxval != 255) throw FormatError("pgm: maxval must be 255, got " + std::to_string(maxval));
  in.get();  // single whitespace before raster

  const int n = width;
  std::vector<unsigned char> raw(static_cast<std::size_t>(n) * n);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw FormatError("pgm: truncated raster");

  // raster is row-major top-to-bottom; store column-major
  Image img = Image::zeros(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      img.at(r, c) = raw[static_cast<std::size_t>(r) * n + c] / 255.0;
  return img;
}

void write_pgm(const Image& img, const std::string& path) {
  if (!img.all_finite()) throw std::invalid_argument("write_pgm: non-finite pixels");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("pgm: cannot open '" + path + "' for writing");
  out << "P5\n" << img.n << " " << img.n << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.n) * img.n);
  for (int r = 0; r < img.n; ++r)
    for (int c = 0; c < img.n; ++c) {
      const double v = std::clamp(img.at(r, c), 0.0, 1.0);
      raw[static_cast<std::size_t>(r) * img.n + c] =
          static_cast<unsigned char>(std::floor(v * 255.0 + 0.5));
    }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw FormatError("pgm: write failed for '" + path + "'");
}

}  // namespace tvdeblur
