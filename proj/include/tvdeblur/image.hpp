#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tvdeblur {

class BlurOperator;

/// Square grayscale image. Pixels are stored column-major (pixel (r,c) lives
/// at index c*n + r), which is also the vectorization convention: the image
/// vector stacks columns. Values nominally live in [0,1]; the math is
/// range-agnostic and only file I/O clamps.
struct Image {
  int n = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int side, std::vector<double> data);
  static Image zeros(int side);

  double& at(int r, int c) { return pixels[static_cast<std::size_t>(c) * n + r]; }
  double at(int r, int c) const { return pixels[static_cast<std::size_t>(c) * n + r]; }

  double mean() const;
  bool all_finite() const;
};

enum class PhantomKind { checkerboard, ramp, disks, text_bars };

PhantomKind phantom_kind_from_string(const std::string& name);
std::string to_string(PhantomKind kind);

/// Deterministic synthetic test image for (kind, n, seed); values in [0,1].
/// n < 8 is rejected.
Image make_phantom(PhantomKind kind, int n, std::uint64_t seed);

/// Column-stacked copy of the pixel grid.
std::vector<double> vectorize(const Image& img);
/// Inverse of vectorize; vec.size() must equal n*n.
Image devectorize(std::span<const double> vec, int n);

struct DegradationSpec {
  int kernel_size = 17;
  double kernel_sigma = 7.0;
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;
};

/// blur(img) plus optional i.i.d. Gaussian noise; noise_sigma == 0 gives the
/// pure blur. The blur operator must match the image side.
Image degrade(const Image& img, const DegradationSpec& spec, const BlurOperator& blur);

/// Binary PGM ("P5", maxval 255, square images only). Bytes map b <-> b/255;
/// writing clamps to [0,1] and rounds half-up.
Image read_pgm(const std::string& path);
void write_pgm(const Image& img, const std::string& path);

}  // namespace tvdeblur
