#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pano {

// 8-bit RGB raster, row-major.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<std::uint8_t> data;

  Image() = default;
  Image(int w, int h, int c = 3)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, 0) {}

  std::uint8_t& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// A full 360x180 panorama stores the sphere with width == 2 * height.
using EquirectImage = Image;
using PerspectiveImage = Image;

// Single-channel scalar grid, values in [0, 1].
struct SaliencyMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

// Format picked by extension: .ppm / .png (and .pgm for grayscale loads).
Image load_image(const std::string& path);
void save_image(const std::string& path, const Image& img);

// Throws InputError unless width == 2 * height.
EquirectImage load_equirect(const std::string& path);

// Loads a grayscale PGM/PNG and normalizes values to [0, 1] by maxval.
SaliencyMap load_saliency(const std::string& path);

// P6, maxval 255; the byte-exact golden-test format.
std::vector<std::uint8_t> encode_ppm(const Image& img);

}  // namespace pano
