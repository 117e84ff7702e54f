#include "pano/image.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "pano/error.hpp"

namespace pano {

namespace {

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Skips whitespace and '#' comments in PNM headers.
int next_pnm_token(std::istream& in, std::string& tok) {
  tok.clear();
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
    } else if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
      return 0;
    }
  }
  return -1;
}

struct PnmHeader {
  std::string magic;
  int width = 0, height = 0, maxval = 0;
};

PnmHeader read_pnm_header(std::istream& in, const std::string& path) {
  PnmHeader h;
  std::string tok;
  if (next_pnm_token(in, h.magic) < 0) throw ParseError(path + ": truncated PNM header");
  for (int* field : {&h.width, &h.height, &h.maxval}) {
    if (next_pnm_token(in, tok) < 0) throw ParseError(path + ": truncated PNM header");
    try {
      *field = std::stoi(tok);
    } catch (const std::exception&) {
      throw ParseError(path + ": bad PNM header token '" + tok + "'");
    }
  }
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
    throw ParseError(path + ": invalid PNM dimensions");
  }
  return h;
}

Image load_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  const PnmHeader h = read_pnm_header(in, path);
  if (h.magic != "P6") throw ParseError(path + ": expected P6, got " + h.magic);
  if (h.maxval != 255) throw ParseError(path + ": only maxval 255 supported");
  Image img(h.width, h.height, 3);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
    throw ParseError(path + ": truncated pixel data");
  }
  return img;
}

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    if (fp) std::fclose(fp);
  }
};

Image load_png(const std::string& path, int force_channels) {
  PngReadCloser st;
  st.fp = std::fopen(path.c_str(), "rb");
  if (!st.fp) throw InputError("cannot open " + path);
  st.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  st.info = png_create_info_struct(st.png);
  if (setjmp(png_jmpbuf(st.png))) throw ParseError(path + ": PNG decode failed");
  png_init_io(st.png, st.fp);
  png_read_info(st.png, st.info);

  png_set_strip_16(st.png);
  png_set_packing(st.png);
  png_set_strip_alpha(st.png);
  const png_byte color = png_get_color_type(st.png, st.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(st.png);
  if (force_channels == 3 && (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)) {
    png_set_gray_to_rgb(st.png);
  }
  if (force_channels == 1 && (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA)) {
    png_set_rgb_to_gray_fixed(st.png, 1, -1, -1);
  }
  png_read_update_info(st.png, st.info);

  Image img(static_cast<int>(png_get_image_width(st.png, st.info)),
            static_cast<int>(png_get_image_height(st.png, st.info)), force_channels);
  if (static_cast<int>(png_get_rowbytes(st.png, st.info)) !=
      img.width * force_channels) {
    throw ParseError(path + ": unexpected PNG layout");
  }
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y) {
    rows[y] = img.data.data() + static_cast<std::size_t>(y) * img.width * force_channels;
  }
  png_read_image(st.png, rows.data());
  png_read_end(st.png, nullptr);
  return img;
}

void save_png(const std::string& path, const Image& img) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw InputError("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw InputError(path + ": PNG encode failed");
  }
  png_init_io(png, fp);
  const int type = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(png, info, img.width, img.height, 8, type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < img.height; ++y) {
    png_write_row(png, const_cast<png_bytep>(
        img.data.data() + static_cast<std::size_t>(y) * img.width * img.channels));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

SaliencyMap load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  const PnmHeader h = read_pnm_header(in, path);
  if (h.magic != "P5" && h.magic != "P2") {
    throw ParseError(path + ": expected P5/P2, got " + h.magic);
  }
  SaliencyMap map;
  map.width = h.width;
  map.height = h.height;
  map.values.resize(static_cast<std::size_t>(h.width) * h.height);
  if (h.magic == "P2") {
    std::string tok;
    for (double& v : map.values) {
      if (next_pnm_token(in, tok) < 0) throw ParseError(path + ": truncated P2 data");
      v = std::stod(tok) / h.maxval;
    }
  } else {
    const int bytes = h.maxval > 255 ? 2 : 1;
    std::vector<std::uint8_t> raw(map.values.size() * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      throw ParseError(path + ": truncated P5 data");
    }
    for (std::size_t i = 0; i < map.values.size(); ++i) {
      const int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8 | raw[2 * i + 1]);
      map.values[i] = static_cast<double>(v) / h.maxval;
    }
  }
  return map;
}

}  // namespace

std::vector<std::uint8_t> encode_ppm(const Image& img) {
  std::ostringstream header;
  header << "P6\n" << img.width << " " << img.height << "\n255\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> out(h.begin(), h.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

Image load_image(const std::string& path) {
  if (ends_with(path, ".ppm")) return load_ppm(path);
  if (ends_with(path, ".png")) return load_png(path, 3);
  throw InputError(path + ": unsupported image format (use .ppm or .png)");
}

void save_image(const std::string& path, const Image& img) {
  if (img.channels != 3) throw InputError("save_image: RGB images only");
  if (ends_with(path, ".png")) {
    save_png(path, img);
    return;
  }
  if (ends_with(path, ".ppm")) {
    const auto bytes = encode_ppm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return;
  }
  throw InputError(path + ": unsupported output format (use .ppm or .png)");
}

EquirectImage load_equirect(const std::string& path) {
  Image img = load_image(path);
  if (img.width != 2 * img.height) {
    throw InputError(path + ": equirectangular input must be 2:1, got " +
                     std::to_string(img.width) + "x" + std::to_string(img.height));
  }
  return img;
}

SaliencyMap load_saliency(const std::string& path) {
  if (ends_with(path, ".pgm")) return load_pgm(path);
  if (ends_with(path, ".png")) {
    const Image img = load_png(path, 1);
    SaliencyMap map;
    map.width = img.width;
    map.height = img.height;
    map.values.resize(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) map.values[i] = img.data[i] / 255.0;
    return map;
  }
  throw InputError(path + ": unsupported saliency format (use .pgm or .png)");
}

}  // namespace pano
