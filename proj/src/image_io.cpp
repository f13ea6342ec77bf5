#include "salprop/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

namespace salprop {

namespace {

namespace fs = std::filesystem;

struct FileCloser
{
  void operator()(std::FILE * f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path & path, const char * mode)
{
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) { throw Error(ErrorCode::IoError, "cannot open " + path.string()); }
  return f;
}

std::string lower_ext(const fs::path & path)
{
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Netpbm header token reader; skips whitespace and '#' comments.
class PnmReader
{
public:
  explicit PnmReader(std::string data) : data_(std::move(data)) {}

  std::uint32_t next_uint()
  {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      throw Error(ErrorCode::ParseError, "expected integer in PNM stream");
    }
    std::uint64_t v = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(data_[pos_++] - '0');
      if (v > 0xffffffffULL) { throw Error(ErrorCode::ParseError, "integer overflow in PNM"); }
    }
    return static_cast<std::uint32_t>(v);
  }

  // Exactly one whitespace byte separates the header from binary data.
  void skip_single_space()
  {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_]))) {
      throw Error(ErrorCode::ParseError, "missing separator before PNM raster");
    }
    ++pos_;
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  unsigned char byte() { return static_cast<unsigned char>(data_[pos_++]); }

private:
  void skip_space()
  {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') { ++pos_; }
      } else if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string data_;
  std::size_t pos_{0};
};

DecodedImage decode_pnm(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw Error(ErrorCode::IoError, "cannot open " + path.string()); }
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 2 || data[0] != 'P') {
    throw Error(ErrorCode::ParseError, path.string() + ": not a PNM file");
  }
  const char kind = data[1];
  if (kind != '2' && kind != '3' && kind != '5' && kind != '6') {
    throw Error(ErrorCode::ParseError, path.string() + ": unsupported PNM variant P" + kind);
  }
  PnmReader rd(data.substr(2));
  DecodedImage img;
  img.width    = static_cast<int>(rd.next_uint());
  img.height   = static_cast<int>(rd.next_uint());
  img.maxval   = rd.next_uint();
  img.channels = (kind == '3' || kind == '6') ? 3 : 1;
  if (img.width < 1 || img.height < 1 || img.maxval < 1 || img.maxval > 65535) {
    throw Error(ErrorCode::ParseError, path.string() + ": bad PNM header");
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height * img.channels;
  img.samples.resize(n);
  if (kind == '2' || kind == '3') {
    for (std::size_t i = 0; i < n; ++i) { img.samples[i] = static_cast<std::uint16_t>(rd.next_uint()); }
  } else {
    rd.skip_single_space();
    const std::size_t bytes = img.maxval > 255 ? 2 : 1;
    if (rd.remaining() < n * bytes) {
      throw Error(ErrorCode::ParseError, path.string() + ": truncated PNM raster");
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t v = rd.byte();
      if (bytes == 2) { v = static_cast<std::uint16_t>((v << 8) | rd.byte()); }
      img.samples[i] = v;
    }
  }
  for (auto v : img.samples) {
    if (v > img.maxval) { throw Error(ErrorCode::ParseError, path.string() + ": sample exceeds maxval"); }
  }
  return img;
}

// Keeps libpng quiet on stderr; the message ends up in the thrown Error.
void png_error_to_string(png_structp png, png_const_charp msg)
{
  *static_cast<std::string *>(png_get_error_ptr(png)) = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

DecodedImage decode_png(const fs::path & path)
{
  FilePtr fp = open_file(path, "rb");
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_error_to_string, png_warning_ignore);
  png_infop info  = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  DecodedImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::ParseError, path.string() + ": corrupt PNG (" + message + ")");
  }
  png_init_io(png, fp.get());
  png_read_png(png, info, PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA, nullptr);

  const int color  = png_get_color_type(png, info);
  const int depth  = png_get_bit_depth(png, info);
  img.width        = static_cast<int>(png_get_image_width(png, info));
  img.height       = static_cast<int>(png_get_image_height(png, info));
  img.channels     = (color & PNG_COLOR_MASK_COLOR) ? 3 : 1;
  img.maxval       = depth == 16 ? 65535u : 255u;
  png_bytepp rows  = png_get_rows(png, info);
  const int stride = img.width * img.channels;
  img.samples.resize(static_cast<std::size_t>(stride) * img.height);
  for (int y = 0; y < img.height; ++y) {
    const png_bytep row = rows[y];
    for (int i = 0; i < stride; ++i) {
      img.samples[static_cast<std::size_t>(y) * stride + i] =
        depth == 16 ? static_cast<std::uint16_t>((row[2 * i] << 8) | row[2 * i + 1]) : row[i];
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_png(const fs::path & path, int width, int height, int channels, const std::uint8_t * data)
{
  FilePtr fp = open_file(path, "wb");
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_error_to_string, png_warning_ignore);
  png_infop info  = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "failed writing " + path.string() + ": " + message);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

DecodedImage decode_image(const std::filesystem::path & path)
{
  const std::string ext = lower_ext(path);
  if (ext == ".png") { return decode_png(path); }
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") { return decode_pnm(path); }
  throw Error(ErrorCode::ParseError, path.string() + ": unsupported image extension");
}

Raster load_image(const std::filesystem::path & path)
{
  const DecodedImage d = decode_image(path);
  Raster out(d.height, d.width);
  const double scale = 1.0 / d.maxval;
  for (int y = 0; y < d.height; ++y) {
    for (int x = 0; x < d.width; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * d.width + x) * d.channels;
      if (d.channels == 1) {
        out(y, x) = d.samples[i] * scale;
      } else {
        out(y, x) = (0.299 * d.samples[i] + 0.587 * d.samples[i + 1] + 0.114 * d.samples[i + 2]) * scale;
      }
    }
  }
  return out;
}

void save_gray(const std::filesystem::path & path, const Raster & img)
{
  const int w = static_cast<int>(img.cols());
  const int h = static_cast<int>(img.rows());
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bytes[static_cast<std::size_t>(y) * w + x] =
        static_cast<std::uint8_t>(std::lround(std::clamp(img(y, x), 0.0, 1.0) * 255.0));
    }
  }
  const std::string ext = lower_ext(path);
  if (ext == ".png") {
    write_png(path, w, h, 1, bytes.data());
  } else if (ext == ".pgm") {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw Error(ErrorCode::IoError, "cannot open " + path.string()); }
    out << "P5\n" << w << ' ' << h << "\n255\n";
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    throw Error(ErrorCode::IoError, path.string() + ": unsupported output extension");
  }
}

void save_rgb_png(const std::filesystem::path & path, int width, int height,
                  const std::vector<std::uint8_t> & rgb)
{
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorCode::DimensionMismatch, "RGB buffer size does not match image size");
  }
  write_png(path, width, height, 3, rgb.data());
}

}  // namespace salprop
