#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "htc/error.hpp"
#include "htc/io.hpp"

namespace htc::io {

namespace {

class PnmReader {
 public:
  explicit PnmReader(std::string_view bytes) : bytes_(bytes) {}

  // Next whitespace-delimited header token, skipping '#' comments.
  std::string token() {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) ++pos_;
    if (start == pos_) fail(ErrorCategory::parse, "truncated PNM data");
    return std::string(bytes_.substr(start, pos_ - start));
  }

  long integer() {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const long v = std::stol(t, &used);
      if (used != t.size() || v < 0) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail(ErrorCategory::parse, "bad PNM integer '" + t + "'");
    }
  }

  // Raw formats: exactly one whitespace byte separates header and raster.
  std::string_view raster(std::size_t count) {
    ++pos_;
    if (pos_ + count > bytes_.size()) fail(ErrorCategory::parse, "truncated PNM raster");
    return bytes_.substr(pos_, count);
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

ImageMatrix parse_pnm(std::string_view bytes) {
  PnmReader in(bytes);
  const std::string magic = in.token();
  if (magic != "P2" && magic != "P5" && magic != "P3" && magic != "P6") {
    fail(ErrorCategory::parse, "unsupported image format '" + magic + "'; expected PGM (P2/P5) or PPM (P3/P6)");
  }
  const long width = in.integer();
  const long height = in.integer();
  const long maxval = in.integer();
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    fail(ErrorCategory::parse, "bad PNM header");
  }
  const std::size_t channels = (magic == "P3" || magic == "P6") ? 3 : 1;
  const bool raw = magic == "P5" || magic == "P6";
  const std::size_t samples = static_cast<std::size_t>(width * height) * channels;

  std::vector<double> values(samples);
  if (raw) {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    const std::string_view data = in.raster(samples * bytes_per);
    for (std::size_t k = 0; k < samples; ++k) {
      const auto hi = static_cast<unsigned char>(data[k * bytes_per]);
      values[k] = bytes_per == 2 ? hi * 256.0 + static_cast<unsigned char>(data[k * 2 + 1]) : hi;
    }
  } else {
    for (std::size_t k = 0; k < samples; ++k) values[k] = static_cast<double>(in.integer());
  }

  ImageMatrix img;
  img.max_value = static_cast<int>(maxval);
  img.pixels.resize(height, width);
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      const std::size_t base = static_cast<std::size_t>(r * width + c) * channels;
      double sum = 0.0;
      for (std::size_t ch = 0; ch < channels; ++ch) {
        if (values[base + ch] > static_cast<double>(maxval)) fail(ErrorCategory::parse, "PNM sample exceeds maxval");
        sum += values[base + ch];
      }
      img.pixels(r, c) = sum / static_cast<double>(channels);
    }
  }
  return img;
}

ImageMatrix load_pgm(const std::filesystem::path& path) {
  try {
    return parse_pnm(read_file(path));
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::io) throw;
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

std::string pgm_text(const ImageMatrix& img) {
  validate_image(img);
  std::string out = "P2\n" + std::to_string(img.cols()) + " " + std::to_string(img.rows()) + "\n" +
                    std::to_string(img.max_value) + "\n";
  for (Eigen::Index r = 0; r < img.pixels.rows(); ++r) {
    for (Eigen::Index c = 0; c < img.pixels.cols(); ++c) {
      const double v = std::clamp(std::round(img.pixels(r, c)), 0.0, static_cast<double>(img.max_value));
      if (c > 0) out += ' ';
      out += std::to_string(static_cast<long>(v));
    }
    out += '\n';
  }
  return out;
}

void write_pgm(const ImageMatrix& img, const std::filesystem::path& path) {
  write_file(path, pgm_text(img));
}

}  // namespace htc::io
