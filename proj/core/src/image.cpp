// Copyright 2026 The segaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// PNG codecs for frames and masks (libpng simplified API).

#include <png.h>

#include <cmath>
#include <cstring>

#include "segaug/error.hpp"
#include "segaug/mask_io.hpp"

namespace segaug
{
namespace
{

struct PngImage
{
  png_image image;

  PngImage()
  {
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
  }
  ~PngImage() { png_image_free(&image); }

  PngImage(const PngImage &) = delete;
  PngImage & operator=(const PngImage &) = delete;
};

std::vector<std::uint8_t> read_png(
  const std::filesystem::path & path, png_uint_32 format, int & width, int & height)
{
  PngImage png;
  if (png_image_begin_read_from_file(&png.image, path.c_str()) == 0) {
    throw IoError("cannot read PNG " + path.string() + ": " + png.image.message);
  }
  png.image.format = format;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png.image));
  if (png_image_finish_read(&png.image, nullptr, buffer.data(), 0, nullptr) == 0) {
    throw IoError("cannot decode PNG " + path.string() + ": " + png.image.message);
  }
  width = static_cast<int>(png.image.width);
  height = static_cast<int>(png.image.height);
  return buffer;
}

void write_png(
  const std::filesystem::path & path, png_uint_32 format, int width, int height,
  const std::uint8_t * data)
{
  if (width < 1 || height < 1) {
    throw ValidationError("cannot write empty image to " + path.string());
  }
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  PngImage png;
  png.image.width = static_cast<png_uint_32>(width);
  png.image.height = static_cast<png_uint_32>(height);
  png.image.format = format;
  if (png_image_write_to_file(&png.image, path.c_str(), 0, data, 0, nullptr) == 0) {
    throw IoError("cannot write PNG " + path.string() + ": " + png.image.message);
  }
}

}  // namespace

RgbImage read_rgb_png(const std::filesystem::path & path)
{
  RgbImage img;
  img.pixels = read_png(path, PNG_FORMAT_RGB, img.width, img.height);
  return img;
}

void write_rgb_png(const std::filesystem::path & path, const RgbImage & image)
{
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    throw ValidationError("RGB buffer does not match its dimensions");
  }
  write_png(path, PNG_FORMAT_RGB, image.width, image.height, image.pixels.data());
}

BinaryMask read_mask_png(const std::filesystem::path & path)
{
  BinaryMask mask;
  std::vector<std::uint8_t> gray = read_png(path, PNG_FORMAT_GRAY, mask.width, mask.height);
  for (std::uint8_t & v : gray) {
    if (v != 0 && v != 255) {
      throw ValidationError(
        path.string() + ": mask value " + std::to_string(v) + " is neither 0 nor 255");
    }
    v = v == 255 ? 1 : 0;
  }
  mask.bits = std::move(gray);
  return mask;
}

void write_mask_png(const std::filesystem::path & path, const BinaryMask & mask)
{
  if (mask.bits.size() != static_cast<std::size_t>(mask.width) * mask.height) {
    throw ValidationError("mask buffer does not match its dimensions");
  }
  std::vector<std::uint8_t> gray(mask.bits.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits[i] != 0 ? 255 : 0;
  write_png(path, PNG_FORMAT_GRAY, mask.width, mask.height, gray.data());
}

SoftMask read_soft_mask_png(const std::filesystem::path & path)
{
  SoftMask mask;
  const std::vector<std::uint8_t> gray = read_png(path, PNG_FORMAT_GRAY, mask.width, mask.height);
  mask.values.resize(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i) mask.values[i] = static_cast<float>(gray[i]) / 255.0F;
  return mask;
}

void write_soft_mask_png(const std::filesystem::path & path, const SoftMask & mask)
{
  check_soft_mask(mask);
  std::vector<std::uint8_t> gray(mask.values.size());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = static_cast<std::uint8_t>(std::lround(mask.values[i] * 255.0F));
  }
  write_png(path, PNG_FORMAT_GRAY, mask.width, mask.height, gray.data());
}

}  // namespace segaug
