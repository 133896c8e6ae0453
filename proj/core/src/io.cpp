#include "pdac/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "pdac/errors.hpp"

namespace pdac::io {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

void put_f64(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return v;
}

double get_f64(std::string_view in, std::size_t offset) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw IoError(fmt::format("KSP1: {} {} does not fit in 32 bits", what, v));
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::string encode_ksp(const ComplexStack& stack) {
  std::string out;
  out.reserve(kKspHeaderBytes + stack.size() * 16);
  out.append(kKspMagic);
  put_u32(out, checked_u32(stack.coils(), "coils"));
  put_u32(out, checked_u32(stack.height(), "height"));
  put_u32(out, checked_u32(stack.width(), "width"));
  for (const auto& v : stack.data()) {
    put_f64(out, v.real());
    put_f64(out, v.imag());
  }
  return out;
}

ComplexStack decode_ksp(std::string_view bytes) {
  if (bytes.size() < kKspHeaderBytes || bytes.substr(0, 4) != kKspMagic) {
    throw IoError("KSP1: missing or invalid header");
  }
  const std::size_t coils = get_u32(bytes, 4);
  const std::size_t height = get_u32(bytes, 8);
  const std::size_t width = get_u32(bytes, 12);
  const std::size_t plane = height * width;
  const std::size_t payload = bytes.size() - kKspHeaderBytes;
  if (plane != 0 && coils > payload / 16 / plane) {
    throw IoError(fmt::format("KSP1: header {}x{}x{} exceeds the {} payload bytes", coils, height, width, payload));
  }
  const std::size_t count = coils * plane;
  if (payload != count * 16) {
    throw IoError(fmt::format("KSP1: expected {} payload bytes for {}x{}x{}, found {}", count * 16, coils, height,
                              width, bytes.size() - kKspHeaderBytes));
  }
  std::vector<Complex> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t off = kKspHeaderBytes + i * 16;
    data[i] = Complex(get_f64(bytes, off), get_f64(bytes, off + 8));
  }
  return ComplexStack(coils, height, width, std::move(data));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

void write_ksp(const std::filesystem::path& path, const ComplexStack& stack) { write_file(path, encode_ksp(stack)); }

ComplexStack read_ksp(const std::filesystem::path& path) { return decode_ksp(read_file(path)); }

void write_image(const std::filesystem::path& path, const ComplexImage& img) {
  ComplexStack stack(1, img.height(), img.width());
  stack.set_plane(0, img);
  write_ksp(path, stack);
}

ComplexImage read_image(const std::filesystem::path& path) {
  const ComplexStack stack = read_ksp(path);
  if (stack.coils() != 1) throw IoError(fmt::format("'{}' holds {} planes, expected an image", path.string(), stack.coils()));
  return stack.plane_image(0);
}

std::string encode_mask(const CartesianMask& mask) { return mask.to_string() + '\n'; }

CartesianMask decode_mask(std::string_view text) {
  if (text.empty() || text.back() != '\n') throw IoError("mask file must be one newline-terminated line");
  text.remove_suffix(1);
  if (text.find('\n') != std::string_view::npos) throw IoError("mask file must contain exactly one line");
  try {
    return CartesianMask::from_string(text);
  } catch (const ValidationError& e) {
    throw IoError(fmt::format("invalid mask: {}", e.what()));
  }
}

void write_mask(const std::filesystem::path& path, const CartesianMask& mask) { write_file(path, encode_mask(mask)); }

CartesianMask read_mask(const std::filesystem::path& path) { return decode_mask(read_file(path)); }

std::string encode_pgm(const ComplexImage& img, double peak) {
  if (img.size() == 0) throw DimensionError("cannot write an empty PGM");
  if (!(peak > 0.0)) peak = 1.0;
  std::string out = fmt::format("P5\n{} {}\n65535\n", img.width(), img.height());
  out.reserve(out.size() + img.size() * 2);
  for (const auto& v : img.data()) {
    const double scaled = std::clamp(std::abs(v) / peak, 0.0, 1.0) * 65535.0;
    const auto sample = static_cast<std::uint16_t>(std::lround(scaled));
    out.push_back(static_cast<char>(sample >> 8));
    out.push_back(static_cast<char>(sample & 0xFFu));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const ComplexImage& img, double peak) {
  write_file(path, encode_pgm(img, peak));
}

std::string format_metric(double value) {
  if (std::isinf(value) && value > 0) return "exact";
  return fmt::format("{:.10g}", value);
}

std::string metrics_row(std::string_view solver, const MetricSet& m, std::optional<double> l_prob) {
  return fmt::format("{},{},{},{},{},{},{}", solver, format_metric(m.psnr), format_metric(m.ssim),
                     format_metric(m.nmse), format_metric(m.l_rec), l_prob ? format_metric(*l_prob) : "",
                     format_metric(m.l_total));
}

std::string trace_csv(const ReconReport& report) {
  std::string out(kTraceHeader);
  out += '\n';
  for (std::size_t t = 0; t < report.iterations.size(); ++t) {
    const auto& rec = report.iterations[t];
    out += fmt::format("{},{},{},{},{}\n", t + 1, rec.budget, format_metric(rec.mean_masked_confidence),
                       rec.psnr ? format_metric(*rec.psnr) : "", rec.mask.to_string());
  }
  return out;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out(kAblationHeader);
  out += '\n';
  for (const auto& row : rows) {
    out += fmt::format("{},{},{},{},{}\n", to_string(row.schedule), to_string(row.predictor),
                       format_metric(row.metrics.psnr), format_metric(row.metrics.ssim),
                       format_metric(row.metrics.nmse));
  }
  return out;
}

}  // namespace pdac::io
