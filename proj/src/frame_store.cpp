// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/frame_store.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include "evsnn/errors.hpp"

namespace evsnn {

namespace {

constexpr char kIndexMagic[] = "evfc";
constexpr char kBinMagic[] = "EVFB";
constexpr std::uint8_t kBinVersion = 0x01;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("short write to " + path.string());
}

template <typename T>
T parse_int_field(std::string_view field, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_fields(std::string_view line, std::size_t expected,
                                           const char* what) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (fields.size() != expected) {
    throw ParseError(std::string("expected ") + std::to_string(expected) + " fields in " +
                     what + " line, got " + std::to_string(fields.size()));
  }
  return fields;
}

void append_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void append_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f32le(std::string& out, float v) {
  append_u32le(out, std::bit_cast<std::uint32_t>(v));
}

std::uint16_t load_u16le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t load_u32le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

struct IndexEntry {
  std::uint32_t frame_id;
  std::uint64_t window_start;
  std::uint64_t window_len;
};

}  // namespace

std::string serialize_labels(const std::vector<int>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += labels[i] ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<int> parse_labels(const std::string& text, std::size_t frame_count) {
  std::vector<int> labels(frame_count, -1);
  std::size_t seen = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_fields(line, 2, "label");
    auto id = parse_int_field<std::uint32_t>(fields[0], "frame id");
    auto value = parse_int_field<int>(fields[1], "label");
    if (id >= frame_count) throw ValidationError("label frame id out of range");
    if (value != 0 && value != 1) throw ValidationError("label must be 0 or 1");
    if (labels[id] != -1) throw ValidationError("duplicate label for frame " + std::to_string(id));
    labels[id] = value;
    ++seen;
  }
  if (seen != frame_count) {
    throw ValidationError("label file covers " + std::to_string(seen) + " of " +
                          std::to_string(frame_count) + " frames");
  }
  return labels;
}

void write_corpus(const std::string& dir, const FrameCorpus& corpus) {
  if (corpus.geometry.width <= 0 || corpus.geometry.height <= 0) {
    throw ValidationError("corpus geometry must be positive");
  }
  if (!corpus.labels.empty() && corpus.labels.size() != corpus.frames.size()) {
    throw ValidationError("corpus label count must match frame count");
  }
  std::filesystem::path root(dir);
  std::filesystem::create_directories(root);

  std::string index;
  index += kIndexMagic;
  index += ",1,";
  index += std::to_string(corpus.geometry.width);
  index += ',';
  index += std::to_string(corpus.geometry.height);
  index += '\n';
  if (!corpus.config_hash.empty()) {
    index += "# config,";
    index += corpus.config_hash;
    index += '\n';
  }

  std::string bin;
  bin += kBinMagic;
  bin.push_back(static_cast<char>(kBinVersion));
  append_u16le(bin, static_cast<std::uint16_t>(corpus.geometry.width));
  append_u16le(bin, static_cast<std::uint16_t>(corpus.geometry.height));

  for (std::size_t i = 0; i < corpus.frames.size(); ++i) {
    const TimestampFrame& frame = corpus.frames[i];
    if (!(frame.geometry() == corpus.geometry)) {
      throw ValidationError("frame " + std::to_string(i) + " geometry differs from corpus");
    }
    index += std::to_string(i);
    index += ',';
    index += std::to_string(frame.window_start());
    index += ',';
    index += std::to_string(frame.window_length());
    index += '\n';

    auto cells = frame.cells();
    std::uint32_t count = 0;
    for (float v : cells) {
      if (v >= 0.0f) ++count;
    }
    append_u32le(bin, static_cast<std::uint32_t>(i));
    append_u32le(bin, count);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c] < 0.0f) continue;
      append_u32le(bin, static_cast<std::uint32_t>(c));
      append_f32le(bin, cells[c]);
    }
  }

  write_file(root / "index.txt", index);
  write_file(root / "frames.bin", bin);
  if (!corpus.labels.empty()) {
    write_file(root / "labels.txt", serialize_labels(corpus.labels));
  }
}

FrameCorpus read_corpus(const std::string& dir) {
  std::filesystem::path root(dir);
  std::string index = read_text_file(root / "index.txt");

  FrameCorpus corpus;
  std::vector<IndexEntry> entries;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos < index.size()) {
    std::size_t eol = index.find('\n', pos);
    if (eol == std::string::npos) eol = index.size();
    std::string_view line(index.data() + pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kConfigTag = "# config,";
      if (line.starts_with(kConfigTag)) {
        corpus.config_hash = std::string(line.substr(kConfigTag.size()));
      }
      continue;
    }
    if (!header_seen) {
      auto fields = split_fields(line, 4, "index header");
      if (fields[0] != kIndexMagic || fields[1] != "1") {
        throw ParseError("unrecognized corpus index header");
      }
      corpus.geometry.width = parse_int_field<int>(fields[2], "width");
      corpus.geometry.height = parse_int_field<int>(fields[3], "height");
      if (corpus.geometry.width <= 0 || corpus.geometry.height <= 0) {
        throw ValidationError("corpus geometry must be positive");
      }
      header_seen = true;
      continue;
    }
    auto fields = split_fields(line, 3, "index");
    IndexEntry e;
    e.frame_id = parse_int_field<std::uint32_t>(fields[0], "frame id");
    e.window_start = parse_int_field<std::uint64_t>(fields[1], "window start");
    e.window_len = parse_int_field<std::uint64_t>(fields[2], "window length");
    if (e.frame_id != entries.size()) {
      throw ValidationError("corpus index frame ids must be sequential from 0");
    }
    entries.push_back(e);
  }
  if (!header_seen) throw ParseError("corpus index is missing its header");

  std::string bin = read_text_file(root / "frames.bin");
  const auto* p = reinterpret_cast<const unsigned char*>(bin.data());
  std::size_t size = bin.size();
  if (size < 9 || std::memcmp(p, kBinMagic, 4) != 0 || p[4] != kBinVersion) {
    throw ParseError("unrecognized frame store header");
  }
  int bin_w = load_u16le(p + 5);
  int bin_h = load_u16le(p + 7);
  if (bin_w != corpus.geometry.width || bin_h != corpus.geometry.height) {
    throw ValidationError("frame store geometry differs from index");
  }

  std::size_t off = 9;
  corpus.frames.reserve(entries.size());
  for (const IndexEntry& e : entries) {
    if (off + 8 > size) throw ParseError("frame store truncated at frame header");
    std::uint32_t id = load_u32le(p + off);
    std::uint32_t count = load_u32le(p + off + 4);
    off += 8;
    if (id != e.frame_id) throw ValidationError("frame store id order differs from index");
    if (off + static_cast<std::size_t>(count) * 8 > size) {
      throw ParseError("frame store truncated in frame " + std::to_string(id));
    }
    TimestampFrame frame(corpus.geometry, e.window_start, e.window_len);
    std::size_t pixel_count = corpus.geometry.pixel_count();
    for (std::uint32_t c = 0; c < count; ++c) {
      std::uint32_t cell = load_u32le(p + off);
      float value = std::bit_cast<float>(load_u32le(p + off + 4));
      off += 8;
      if (cell >= pixel_count) throw ValidationError("frame store cell index out of range");
      if (!(value >= 0.0f) || !(value < 1.0f)) {
        throw ValidationError("frame store cell value outside [0, 1)");
      }
      frame.set(static_cast<int>(cell % corpus.geometry.width),
                static_cast<int>(cell / corpus.geometry.width), value);
    }
    corpus.frames.push_back(std::move(frame));
  }
  if (off != size) throw ParseError("trailing bytes after last frame record");

  if (std::filesystem::exists(root / "labels.txt")) {
    corpus.labels =
        parse_labels(read_text_file(root / "labels.txt"), corpus.frames.size());
  }
  return corpus;
}

}  // namespace evsnn
