// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/event_io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>

#include "evsnn/errors.hpp"

namespace evsnn {

namespace {

constexpr char kCsvMagic[] = "evtcsv";
constexpr char kBinMagic[] = "EVTB";
constexpr std::size_t kBinHeaderSize = 9;   // magic(4) + version(1) + w(2) + h(2)
constexpr std::size_t kBinRecordSize = 13;  // x(2) + y(2) + t(8) + p(1)

std::string_view as_view(std::span<const std::byte> bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

// Integer field parser; `what` and `line` feed the diagnostic.
template <typename T>
T parse_int(std::string_view text, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" +
                     std::string(text) + "'");
  }
  return value;
}

// Splits on ',' into exactly n fields.
std::vector<std::string_view> split_fields(std::string_view line_text, std::size_t n,
                                           std::size_t line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line_text.find(',', pos);
    if (comma == std::string_view::npos) {
      fields.push_back(line_text.substr(pos));
      break;
    }
    fields.push_back(line_text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  if (fields.size() != n) {
    throw ParseError("line " + std::to_string(line) + ": expected " + std::to_string(n) +
                     " fields, got " + std::to_string(fields.size()));
  }
  return fields;
}

void check_event(const Event& e, const SensorGeometry& geom, std::uint64_t prev_t,
                 bool have_prev, std::size_t where, const char* unit) {
  if (e.x >= geom.width || e.y >= geom.height) {
    throw ValidationError(std::string(unit) + " " + std::to_string(where) +
                          ": coordinate (" + std::to_string(e.x) + "," +
                          std::to_string(e.y) + ") outside " + std::to_string(geom.width) +
                          "x" + std::to_string(geom.height));
  }
  if (have_prev && e.t < prev_t) {
    throw ValidationError(std::string(unit) + " " + std::to_string(where) +
                          ": timestamp " + std::to_string(e.t) + " decreases below " +
                          std::to_string(prev_t));
  }
}

EventStream parse_csv(std::string_view text) {
  EventStream stream;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t prev_t = 0;
  bool have_prev = false;

  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos) ? text.substr(pos)
                                                            : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    ++line_no;
    if (line.empty() && pos >= text.size()) break;  // trailing newline

    if (!have_header) {
      auto fields = split_fields(line, 4, line_no);
      if (fields[0] != kCsvMagic) {
        throw ParseError("line 1: not an EVT-CSV header");
      }
      if (parse_int<int>(fields[1], line_no, "version") != 1) {
        throw ParseError("line 1: unsupported EVT-CSV version");
      }
      stream.geometry.width = parse_int<int>(fields[2], line_no, "width");
      stream.geometry.height = parse_int<int>(fields[3], line_no, "height");
      if (stream.geometry.width <= 0 || stream.geometry.height <= 0) {
        throw ValidationError("line 1: non-positive geometry");
      }
      have_header = true;
      continue;
    }

    auto fields = split_fields(line, 4, line_no);
    Event e;
    e.x = parse_int<std::uint16_t>(fields[0], line_no, "x");
    e.y = parse_int<std::uint16_t>(fields[1], line_no, "y");
    e.t = parse_int<std::uint64_t>(fields[2], line_no, "t_us");
    int p = parse_int<int>(fields[3], line_no, "polarity");
    if (p != 0 && p != 1) {
      throw ParseError("line " + std::to_string(line_no) + ": polarity must be 0 or 1");
    }
    e.p = static_cast<Polarity>(p);
    check_event(e, stream.geometry, prev_t, have_prev, line_no, "line");
    prev_t = e.t;
    have_prev = true;
    stream.events.push_back(e);
  }
  if (!have_header) throw ParseError("empty input: missing EVT-CSV header");
  return stream;
}

std::uint16_t load_u16le(const std::byte* p) {
  return static_cast<std::uint16_t>(std::to_integer<unsigned>(p[0]) |
                                    (std::to_integer<unsigned>(p[1]) << 8));
}

std::uint64_t load_u64le(const std::byte* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | std::to_integer<std::uint64_t>(p[i]);
  return v;
}

void store_u16le(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xff));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void store_u64le(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
}

EventStream parse_bin(std::span<const std::byte> source) {
  if (source.size() < kBinHeaderSize) {
    throw ParseError("offset 0: truncated EVT-BIN header");
  }
  if (std::memcmp(source.data(), kBinMagic, 4) != 0) {
    throw ParseError("offset 0: bad EVT-BIN magic");
  }
  if (std::to_integer<unsigned>(source[4]) != 0x01) {
    throw ParseError("offset 4: unsupported EVT-BIN version");
  }
  EventStream stream;
  stream.geometry.width = load_u16le(source.data() + 5);
  stream.geometry.height = load_u16le(source.data() + 7);
  if (stream.geometry.width <= 0 || stream.geometry.height <= 0) {
    throw ValidationError("offset 5: non-positive geometry");
  }

  std::size_t body = source.size() - kBinHeaderSize;
  if (body % kBinRecordSize != 0) {
    throw ParseError("offset " + std::to_string(source.size()) +
                     ": truncated EVT-BIN record");
  }
  std::size_t count = body / kBinRecordSize;
  stream.events.reserve(count);
  std::uint64_t prev_t = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::byte* rec = source.data() + kBinHeaderSize + i * kBinRecordSize;
    Event e;
    e.x = load_u16le(rec);
    e.y = load_u16le(rec + 2);
    e.t = load_u64le(rec + 4);
    unsigned p = std::to_integer<unsigned>(rec[12]);
    if (p > 1) {
      throw ParseError("record " + std::to_string(i) + ": polarity must be 0 or 1");
    }
    e.p = static_cast<Polarity>(p);
    check_event(e, stream.geometry, prev_t, i > 0, i, "record");
    prev_t = e.t;
    stream.events.push_back(e);
  }
  return stream;
}

void require_serializable(const EventStream& stream) {
  std::uint64_t prev_t = 0;
  bool have_prev = false;
  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    check_event(stream.events[i], stream.geometry, prev_t, have_prev, i, "event");
    prev_t = stream.events[i].t;
    have_prev = true;
  }
}

}  // namespace

EventStream parse_event_stream(std::span<const std::byte> source, EventFormat fmt) {
  return fmt == EventFormat::kCsv ? parse_csv(as_view(source)) : parse_bin(source);
}

EventStream parse_event_stream(std::string_view source, EventFormat fmt) {
  return parse_event_stream(
      std::span<const std::byte>(reinterpret_cast<const std::byte*>(source.data()),
                                 source.size()),
      fmt);
}

std::vector<std::byte> serialize_event_stream(const EventStream& stream, EventFormat fmt) {
  require_serializable(stream);
  std::vector<std::byte> out;
  if (fmt == EventFormat::kCsv) {
    std::string text = std::string(kCsvMagic) + ",1," + std::to_string(stream.geometry.width) +
                       "," + std::to_string(stream.geometry.height) + "\n";
    for (const Event& e : stream.events) {
      text += std::to_string(e.x) + "," + std::to_string(e.y) + "," + std::to_string(e.t) +
              "," + std::to_string(static_cast<int>(e.p)) + "\n";
    }
    out.resize(text.size());
    std::memcpy(out.data(), text.data(), text.size());
  } else {
    out.reserve(kBinHeaderSize + stream.events.size() * kBinRecordSize);
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(kBinMagic[i]));
    out.push_back(static_cast<std::byte>(0x01));
    store_u16le(out, static_cast<std::uint16_t>(stream.geometry.width));
    store_u16le(out, static_cast<std::uint16_t>(stream.geometry.height));
    for (const Event& e : stream.events) {
      store_u16le(out, e.x);
      store_u16le(out, e.y);
      store_u64le(out, e.t);
      out.push_back(static_cast<std::byte>(e.p));
    }
  }
  return out;
}

EventFormat detect_event_format(std::span<const std::byte> head) {
  if (head.size() >= 4 && std::memcmp(head.data(), kBinMagic, 4) == 0) {
    return EventFormat::kBin;
  }
  if (head.size() >= 6 && std::memcmp(head.data(), kCsvMagic, 6) == 0) {
    return EventFormat::kCsv;
  }
  throw ParseError("unrecognized event file magic");
}

EventStream read_event_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open event file '" + path + "'");
  std::vector<char> data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  auto bytes = std::span<const std::byte>(reinterpret_cast<const std::byte*>(data.data()),
                                          data.size());
  return parse_event_stream(bytes, detect_event_format(bytes));
}

void write_event_file(const std::string& path, const EventStream& stream, EventFormat fmt) {
  auto bytes = serialize_event_stream(stream, fmt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace evsnn
