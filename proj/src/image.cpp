// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#include "evsnn/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "evsnn/errors.hpp"

namespace evsnn {

namespace {

// Reads the next header token, skipping whitespace and # comments.
std::string next_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      break;
    }
  }
  while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
  if (tok.empty()) throw ParseError("'" + path + "': truncated PNM header");
  return tok;
}

int header_int(std::istream& in, const std::string& path, const char* what) {
  std::string tok = next_token(in, path);
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("'" + path + "': bad PNM " + what + " '" + tok + "'");
  }
}

// One sample, ASCII or binary depending on format; maxval > 255 uses
// 2-byte big-endian samples in the binary formats.
int read_sample(std::istream& in, bool binary, int maxval, const std::string& path) {
  if (!binary) {
    int v;
    if (!(in >> v)) throw ParseError("'" + path + "': truncated PNM samples");
    return v;
  }
  int hi = in.get();
  if (hi == EOF) throw ParseError("'" + path + "': truncated PNM samples");
  if (maxval < 256) return hi;
  int lo = in.get();
  if (lo == EOF) throw ParseError("'" + path + "': truncated PNM samples");
  return (hi << 8) | lo;
}

}  // namespace

IntensityFrame read_intensity_frame(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image '" + path + "'");

  std::string magic = next_token(in, path);
  bool color;
  bool binary;
  if (magic == "P2") {
    color = false, binary = false;
  } else if (magic == "P3") {
    color = true, binary = false;
  } else if (magic == "P5") {
    color = false, binary = true;
  } else if (magic == "P6") {
    color = true, binary = true;
  } else {
    throw ParseError("'" + path + "': unsupported PNM magic '" + magic + "'");
  }

  IntensityFrame frame;
  frame.width = header_int(in, path, "width");
  frame.height = header_int(in, path, "height");
  int maxval = header_int(in, path, "maxval");
  if (frame.width <= 0 || frame.height <= 0) {
    throw ValidationError("'" + path + "': non-positive PNM dimensions");
  }
  if (maxval <= 0 || maxval > 65535) {
    throw ParseError("'" + path + "': PNM maxval out of range");
  }
  // The single whitespace byte after maxval was consumed by next_token for
  // ASCII; for binary formats header_int's stream position already sits
  // right past it (operator>> style scan stops at the delimiter).
  float inv = 1.0f / static_cast<float>(maxval);
  frame.values.resize(static_cast<std::size_t>(frame.width) * frame.height);
  for (std::size_t i = 0; i < frame.values.size(); ++i) {
    float v;
    if (color) {
      int r = read_sample(in, binary, maxval, path);
      int g = read_sample(in, binary, maxval, path);
      int b = read_sample(in, binary, maxval, path);
      v = (0.299f * r + 0.587f * g + 0.114f * b) * inv;
    } else {
      v = read_sample(in, binary, maxval, path) * inv;
    }
    frame.values[i] = std::clamp(v, 0.0f, 1.0f);
  }
  return frame;
}

void write_intensity_pgm(const std::string& path, const IntensityFrame& frame) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
  for (float v : frame.values) {
    out.put(static_cast<char>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f)));
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

IntensityFrame downsample(const IntensityFrame& frame, SensorGeometry target) {
  if (target.width > frame.width || target.height > frame.height) {
    throw ConfigError("downsample target exceeds source dimensions");
  }
  if (target.width == frame.width && target.height == frame.height) return frame;

  IntensityFrame out;
  out.width = target.width;
  out.height = target.height;
  out.t = frame.t;
  out.values.resize(static_cast<std::size_t>(target.width) * target.height);

  // Box edges at floor(i*src/target) partition the source exactly.
  auto edge = [](int i, int src, int dst) {
    return static_cast<int>((static_cast<std::int64_t>(i) * src) / dst);
  };
  for (int oy = 0; oy < target.height; ++oy) {
    int y0 = edge(oy, frame.height, target.height);
    int y1 = edge(oy + 1, frame.height, target.height);
    for (int ox = 0; ox < target.width; ++ox) {
      int x0 = edge(ox, frame.width, target.width);
      int x1 = edge(ox + 1, frame.width, target.width);
      double sum = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) sum += frame.at(x, y);
      }
      out.at(ox, oy) = static_cast<float>(sum / ((y1 - y0) * (x1 - x0)));
    }
  }
  return out;
}

}  // namespace evsnn
