// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evsnn/frame.hpp"

namespace evsnn {

/// A frame corpus on disk is a directory holding
///   index.txt   header `evfc,1,<width>,<height>`, optional `# config,<hash>`
///               comment, then one line per frame `frame_id,window_start,window_len`
///   frames.bin  magic `EVFB`, version 0x01, u16 LE width, u16 height, then per
///               frame (id order): u32 frame_id, u32 cell_count, cell_count x
///               (u32 cell_index, f32 normalized_t), all little-endian
///   labels.txt  optional; one line per frame `<frame_id>,<0|1>`
/// Sparse records keep the store small (frames are typically < 1% populated).

struct FrameCorpus {
  SensorGeometry geometry{};
  std::vector<TimestampFrame> frames;   ///< frame_id == position
  std::vector<int> labels;              ///< empty when labels.txt absent
  std::string config_hash;              ///< empty when the index carries none

  bool labeled() const { return !labels.empty(); }
};

void write_corpus(const std::string& dir, const FrameCorpus& corpus);
FrameCorpus read_corpus(const std::string& dir);

/// Label file round trip, usable standalone.
std::string serialize_labels(const std::vector<int>& labels);
std::vector<int> parse_labels(const std::string& text, std::size_t frame_count);

}  // namespace evsnn

