// Copyright 2026 The evsnn authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evsnn/event.hpp"

namespace evsnn {

/// On-disk event stream encodings.
///
/// EVT-CSV: header line `evtcsv,1,<width>,<height>`, then one record per
/// line `x,y,t_us,p` with p in {0,1}. LF line endings, ASCII decimal.
///
/// EVT-BIN: magic `EVTB`, version byte 0x01, u16 LE width, u16 LE height,
/// then packed 13-byte records: u16 x, u16 y, u64 t_us, u8 p. Bit-exact.
enum class EventFormat { kCsv, kBin };

/// Parses a serialized stream. Events come back in timestamp order with one
/// entry per source record.
///
/// Throws ParseError on malformed records (message carries line/offset),
/// ValidationError on out-of-range coordinates or decreasing timestamps.
EventStream parse_event_stream(std::span<const std::byte> source, EventFormat fmt);
EventStream parse_event_stream(std::string_view source, EventFormat fmt);

/// Inverse of parse_event_stream; round-trips bit-exactly.
/// Throws ValidationError if events are unordered or outside the geometry.
std::vector<std::byte> serialize_event_stream(const EventStream& stream, EventFormat fmt);

/// Sniffs the format from the leading bytes (`EVTB` vs `evtcsv`).
/// Throws ParseError when neither magic matches.
EventFormat detect_event_format(std::span<const std::byte> head);

/// File convenience wrappers. read_event_file sniffs the format.
EventStream read_event_file(const std::string& path);
void write_event_file(const std::string& path, const EventStream& stream, EventFormat fmt);

}  // namespace evsnn
