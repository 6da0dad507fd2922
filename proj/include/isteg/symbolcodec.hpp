#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "isteg/errors.hpp"

namespace isteg {

enum class SymbolKind { Voice, Silence };

/// One element per bit, values 0 or 1. Serialized to ASCII '0'/'1' at the CLI
/// boundary (see trace_io.hpp).
using Bits = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

/// Symbol durations in seconds. The defaults are the shortest values that
/// survive the carrier's voice activity detection: 1 s voice, 2 s silence.
struct TimingParams {
    double voice_symbol_s = 1.0;
    double silence_symbol_s = 2.0;

    bool valid() const { return voice_symbol_s > 0.0 && silence_symbol_s > 0.0; }
};

/// Bit polarity. The channel works with either assignment as long as both
/// ends agree; the default maps 1 to voice.
struct BitMapping {
    SymbolKind bit_one = SymbolKind::Voice;
    SymbolKind bit_zero = SymbolKind::Silence;

    bool valid() const { return bit_one != bit_zero; }
    SymbolKind kind_for(int bit) const { return bit ? bit_one : bit_zero; }
    int bit_for(SymbolKind kind) const { return kind == bit_one ? 1 : 0; }

    static BitMapping inverted() { return {SymbolKind::Silence, SymbolKind::Voice}; }
};

struct Segment {
    SymbolKind kind;
    double duration_s;
};

/// The "audio" the infected device plays: an ordered alternation of voice and
/// silence intervals. Adjacent same-kind segments are kept merged (durations
/// summed); the merged and unmerged forms produce identical traffic.
struct SymbolSchedule {
    std::vector<Segment> segments;

    bool empty() const { return segments.empty(); }
    double total_duration() const;
};

// Frame layout, MSB-first within every byte:
//
//   +----------+--------+------------------+-------+
//   | 10101011 | length | payload (<=255B) | CRC-8 |
//   +----------+--------+------------------+-------+
//
// CRC-8 uses polynomial 0x07, init 0x00, no reflection, computed over
// length + payload. The preamble starts with a 1 so a frame always opens
// with a voice symbol under the default mapping.
inline constexpr std::uint8_t kFramePreamble = 0xAB;
inline constexpr std::size_t kMaxPayloadBytes = 255;

std::uint8_t crc8(std::span<const std::uint8_t> data);

/// Serializes a payload into frame bits. Throws PayloadTooLongError for
/// payloads over 255 bytes.
Bits frame_payload(const Bytes& payload);

enum class DeframeStatus { Ok, NoPreamble, TruncatedFrame, ChecksumMismatch };

struct DeframeResult {
    DeframeStatus status = DeframeStatus::NoPreamble;
    Bytes payload; // meaningful only when status == Ok

    bool ok() const { return status == DeframeStatus::Ok; }
};

/// Scans a bit sequence for a framed payload. Robust to garbage: every
/// preamble position is tried in order and the first valid frame wins. On
/// total failure the status describes how far the first candidate got.
DeframeResult deframe_bits(const Bits& bits);

/// One segment per bit, adjacent same-kind segments merged.
SymbolSchedule bits_to_schedule(const Bits& bits, const TimingParams& timing = {},
                                const BitMapping& mapping = {});

/// Sum of segment durations. For a schedule built from bits this equals
/// ones * voice_symbol_s + zeros * silence_symbol_s.
double schedule_duration(const SymbolSchedule& schedule);

} // namespace isteg
