#include "isteg/symbolcodec.hpp"

#include <optional>
#include <string>

namespace isteg {

double SymbolSchedule::total_duration() const {
    double total = 0.0;
    for (const auto& seg : segments) total += seg.duration_s;
    return total;
}

std::uint8_t crc8(std::span<const std::uint8_t> data) {
    std::uint8_t crc = 0x00;
    for (std::uint8_t byte : data) {
        crc ^= byte;
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 0x80) ? static_cast<std::uint8_t>((crc << 1) ^ 0x07)
                               : static_cast<std::uint8_t>(crc << 1);
        }
    }
    return crc;
}

namespace {

void append_byte_msb_first(Bits& bits, std::uint8_t byte) {
    for (int i = 7; i >= 0; --i) bits.push_back((byte >> i) & 1u);
}

std::uint8_t read_byte_msb_first(const Bits& bits, std::size_t pos) {
    std::uint8_t byte = 0;
    for (std::size_t i = 0; i < 8; ++i) byte = static_cast<std::uint8_t>((byte << 1) | (bits[pos + i] & 1u));
    return byte;
}

} // namespace

Bits frame_payload(const Bytes& payload) {
    if (payload.size() > kMaxPayloadBytes) {
        throw PayloadTooLongError("payload of " + std::to_string(payload.size()) +
                                  " bytes exceeds the 255-byte frame limit");
    }
    Bytes covered;
    covered.reserve(payload.size() + 1);
    covered.push_back(static_cast<std::uint8_t>(payload.size()));
    covered.insert(covered.end(), payload.begin(), payload.end());

    Bits bits;
    bits.reserve(8 * (covered.size() + 2));
    append_byte_msb_first(bits, kFramePreamble);
    for (std::uint8_t byte : covered) append_byte_msb_first(bits, byte);
    append_byte_msb_first(bits, crc8(covered));
    return bits;
}

DeframeResult deframe_bits(const Bits& bits) {
    const std::size_t n = bits.size();
    std::optional<DeframeStatus> first_failure;
    auto note = [&](DeframeStatus status) {
        if (!first_failure) first_failure = status;
    };

    for (std::size_t at = 0; at + 8 <= n; ++at) {
        if (read_byte_msb_first(bits, at) != kFramePreamble) continue;

        std::size_t pos = at + 8;
        if (pos + 8 > n) {
            note(DeframeStatus::TruncatedFrame);
            continue;
        }
        const std::uint8_t length = read_byte_msb_first(bits, pos);
        pos += 8;
        if (pos + 8 * static_cast<std::size_t>(length) + 8 > n) {
            note(DeframeStatus::TruncatedFrame);
            continue;
        }

        Bytes covered;
        covered.reserve(length + 1u);
        covered.push_back(length);
        for (std::size_t i = 0; i < length; ++i, pos += 8) covered.push_back(read_byte_msb_first(bits, pos));
        const std::uint8_t received_crc = read_byte_msb_first(bits, pos);
        if (crc8(covered) != received_crc) {
            note(DeframeStatus::ChecksumMismatch);
            continue;
        }
        return {DeframeStatus::Ok, Bytes(covered.begin() + 1, covered.end())};
    }
    return {first_failure.value_or(DeframeStatus::NoPreamble), {}};
}

SymbolSchedule bits_to_schedule(const Bits& bits, const TimingParams& timing,
                                const BitMapping& mapping) {
    if (!timing.valid()) throw std::invalid_argument("symbol durations must be positive");
    if (!mapping.valid()) throw std::invalid_argument("bit mapping must assign distinct kinds");

    SymbolSchedule schedule;
    for (std::uint8_t bit : bits) {
        const SymbolKind kind = mapping.kind_for(bit);
        const double dur = (kind == SymbolKind::Voice) ? timing.voice_symbol_s : timing.silence_symbol_s;
        if (!schedule.segments.empty() && schedule.segments.back().kind == kind) {
            schedule.segments.back().duration_s += dur;
        } else {
            schedule.segments.push_back({kind, dur});
        }
    }
    return schedule;
}

double schedule_duration(const SymbolSchedule& schedule) {
    return schedule.total_duration();
}

} // namespace isteg
