#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isteg/symbolcodec.hpp"

namespace isteg {

/// Parameters of the one-way client-to-server stream. PDU sizes partition
/// into two disjoint classes: talk periods produce 800-900 byte units,
/// inactive periods 100-700 byte units. Sizes in the 701-799 gap are never
/// produced by regular emission.
struct ChannelProfile {
    int talk_size_min = 800;
    int talk_size_max = 900;
    int silence_size_min = 100;
    int silence_size_max = 700;
    double talk_pdu_interval_s = 0.1;
    double silence_pdu_interval_s = 0.25;
    double jitter_std_s = 0.0;     // gaussian timestamp noise
    double loss_prob = 0.0;        // independent per-PDU drop probability
    double spurious_pdu_rate_hz = 0.0;
    double vad_hangover_s = 0.0;   // voice emission continues this long past a segment

    void validate() const; // throws std::invalid_argument
};

struct PduRecord {
    double t_s; // seconds from trace start, >= 0
    int size;   // bytes, > 0
};

/// Timestamp-sorted PDU size sequence: the only thing a passive observer of
/// the encrypted stream gets to see.
struct PduTrace {
    std::vector<PduRecord> records;

    bool empty() const { return records.empty(); }
    std::size_t size() const { return records.size(); }
    double end_time() const { return records.empty() ? 0.0 : records.back().t_s; }
};

/// Negative-class generator for the detector: session shaped like ordinary
/// dictation, talk and pause durations lognormal around the given means.
struct NaturalUsageParams {
    double mean_talk_s = 2.5;
    double mean_pause_s = 1.2;
    double duration_sigma = 0.5;   // sigma of the underlying normal
    double session_duration_s = 60.0;

    void validate() const;
};

/// Emits the PDU trace a schedule produces when spoken to the device.
/// Per segment, PDUs are spaced at the class interval starting at the
/// segment start (voice segments keep emitting for vad_hangover_s past
/// their end), sized uniformly within the class range. Jitter, loss and
/// spurious PDUs are applied afterwards, in that order. Pure function of
/// (schedule, profile, seed).
PduTrace synthesize_trace(const SymbolSchedule& schedule, const ChannelProfile& profile,
                          std::uint64_t seed);

/// Alternating lognormal talk/pause segments until the session is filled,
/// then the same PDU emission as synthesize_trace.
PduTrace generate_natural_trace(const NaturalUsageParams& params, const ChannelProfile& profile,
                                std::uint64_t seed);

enum class RecognitionMode { Covert, Natural };

/// What the server-side recognizer would hand back. Covert mode plays one
/// canned sample per voice segment, so the transcript is the same token over
/// and over. Natural mode draws from the lexicon's empirical distribution at
/// roughly one token per 0.4 s of talk.
std::vector<std::string> simulate_recognition(const SymbolSchedule& schedule, RecognitionMode mode,
                                              const std::vector<std::string>& lexicon,
                                              std::uint64_t seed);

inline constexpr const char* kCovertToken = "call";
inline constexpr double kTokenIntervalS = 0.4;

} // namespace isteg
