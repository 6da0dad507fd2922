#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isteg/carriermodel.hpp"
#include "isteg/symbolcodec.hpp"

namespace isteg {

/// Passive decoder parameters. The decoder never touches payload bytes on
/// the wire; it only sees PDU sizes and timestamps.
///
/// The decoding scheme is a voting method with two decision windows:
///   1. classify each PDU by size into voice / silence / unknown;
///   2. slice time into bins of bin_s and let each bin vote: majority class
///      of its classified PDUs, unknowns abstain, and a voice verdict needs
///      a majority fraction of at least vote_margin (silence is the null
///      hypothesis). Bins with no classified PDU carry no evidence - the
///      carrier emits during silence too, just more sparsely - so a
///      classified bin's verdict is carried forward across them until the
///      next classified bin (segments start emitting exactly at their
///      start, which makes the leading edge the trustworthy one);
///   3. merge consecutive same-class bins into runs and fold runs shorter
///      than min_run_bins into their longer neighbor;
///   4. quantize each run by its class's decision window (voice_window_s or
///      silence_window_s) to recover the symbol count; runs shorter than
///      half a window are noise and contribute nothing.
struct DecoderParams {
    int talk_size_min = 800;
    int talk_size_max = 900;
    int silence_size_min = 100;
    int silence_size_max = 700;
    double bin_s = 0.1;
    double voice_window_s = 1.0;   // keep equal to TimingParams.voice_symbol_s
    double silence_window_s = 2.0; // keep equal to TimingParams.silence_symbol_s
    double vote_margin = 0.6;
    int min_run_bins = 3;

    void validate() const; // throws std::invalid_argument
};

enum class PduClass { Voice, Silence, Unknown };

/// Maximal stretch of bins that voted the same class.
struct RunSegment {
    SymbolKind kind;
    double start_s;
    double end_s;
    int bin_count;
    double mean_margin; // mean winning-vote fraction over the run's bins, [0,1]

    double duration() const { return end_s - start_s; }
};

enum class DecodeStatus { Ok, NoSignal, NoPreamble, TruncatedFrame, ChecksumMismatch };

struct DecodeResult {
    Bits bits;
    std::vector<RunSegment> runs;
    std::optional<Bytes> payload; // present iff status == Ok
    DecodeStatus status = DecodeStatus::NoSignal;
    double confidence = 0.0; // mean of run mean_margins

    bool ok() const { return status == DecodeStatus::Ok; }
};

/// Size-range classification; boundaries inclusive, total over positive sizes.
PduClass classify_pdu(int size, const DecoderParams& params);

/// Bins [0, t_last], votes, merges. Throws EmptyTraceError on an empty trace.
std::vector<RunSegment> segment_runs(const PduTrace& trace, const DecoderParams& params);

/// A run of duration d emits round(d / window) copies of its bit; a run that
/// rounds to zero symbols is dropped as noise.
Bits runs_to_bits(const std::vector<RunSegment>& runs, const DecoderParams& params,
                  const BitMapping& mapping = {});

/// classify -> segment -> quantize -> deframe. All failures are reported in
/// the status; nothing is thrown past this boundary.
DecodeResult decode_trace(const PduTrace& trace, const DecoderParams& params = {},
                          const BitMapping& mapping = {});

} // namespace isteg
