#include "isteg/listener.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace isteg {

void DecoderParams::validate() const {
    if (talk_size_min > talk_size_max) throw std::invalid_argument("talk size range inverted");
    if (silence_size_min > silence_size_max) throw std::invalid_argument("silence size range inverted");
    if (silence_size_min <= 0) throw std::invalid_argument("PDU sizes must be positive");
    if (silence_size_max >= talk_size_min)
        throw std::invalid_argument("size ranges must be disjoint with silence below talk");
    if (bin_s <= 0.0) throw std::invalid_argument("bin_s must be positive");
    if (voice_window_s <= 0.0 || silence_window_s <= 0.0)
        throw std::invalid_argument("decision windows must be positive");
    if (vote_margin < 0.5 || vote_margin > 1.0) throw std::invalid_argument("vote_margin outside [0.5,1]");
    if (min_run_bins < 1) throw std::invalid_argument("min_run_bins must be >= 1");
}

PduClass classify_pdu(int size, const DecoderParams& params) {
    if (size >= params.talk_size_min && size <= params.talk_size_max) return PduClass::Voice;
    if (size >= params.silence_size_min && size <= params.silence_size_max) return PduClass::Silence;
    return PduClass::Unknown;
}

namespace {

struct BinVote {
    SymbolKind kind = SymbolKind::Silence;
    double margin = 1.0; // winning votes / total votes
    bool evidence = false;
};

struct Run {
    SymbolKind kind;
    std::size_t first_bin;
    std::size_t last_bin; // inclusive

    std::size_t bin_count() const { return last_bin - first_bin + 1; }
};

std::vector<Run> coalesce(const std::vector<Run>& runs) {
    std::vector<Run> out;
    for (const auto& run : runs) {
        if (!out.empty() && out.back().kind == run.kind) {
            out.back().last_bin = run.last_bin;
        } else {
            out.push_back(run);
        }
    }
    return out;
}

} // namespace

std::vector<RunSegment> segment_runs(const PduTrace& trace, const DecoderParams& params) {
    params.validate();
    if (trace.empty()) throw EmptyTraceError("cannot segment an empty trace");

    // The 1e-9 guard keeps PDUs that land exactly on a bin edge (0.7 / 0.1)
    // in the right bin despite floating point representation.
    const double t_last = trace.end_time();
    const auto bin_of = [&](double t) {
        return static_cast<std::size_t>(std::max(0.0, std::floor(t / params.bin_s + 1e-9)));
    };
    const std::size_t bin_total = bin_of(t_last) + 1;

    struct Tally {
        int voice = 0;
        int silence = 0;
    };
    std::vector<Tally> tallies(bin_total);
    for (const auto& rec : trace.records) {
        const std::size_t idx = std::min(bin_of(rec.t_s), bin_total - 1);
        switch (classify_pdu(rec.size, params)) {
            case PduClass::Voice: ++tallies[idx].voice; break;
            case PduClass::Silence: ++tallies[idx].silence; break;
            case PduClass::Unknown: break; // abstains
        }
    }

    // Per-bin vote. Silence is the null hypothesis: voice needs a strict
    // majority reaching vote_margin.
    std::vector<BinVote> votes(bin_total);
    for (std::size_t i = 0; i < bin_total; ++i) {
        const int total = tallies[i].voice + tallies[i].silence;
        if (total == 0) continue;
        const int winning = std::max(tallies[i].voice, tallies[i].silence);
        const double fraction = static_cast<double>(winning) / total;
        const bool voice = tallies[i].voice > tallies[i].silence && fraction >= params.vote_margin;
        votes[i] = {voice ? SymbolKind::Voice : SymbolKind::Silence, fraction, true};
    }

    // Empty bins carry no evidence either way: the carrier emits PDUs during
    // silence too, just more sparsely, and jitter or loss can empty a bin
    // inside a voice span. Every segment starts emitting exactly at its
    // start, so a classified bin's verdict is carried forward until the next
    // classified bin; bins before the first evidence borrow it backward.
    // Traces whose PDUs all classify Unknown fall back to all-silence.
    std::ptrdiff_t carried = -1;
    for (std::size_t i = 0; i < bin_total; ++i) {
        if (votes[i].evidence) {
            carried = static_cast<std::ptrdiff_t>(i);
        } else if (carried >= 0) {
            votes[i].kind = votes[static_cast<std::size_t>(carried)].kind;
            votes[i].margin = votes[static_cast<std::size_t>(carried)].margin;
        }
    }
    std::ptrdiff_t first_evidence = -1;
    for (std::size_t i = 0; i < bin_total; ++i) {
        if (votes[i].evidence) {
            first_evidence = static_cast<std::ptrdiff_t>(i);
            break;
        }
    }
    for (std::ptrdiff_t i = 0; i < first_evidence; ++i) {
        votes[static_cast<std::size_t>(i)].kind = votes[static_cast<std::size_t>(first_evidence)].kind;
        votes[static_cast<std::size_t>(i)].margin =
            votes[static_cast<std::size_t>(first_evidence)].margin;
    }

    std::vector<Run> runs;
    for (std::size_t i = 0; i < bin_total; ++i) {
        if (!runs.empty() && runs.back().kind == votes[i].kind) {
            runs.back().last_bin = i;
        } else {
            runs.push_back({votes[i].kind, i, i});
        }
    }

    // De-glitching: fold sub-threshold runs into the longer neighbor,
    // shortest run first. Deterministic tie-breaks: earliest run, left
    // neighbor.
    const auto threshold = static_cast<std::size_t>(params.min_run_bins);
    while (runs.size() > 1) {
        std::size_t shortest = runs.size();
        for (std::size_t j = 0; j < runs.size(); ++j) {
            if (runs[j].bin_count() < threshold &&
                (shortest == runs.size() || runs[j].bin_count() < runs[shortest].bin_count())) {
                shortest = j;
            }
        }
        if (shortest == runs.size()) break;

        std::size_t target;
        if (shortest == 0) {
            target = 1;
        } else if (shortest == runs.size() - 1) {
            target = shortest - 1;
        } else {
            const auto left = runs[shortest - 1].bin_count();
            const auto right = runs[shortest + 1].bin_count();
            target = (right > left) ? shortest + 1 : shortest - 1;
        }
        runs[shortest].kind = runs[target].kind;
        runs = coalesce(runs);
    }

    std::vector<RunSegment> segments;
    segments.reserve(runs.size());
    for (const auto& run : runs) {
        double margin_sum = 0.0;
        for (std::size_t i = run.first_bin; i <= run.last_bin; ++i) margin_sum += votes[i].margin;
        segments.push_back({run.kind, static_cast<double>(run.first_bin) * params.bin_s,
                            static_cast<double>(run.last_bin + 1) * params.bin_s,
                            static_cast<int>(run.bin_count()),
                            margin_sum / static_cast<double>(run.bin_count())});
    }
    return segments;
}

Bits runs_to_bits(const std::vector<RunSegment>& runs, const DecoderParams& params,
                  const BitMapping& mapping) {
    Bits bits;
    for (const auto& run : runs) {
        const double window =
            (run.kind == SymbolKind::Voice) ? params.voice_window_s : params.silence_window_s;
        const long long symbols = std::llround(run.duration() / window);
        if (symbols <= 0) continue; // sub-half-window runs are noise, not symbols
        const auto bit = static_cast<std::uint8_t>(mapping.bit_for(run.kind));
        bits.insert(bits.end(), static_cast<std::size_t>(symbols), bit);
    }
    return bits;
}

DecodeResult decode_trace(const PduTrace& trace, const DecoderParams& params,
                          const BitMapping& mapping) {
    params.validate();
    DecodeResult result;
    if (trace.empty()) {
        result.status = DecodeStatus::NoSignal;
        return result;
    }

    result.runs = segment_runs(trace, params);
    result.bits = runs_to_bits(result.runs, params, mapping);

    double margin_sum = 0.0;
    for (const auto& run : result.runs) margin_sum += run.mean_margin;
    result.confidence = result.runs.empty() ? 0.0 : margin_sum / static_cast<double>(result.runs.size());

    const DeframeResult deframed = deframe_bits(result.bits);
    switch (deframed.status) {
        case DeframeStatus::Ok:
            result.status = DecodeStatus::Ok;
            result.payload = deframed.payload;
            break;
        case DeframeStatus::NoPreamble: result.status = DecodeStatus::NoPreamble; break;
        case DeframeStatus::TruncatedFrame: result.status = DecodeStatus::TruncatedFrame; break;
        case DeframeStatus::ChecksumMismatch: result.status = DecodeStatus::ChecksumMismatch; break;
    }
    return result;
}

} // namespace isteg
