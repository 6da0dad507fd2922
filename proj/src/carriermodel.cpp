#include "isteg/carriermodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace isteg {

void ChannelProfile::validate() const {
    if (talk_size_min > talk_size_max) throw std::invalid_argument("talk size range inverted");
    if (silence_size_min > silence_size_max) throw std::invalid_argument("silence size range inverted");
    if (silence_size_min <= 0) throw std::invalid_argument("PDU sizes must be positive");
    if (silence_size_max >= talk_size_min)
        throw std::invalid_argument("size ranges must be disjoint with silence below talk");
    if (talk_pdu_interval_s <= 0.0 || silence_pdu_interval_s <= 0.0)
        throw std::invalid_argument("PDU intervals must be positive");
    if (loss_prob < 0.0 || loss_prob > 1.0) throw std::invalid_argument("loss_prob outside [0,1]");
    if (jitter_std_s < 0.0) throw std::invalid_argument("jitter_std_s must be >= 0");
    if (spurious_pdu_rate_hz < 0.0) throw std::invalid_argument("spurious_pdu_rate_hz must be >= 0");
    if (vad_hangover_s < 0.0) throw std::invalid_argument("vad_hangover_s must be >= 0");
}

void NaturalUsageParams::validate() const {
    if (mean_talk_s <= 0.0 || mean_pause_s <= 0.0) throw std::invalid_argument("segment means must be positive");
    if (duration_sigma < 0.0) throw std::invalid_argument("duration_sigma must be >= 0");
    if (session_duration_s < 0.0) throw std::invalid_argument("session_duration_s must be >= 0");
}

namespace {

// PDUs at start, start+dt, ... strictly below start+span. The 1e-9 guard
// keeps exact multiples (1.0 / 0.1) from gaining or losing a slot to
// floating point noise.
long pdu_count(double span_s, double interval_s) {
    if (span_s <= 0.0) return 0;
    return static_cast<long>(std::ceil(span_s / interval_s - 1e-9));
}

PduTrace emit_pdus(const SymbolSchedule& schedule, const ChannelProfile& profile, Rng& rng) {
    std::vector<PduRecord> records;
    double segment_start = 0.0;
    double emission_end = 0.0;
    for (const auto& seg : schedule.segments) {
        const bool voice = seg.kind == SymbolKind::Voice;
        const double interval = voice ? profile.talk_pdu_interval_s : profile.silence_pdu_interval_s;
        const int size_min = voice ? profile.talk_size_min : profile.silence_size_min;
        const int size_max = voice ? profile.talk_size_max : profile.silence_size_max;
        // VAD keeps the voice class alive for a short hangover after the
        // segment ends; silence emission stops at the boundary.
        const double span = seg.duration_s + (voice ? profile.vad_hangover_s : 0.0);
        const long count = pdu_count(span, interval);
        for (long k = 0; k < count; ++k) {
            const double t = segment_start + static_cast<double>(k) * interval;
            records.push_back({t, static_cast<int>(rng.uniform_int(size_min, size_max))});
        }
        segment_start += seg.duration_s;
        emission_end = std::max(emission_end, segment_start + (voice ? profile.vad_hangover_s : 0.0));
    }

    if (profile.jitter_std_s > 0.0) {
        for (auto& rec : records) {
            rec.t_s = std::max(0.0, rec.t_s + rng.gaussian(0.0, profile.jitter_std_s));
        }
        std::stable_sort(records.begin(), records.end(),
                         [](const PduRecord& a, const PduRecord& b) { return a.t_s < b.t_s; });
    }

    if (profile.loss_prob > 0.0) {
        std::vector<PduRecord> kept;
        kept.reserve(records.size());
        for (const auto& rec : records) {
            if (!rng.bernoulli(profile.loss_prob)) kept.push_back(rec);
        }
        records.swap(kept);
    }

    if (profile.spurious_pdu_rate_hz > 0.0 && emission_end > 0.0) {
        // Poisson arrivals over the emission span, sized uniformly over the
        // union of the two legitimate ranges.
        const long silence_span = profile.silence_size_max - profile.silence_size_min + 1;
        const long talk_span = profile.talk_size_max - profile.talk_size_min + 1;
        double t = rng.exponential(profile.spurious_pdu_rate_hz);
        while (t < emission_end) {
            const long pick = rng.uniform_int(0, silence_span + talk_span - 1);
            const int size = pick < silence_span
                                 ? profile.silence_size_min + static_cast<int>(pick)
                                 : profile.talk_size_min + static_cast<int>(pick - silence_span);
            records.push_back({t, size});
            t += rng.exponential(profile.spurious_pdu_rate_hz);
        }
        std::stable_sort(records.begin(), records.end(),
                         [](const PduRecord& a, const PduRecord& b) { return a.t_s < b.t_s; });
    }

    return PduTrace{std::move(records)};
}

} // namespace

PduTrace synthesize_trace(const SymbolSchedule& schedule, const ChannelProfile& profile,
                          std::uint64_t seed) {
    profile.validate();
    for (const auto& seg : schedule.segments) {
        if (seg.duration_s <= 0.0) throw std::invalid_argument("schedule durations must be positive");
    }
    Rng rng(seed);
    return emit_pdus(schedule, profile, rng);
}

PduTrace generate_natural_trace(const NaturalUsageParams& params, const ChannelProfile& profile,
                                std::uint64_t seed) {
    params.validate();
    profile.validate();
    Rng rng(seed);

    SymbolSchedule schedule;
    double t = 0.0;
    bool talk = true;
    while (t < params.session_duration_s - 1e-12) {
        const double mean = talk ? params.mean_talk_s : params.mean_pause_s;
        double d = rng.lognormal_with_mean(mean, params.duration_sigma);
        d = std::min(d, params.session_duration_s - t);
        if (d > 0.0) {
            schedule.segments.push_back({talk ? SymbolKind::Voice : SymbolKind::Silence, d});
        }
        t += d;
        talk = !talk;
    }
    return emit_pdus(schedule, profile, rng);
}

std::vector<std::string> simulate_recognition(const SymbolSchedule& schedule, RecognitionMode mode,
                                              const std::vector<std::string>& lexicon,
                                              std::uint64_t seed) {
    std::vector<std::string> tokens;
    if (mode == RecognitionMode::Covert) {
        // The sender replays one canned audio sample per voice segment, so
        // the recognizer returns the same word each time.
        for (const auto& seg : schedule.segments) {
            if (seg.kind == SymbolKind::Voice) tokens.emplace_back(kCovertToken);
        }
        return tokens;
    }

    if (lexicon.empty()) throw EmptyLexiconError("natural recognition needs a non-empty lexicon");
    Rng rng(seed);
    double talk_s = 0.0;
    for (const auto& seg : schedule.segments) {
        if (seg.kind == SymbolKind::Voice) talk_s += seg.duration_s;
    }
    const long count = std::llround(talk_s / kTokenIntervalS);
    tokens.reserve(static_cast<std::size_t>(std::max(0l, count)));
    for (long i = 0; i < count; ++i) {
        tokens.push_back(lexicon[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(lexicon.size()) - 1))]);
    }
    return tokens;
}

} // namespace isteg
