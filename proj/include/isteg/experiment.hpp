#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isteg/carriermodel.hpp"
#include "isteg/listener.hpp"
#include "isteg/metrics.hpp"
#include "isteg/symbolcodec.hpp"

namespace isteg {

struct SweepAxis {
    std::string param;   // any numeric config key, e.g. "jitter_std_s"
    double min = 0.0;
    double max = 0.0;
    int steps = 1;
    int repetitions = 1;

    bool active() const { return !param.empty(); }
};

/// One experiment: payload, timing, channel, decoder, seed, optional sweep.
/// Loaded from a flat key = value config file; CLI flags override file
/// values. Decoder windows follow the symbol durations unless set
/// explicitly.
struct ExperimentConfig {
    std::string payload;                 // interpreted per payload_format
    std::string payload_format = "hex";  // hex | digits | ascii
    TimingParams timing;
    ChannelProfile profile;
    DecoderParams decoder;
    std::optional<double> voice_window_override;
    std::optional<double> silence_window_override;
    std::uint64_t seed = 0;
    SweepAxis sweep;

    Bytes payload_bytes() const;      // throws ConfigError
    DecoderParams decoder_params() const;
    void validate() const;            // throws ConfigError
};

/// Applies one key/value pair (config file line or CLI override).
/// Throws ConfigError for unknown keys or unparsable values.
void apply_config_kv(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Sets a numeric parameter by config key name (the sweep axis hook).
void set_numeric_param(ExperimentConfig& config, const std::string& key, double value);

ExperimentConfig parse_config_file(const std::string& path); // throws ConfigError
ExperimentConfig parse_config_stream(std::istream& in, const std::string& origin = "<config>");

struct E2eResult {
    Bits sent_bits;
    SymbolSchedule schedule;
    DecodeResult decode;
    ChannelMetrics metrics;
    std::size_t payload_len = 0;
};

/// encode -> synthesize -> decode -> metrics with one seed.
E2eResult run_e2e(const ExperimentConfig& config, std::uint64_t seed);

struct SweepRow {
    double value;
    int repetition;
    std::uint64_t seed;
    std::size_t payload_len;
    ChannelMetrics metrics;
};

/// Axis expansion: steps linearly spaced values, repetitions runs per value,
/// seed = base seed + repetition index. Rows ordered by (value, repetition).
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

} // namespace isteg
