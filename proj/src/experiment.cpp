#include "isteg/experiment.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <utility>

#include "isteg/errors.hpp"
#include "isteg/trace_io.hpp"

namespace isteg {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const double parsed = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing characters");
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse number \"" + value + "\"");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const long parsed = std::stol(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing characters");
        return static_cast<int>(parsed);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse integer \"" + value + "\"");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t consumed = 0;
        const unsigned long long parsed = std::stoull(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument("trailing characters");
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse seed \"" + value + "\"");
    }
}

int round_to_int(double value) { return static_cast<int>(std::llround(value)); }

using NumericSetter = void (*)(ExperimentConfig&, double);

struct NumericParam {
    const char* key;
    NumericSetter set;
};

// Single source of truth for every numeric config key; doubles as the
// sweep-axis dispatch. Integer-valued parameters round to nearest.
const NumericParam kNumericParams[] = {
    {"voice_symbol_s", [](ExperimentConfig& c, double v) { c.timing.voice_symbol_s = v; }},
    {"silence_symbol_s", [](ExperimentConfig& c, double v) { c.timing.silence_symbol_s = v; }},
    // Size bounds describe the channel, so the synthesizer and the decoder
    // share them.
    {"talk_size_min",
     [](ExperimentConfig& c, double v) {
         c.profile.talk_size_min = round_to_int(v);
         c.decoder.talk_size_min = round_to_int(v);
     }},
    {"talk_size_max",
     [](ExperimentConfig& c, double v) {
         c.profile.talk_size_max = round_to_int(v);
         c.decoder.talk_size_max = round_to_int(v);
     }},
    {"silence_size_min",
     [](ExperimentConfig& c, double v) {
         c.profile.silence_size_min = round_to_int(v);
         c.decoder.silence_size_min = round_to_int(v);
     }},
    {"silence_size_max",
     [](ExperimentConfig& c, double v) {
         c.profile.silence_size_max = round_to_int(v);
         c.decoder.silence_size_max = round_to_int(v);
     }},
    {"talk_pdu_interval_s",
     [](ExperimentConfig& c, double v) { c.profile.talk_pdu_interval_s = v; }},
    {"silence_pdu_interval_s",
     [](ExperimentConfig& c, double v) { c.profile.silence_pdu_interval_s = v; }},
    {"jitter_std_s", [](ExperimentConfig& c, double v) { c.profile.jitter_std_s = v; }},
    {"loss_prob", [](ExperimentConfig& c, double v) { c.profile.loss_prob = v; }},
    {"spurious_pdu_rate_hz",
     [](ExperimentConfig& c, double v) { c.profile.spurious_pdu_rate_hz = v; }},
    {"vad_hangover_s", [](ExperimentConfig& c, double v) { c.profile.vad_hangover_s = v; }},
    {"bin_s", [](ExperimentConfig& c, double v) { c.decoder.bin_s = v; }},
    {"vote_margin", [](ExperimentConfig& c, double v) { c.decoder.vote_margin = v; }},
    {"min_run_bins", [](ExperimentConfig& c, double v) { c.decoder.min_run_bins = round_to_int(v); }},
    {"voice_window_s", [](ExperimentConfig& c, double v) { c.voice_window_override = v; }},
    {"silence_window_s", [](ExperimentConfig& c, double v) { c.silence_window_override = v; }},
};

const NumericParam* find_numeric_param(const std::string& key) {
    for (const auto& param : kNumericParams) {
        if (key == param.key) return &param;
    }
    return nullptr;
}

} // namespace

Bytes ExperimentConfig::payload_bytes() const {
    if (payload_format == "hex") return hex_to_bytes(payload);
    if (payload_format == "digits") return digits_to_bcd(payload);
    if (payload_format == "ascii") return ascii_to_bytes(payload);
    throw ConfigError("payload_format must be hex, digits, or ascii; got \"" + payload_format +
                      "\"");
}

DecoderParams ExperimentConfig::decoder_params() const {
    DecoderParams params = decoder;
    params.voice_window_s = voice_window_override.value_or(timing.voice_symbol_s);
    params.silence_window_s = silence_window_override.value_or(timing.silence_symbol_s);
    return params;
}

void ExperimentConfig::validate() const {
    const Bytes bytes = payload_bytes();
    if (bytes.size() > kMaxPayloadBytes)
        throw ConfigError("payload is " + std::to_string(bytes.size()) +
                          " bytes; at most 255 fit in one frame");
    if (!timing.valid()) throw ConfigError("symbol durations must be positive");
    try {
        profile.validate();
        decoder_params().validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    if (sweep.active()) {
        if (find_numeric_param(sweep.param) == nullptr)
            throw ConfigError("sweep_param \"" + sweep.param + "\" is not a numeric parameter");
        if (sweep.steps < 1) throw ConfigError("sweep_steps must be at least 1");
        if (sweep.repetitions < 1) throw ConfigError("sweep_repetitions must be at least 1");
        if (sweep.min > sweep.max) throw ConfigError("sweep_min must not exceed sweep_max");
    }
}

void set_numeric_param(ExperimentConfig& config, const std::string& key, double value) {
    const NumericParam* param = find_numeric_param(key);
    if (param == nullptr) throw ConfigError("unknown numeric parameter: " + key);
    param->set(config, value);
}

void apply_config_kv(ExperimentConfig& config, const std::string& key, const std::string& value) {
    if (key == "payload") {
        config.payload = value;
    } else if (key == "payload_format") {
        config.payload_format = value;
    } else if (key == "seed") {
        config.seed = parse_u64(key, value);
    } else if (key == "sweep_param") {
        config.sweep.param = value;
    } else if (key == "sweep_min") {
        config.sweep.min = parse_double(key, value);
    } else if (key == "sweep_max") {
        config.sweep.max = parse_double(key, value);
    } else if (key == "sweep_steps") {
        config.sweep.steps = parse_int(key, value);
    } else if (key == "sweep_repetitions") {
        config.sweep.repetitions = parse_int(key, value);
    } else if (const NumericParam* param = find_numeric_param(key)) {
        param->set(config, parse_double(key, value));
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

ExperimentConfig parse_config_stream(std::istream& in, const std::string& origin) {
    ExperimentConfig config;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        try {
            apply_config_kv(config, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
    return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config_stream(in, path);
}

E2eResult run_e2e(const ExperimentConfig& config, std::uint64_t seed) {
    config.validate();
    const Bytes payload = config.payload_bytes();

    E2eResult result;
    result.payload_len = payload.size();
    result.sent_bits = frame_payload(payload);
    result.schedule = bits_to_schedule(result.sent_bits, config.timing);
    const PduTrace trace = synthesize_trace(result.schedule, config.profile, seed);
    result.decode = decode_trace(trace, config.decoder_params());

    const double elapsed = result.schedule.total_duration();
    result.metrics.elapsed_s = elapsed;
    result.metrics.ber = ber(result.sent_bits, result.decode.bits);
    // Goodput counts only payload bytes that actually arrived intact.
    const std::size_t delivered = result.decode.ok() ? payload.size() : 0;
    result.metrics.goodput_Bps = goodput(delivered, elapsed);
    result.metrics.symbol_rate_sps = static_cast<double>(result.sent_bits.size()) / elapsed;
    return result;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
    config.validate();
    if (!config.sweep.active())
        throw ConfigError("sweep requires sweep_param (plus sweep_min/sweep_max/sweep_steps)");

    std::vector<double> values;
    if (config.sweep.steps == 1) {
        values.push_back(config.sweep.min);
    } else {
        for (int i = 0; i < config.sweep.steps; ++i) {
            const double frac = static_cast<double>(i) / (config.sweep.steps - 1);
            values.push_back(config.sweep.min + (config.sweep.max - config.sweep.min) * frac);
        }
    }

    // Repetition r reuses seed base+r at every axis value, so rows along the
    // axis are paired and the axis effect is not confounded with reseeding.
    std::vector<SweepRow> rows;
    rows.reserve(values.size() * static_cast<std::size_t>(config.sweep.repetitions));
    for (const double value : values) {
        for (int rep = 0; rep < config.sweep.repetitions; ++rep) {
            ExperimentConfig point = config;
            point.sweep = {};
            set_numeric_param(point, config.sweep.param, value);
            const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(rep);
            const E2eResult outcome = run_e2e(point, seed);
            rows.push_back({value, rep, seed, outcome.payload_len, outcome.metrics});
        }
    }
    return rows;
}

} // namespace isteg
