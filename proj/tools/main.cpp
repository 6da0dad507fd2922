// istegsim: batch driver for the voice/silence covert-channel simulator.
// Subcommands pipe into each other: encode | synth | decode, with e2e and
// sweep wrapping the full loop for experiments. Exit codes: 0 success or
// benign verdict, 1 decode failure or covert verdict, 2 usage/config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "isteg/carriermodel.hpp"
#include "isteg/errors.hpp"
#include "isteg/experiment.hpp"
#include "isteg/listener.hpp"
#include "isteg/metrics.hpp"
#include "isteg/symbolcodec.hpp"
#include "isteg/trace_io.hpp"
#include "isteg/warden.hpp"

namespace {

using namespace isteg;

std::istream& open_input(const std::string& path, std::ifstream& file) {
    if (path == "-") return std::cin;
    file.open(path);
    if (!file) throw ConfigError("cannot open file: " + path);
    return file;
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

void add_timing_flags(CLI::App* cmd, TimingParams& timing) {
    cmd->add_option("--voice_symbol_s", timing.voice_symbol_s, "Voice symbol duration (s)")
        ->capture_default_str();
    cmd->add_option("--silence_symbol_s", timing.silence_symbol_s, "Silence symbol duration (s)")
        ->capture_default_str();
}

void add_profile_flags(CLI::App* cmd, ChannelProfile& profile) {
    cmd->add_option("--talk_size_min", profile.talk_size_min, "Smallest talk-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--talk_size_max", profile.talk_size_max, "Largest talk-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--silence_size_min", profile.silence_size_min,
                    "Smallest inactive-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--silence_size_max", profile.silence_size_max,
                    "Largest inactive-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--talk_pdu_interval_s", profile.talk_pdu_interval_s,
                    "PDU spacing while talking (s)")
        ->capture_default_str();
    cmd->add_option("--silence_pdu_interval_s", profile.silence_pdu_interval_s,
                    "PDU spacing while silent (s)")
        ->capture_default_str();
    cmd->add_option("--jitter_std_s", profile.jitter_std_s, "Gaussian timestamp noise (s)")
        ->capture_default_str();
    cmd->add_option("--loss_prob", profile.loss_prob, "Independent per-PDU drop probability")
        ->capture_default_str();
    cmd->add_option("--spurious_pdu_rate_hz", profile.spurious_pdu_rate_hz,
                    "Poisson rate of unrelated PDUs")
        ->capture_default_str();
    cmd->add_option("--vad_hangover_s", profile.vad_hangover_s,
                    "Voice emission overhang past each segment (s)")
        ->capture_default_str();
}

void add_decoder_flags(CLI::App* cmd, DecoderParams& params) {
    cmd->add_option("--talk_size_min", params.talk_size_min, "Smallest talk-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--talk_size_max", params.talk_size_max, "Largest talk-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--silence_size_min", params.silence_size_min,
                    "Smallest inactive-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--silence_size_max", params.silence_size_max,
                    "Largest inactive-period PDU (bytes)")
        ->capture_default_str();
    cmd->add_option("--bin_s", params.bin_s, "Voting bin width (s)")->capture_default_str();
    cmd->add_option("--voice_window_s", params.voice_window_s, "Voice decision window (s)")
        ->capture_default_str();
    cmd->add_option("--silence_window_s", params.silence_window_s, "Silence decision window (s)")
        ->capture_default_str();
    cmd->add_option("--vote_margin", params.vote_margin,
                    "Majority fraction a voice bin verdict needs")
        ->capture_default_str();
    cmd->add_option("--min_run_bins", params.min_run_bins,
                    "Runs shorter than this merge into a neighbor")
        ->capture_default_str();
}

// Every config key the e2e/sweep subcommands accept as a CLI override.
const std::vector<std::string> kConfigKeys = {
    "payload", "payload_format", "seed",
    "voice_symbol_s", "silence_symbol_s",
    "talk_size_min", "talk_size_max", "silence_size_min", "silence_size_max",
    "talk_pdu_interval_s", "silence_pdu_interval_s",
    "jitter_std_s", "loss_prob", "spurious_pdu_rate_hz", "vad_hangover_s",
    "bin_s", "vote_margin", "min_run_bins", "voice_window_s", "silence_window_s",
    "sweep_param", "sweep_min", "sweep_max", "sweep_steps", "sweep_repetitions",
};

struct ConfigCliState {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    CLI::App* cmd = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigCliState& state) {
    state.cmd = cmd;
    cmd->add_option("--config", state.config_path, "Flat key = value experiment file");
    for (const auto& key : kConfigKeys) {
        cmd->add_option("--" + key, state.overrides[key], "Override config key " + key);
    }
}

ExperimentConfig load_config(const ConfigCliState& state) {
    ExperimentConfig config;
    if (!state.config_path.empty()) config = parse_config_file(state.config_path);
    for (const auto& key : kConfigKeys) {
        if (state.cmd->count("--" + key) > 0) apply_config_kv(config, key, state.overrides.at(key));
    }
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Voice/silence covert-channel simulator and analysis toolkit"};
    app.require_subcommand(1);
    int exit_code = 0;

    // encode
    auto* enc = app.add_subcommand("encode", "Frame a payload into a voice/silence schedule");
    std::string enc_hex, enc_digits, enc_ascii;
    TimingParams enc_timing;
    bool enc_invert = false;
    auto* enc_hex_opt = enc->add_option("--hex", enc_hex, "Payload as hex digits");
    auto* enc_dig_opt =
        enc->add_option("--digits", enc_digits, "Payload as decimal digits, two per byte");
    auto* enc_asc_opt = enc->add_option("--ascii", enc_ascii, "Payload as ASCII text");
    enc_hex_opt->excludes(enc_dig_opt)->excludes(enc_asc_opt);
    enc_dig_opt->excludes(enc_asc_opt);
    add_timing_flags(enc, enc_timing);
    enc->add_flag("--invert-mapping", enc_invert, "Map bit 1 to silence instead of voice");
    enc->callback([&] {
        Bytes payload;
        if (enc_hex_opt->count() > 0) payload = hex_to_bytes(enc_hex);
        if (enc_dig_opt->count() > 0) payload = digits_to_bcd(enc_digits);
        if (enc_asc_opt->count() > 0) payload = ascii_to_bytes(enc_ascii);
        const BitMapping mapping = enc_invert ? BitMapping::inverted() : BitMapping{};
        const Bits bits = frame_payload(payload);
        std::cout << schedule_to_jsonl(bits_to_schedule(bits, enc_timing, mapping));
    });

    // synth
    auto* syn = app.add_subcommand("synth", "Turn a schedule into a PDU trace");
    std::string syn_schedule = "-";
    ChannelProfile syn_profile;
    std::uint64_t syn_seed = 0;
    syn->add_option("--schedule", syn_schedule, "Schedule JSONL file, - for stdin")
        ->capture_default_str();
    add_profile_flags(syn, syn_profile);
    syn->add_option("--seed", syn_seed, "Deterministic noise seed")->capture_default_str();
    syn->callback([&] {
        std::ifstream file;
        const SymbolSchedule schedule = schedule_from_jsonl(open_input(syn_schedule, file));
        std::cout << trace_to_jsonl(synthesize_trace(schedule, syn_profile, syn_seed));
    });

    // decode
    auto* dec = app.add_subcommand("decode", "Recover a framed payload from a PDU trace");
    std::string dec_trace = "-";
    DecoderParams dec_params;
    bool dec_invert = false;
    dec->add_option("--trace", dec_trace, "Trace file (JSONL or t,size CSV), - for stdin")
        ->capture_default_str();
    add_decoder_flags(dec, dec_params);
    dec->add_flag("--invert-mapping", dec_invert, "Map bit 1 to silence instead of voice");
    dec->callback([&] {
        std::ifstream file;
        const PduTrace trace = trace_from_stream(open_input(dec_trace, file));
        const BitMapping mapping = dec_invert ? BitMapping::inverted() : BitMapping{};
        const DecodeResult result = decode_trace(trace, dec_params, mapping);
        std::cout << decode_result_to_json(result) << "\n";
        exit_code = result.ok() ? 0 : 1;
    });

    // e2e
    auto* e2e = app.add_subcommand("e2e", "encode -> synth -> decode -> metrics, one seed");
    ConfigCliState e2e_state;
    add_config_flags(e2e, e2e_state);
    e2e->callback([&] {
        const ExperimentConfig config = load_config(e2e_state);
        const E2eResult result = run_e2e(config, config.seed);
        std::cout << metrics_csv_header() << "\n"
                  << metrics_csv_row(result.payload_len, result.metrics) << "\n";
    });

    // sweep
    auto* swp = app.add_subcommand("sweep", "Repeat e2e along one numeric parameter axis");
    ConfigCliState swp_state;
    add_config_flags(swp, swp_state);
    swp->callback([&] {
        const ExperimentConfig config = load_config(swp_state);
        const std::vector<SweepRow> rows = run_sweep(config);
        std::cout << "sweep_param,sweep_value,repetition,seed," << metrics_csv_header() << "\n";
        for (const auto& row : rows) {
            std::cout << config.sweep.param << ',' << format_double(row.value) << ','
                      << row.repetition << ',' << row.seed << ','
                      << metrics_csv_row(row.payload_len, row.metrics) << "\n";
        }
    });

    // gen-natural
    auto* nat = app.add_subcommand("gen-natural", "Synthesize an ordinary dictation session");
    NaturalUsageParams nat_params;
    ChannelProfile nat_profile;
    std::uint64_t nat_seed = 0;
    nat->add_option("--mean_talk_s", nat_params.mean_talk_s, "Mean talk burst length (s)")
        ->capture_default_str();
    nat->add_option("--mean_pause_s", nat_params.mean_pause_s, "Mean pause length (s)")
        ->capture_default_str();
    nat->add_option("--duration_sigma", nat_params.duration_sigma,
                    "Lognormal sigma of burst durations")
        ->capture_default_str();
    nat->add_option("--session_duration_s", nat_params.session_duration_s, "Session length (s)")
        ->capture_default_str();
    add_profile_flags(nat, nat_profile);
    nat->add_option("--seed", nat_seed, "Deterministic session seed")->capture_default_str();
    nat->callback([&] {
        std::cout << trace_to_jsonl(generate_natural_trace(nat_params, nat_profile, nat_seed));
    });

    // detect
    auto* det = app.add_subcommand("detect", "Score a trace or transcript for covert use");
    std::string det_mode;
    std::string det_trace = "-";
    std::string det_tokens = "-";
    std::string det_corpus;
    std::string det_calibrate;
    double det_threshold = 0.0;
    int det_order = 2;
    double det_alpha = 1.0;
    DecoderParams det_params;
    det->add_option("--mode", det_mode, "traffic (regularity) or text (n-gram anomaly)")
        ->required()
        ->check(CLI::IsMember({"traffic", "text"}));
    det->add_option("--trace", det_trace, "Trace file for traffic mode, - for stdin")
        ->capture_default_str();
    det->add_option("--tokens", det_tokens, "Transcript token file for text mode, - for stdin")
        ->capture_default_str();
    det->add_option("--corpus", det_corpus, "Training corpus, one sentence per line (text mode)");
    det->add_option("--order", det_order, "n-gram order")->capture_default_str();
    det->add_option("--alpha", det_alpha, "Additive smoothing constant")->capture_default_str();
    auto* det_thr_opt =
        det->add_option("--threshold", det_threshold, "Decision threshold: covert iff score > it");
    auto* det_cal_opt = det->add_option(
        "--calibrate", det_calibrate,
        "Benign score file (one per line); threshold = its 95th percentile");
    det_thr_opt->excludes(det_cal_opt);
    add_decoder_flags(det, det_params);
    det->callback([&] {
        if (det_thr_opt->count() == 0 && det_cal_opt->count() == 0)
            throw ConfigError("detect needs --threshold or --calibrate");

        double score = 0.0;
        std::map<std::string, double> aux;
        DetectionMethod method;
        if (det_mode == "traffic") {
            method = DetectionMethod::TrafficRegularity;
            std::ifstream file;
            const PduTrace trace = trace_from_stream(open_input(det_trace, file));
            score = traffic_regularity_score(trace, det_params);
            aux["pdus"] = static_cast<double>(trace.size());
        } else {
            method = DetectionMethod::TextAnomaly;
            if (det_corpus.empty()) throw ConfigError("text mode needs --corpus");
            std::ifstream corpus_file(det_corpus);
            if (!corpus_file) throw ConfigError("cannot open file: " + det_corpus);
            const NgramModel model = train_ngram(read_corpus(corpus_file), det_order, det_alpha);
            std::ifstream file;
            const std::vector<std::string> tokens = read_tokens(open_input(det_tokens, file));
            score = text_anomaly_score(tokens, model);
            aux["order"] = det_order;
            aux["vocab"] = static_cast<double>(model.vocab_size());
            aux["tokens"] = static_cast<double>(tokens.size());
        }

        double threshold = det_threshold;
        if (det_cal_opt->count() > 0) {
            std::ifstream cal_file(det_calibrate);
            if (!cal_file) throw ConfigError("cannot open file: " + det_calibrate);
            std::vector<double> scores;
            double value = 0.0;
            while (cal_file >> value) scores.push_back(value);
            threshold = percentile(scores, 95.0);
        }

        const DetectionReport report =
            make_detection_report(method, score, threshold, std::move(aux));
        std::cout << detection_report_to_json(report) << "\n";
        exit_code = report.verdict == Verdict::Covert ? 1 : 0;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return exit_code;
}
