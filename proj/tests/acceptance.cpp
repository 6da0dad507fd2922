// End-to-end acceptance checks for the covert-channel toolkit. Each check
// prints one PASS/FAIL line; the process exits nonzero if any fail. Run via
// ctest or directly:
//
//   acceptance --cli path/to/istegsim --corpus path/to/natural_corpus.txt

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "isteg/carriermodel.hpp"
#include "isteg/experiment.hpp"
#include "isteg/listener.hpp"
#include "isteg/metrics.hpp"
#include "isteg/symbolcodec.hpp"
#include "isteg/trace_io.hpp"
#include "isteg/warden.hpp"

using namespace isteg;

namespace {

std::string g_cli_path;
std::string g_corpus_path;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Bytes random_payload(std::mt19937_64& rng, std::size_t len) {
    Bytes payload(len);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng() & 0xff);
    return payload;
}

PduTrace covert_trace(const Bytes& payload, const ChannelProfile& profile, std::uint64_t seed) {
    return synthesize_trace(bits_to_schedule(frame_payload(payload)), profile, seed);
}

// 1. Lossless channel: every payload survives the full pipeline untouched.
bool check_round_trip(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(101);
    int exact = 0;
    const int trials = 200;
    for (int trial = 0; trial < trials; ++trial) {
        const Bytes payload = random_payload(rng, 1 + rng() % 32);
        const Bits sent = frame_payload(payload);
        const DecodeResult result = decode_trace(covert_trace(payload, {}, trial));
        if (result.ok() && *result.payload == payload && ber(sent, result.bits) == 0.0) ++exact;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << exact << "/" << trials << " payloads exact, " << elapsed << " s";
    detail = out.str();
    return exact == trials && elapsed < 10.0;
}

// 2. Symbol timing: "10" is one second of voice plus two of silence.
bool check_symbol_timing(std::string& detail) {
    const SymbolSchedule schedule = bits_to_schedule({1, 0});
    const double duration = schedule.total_duration();
    std::ostringstream out;
    out << "bits \"10\" -> " << duration << " s";
    detail = out.str();
    return schedule.segments.size() == 2 && schedule.segments[0].kind == SymbolKind::Voice &&
           schedule.segments[0].duration_s == 1.0 && schedule.segments[1].kind == SymbolKind::Silence &&
           schedule.segments[1].duration_s == 2.0 && duration == 3.0;
}

// 3. Size classification: exhaustive over every PDU size 1..1500.
bool check_size_partition(std::string& detail) {
    int mismatches = 0;
    for (int size = 1; size <= 1500; ++size) {
        const PduClass got = classify_pdu(size, {});
        PduClass want = PduClass::Unknown;
        if (size >= 800 && size <= 900) want = PduClass::Voice;
        else if (size >= 100 && size <= 700) want = PduClass::Silence;
        if (got != want) ++mismatches;
    }
    std::ostringstream out;
    out << mismatches << " mismatches over sizes 1-1500";
    detail = out.str();
    return mismatches == 0;
}

// 4. A 16-digit number framed as BCD stays on the air for about two
// minutes; the implied goodput is about 0.06 B/s.
bool check_credit_card_timing(std::string& detail) {
    std::mt19937_64 rng(104);
    double duration_total = 0.0;
    const int trials = 1000;
    for (int trial = 0; trial < trials; ++trial) {
        std::string digits;
        for (int i = 0; i < 16; ++i) digits.push_back(static_cast<char>('0' + rng() % 10));
        duration_total += schedule_duration(bits_to_schedule(frame_payload(digits_to_bcd(digits))));
    }
    const double mean_duration = duration_total / trials;
    const double mean_goodput = 8.0 / mean_duration;
    std::ostringstream out;
    out << "mean on-air " << mean_duration << " s over " << trials
        << " random numbers, goodput " << mean_goodput << " B/s";
    detail = out.str();
    return mean_duration >= 120.0 && mean_duration <= 145.0 && mean_goodput >= 0.05 &&
           mean_goodput <= 0.07;
}

// 5. Noise robustness: mean BER rises monotonically with jitter and a
// lightly jittered channel still decodes essentially error-free.
bool check_jitter_robustness(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(105);
    std::vector<Bytes> payloads;
    // Past jitter 0.3 the curve saturates near 0.49: the true slope between
    // the last two grid points is about +0.002 while one seed's paired BER
    // difference has sigma 0.11, so resolving the ordering needs tens of
    // thousands of seeds per point (SEM at 20000 is 0.0008).
    const int seeds = 20000;
    for (int i = 0; i < seeds; ++i) payloads.push_back(random_payload(rng, 8));

    const auto mean_ber = [&](double jitter) {
        ChannelProfile profile;
        profile.jitter_std_s = jitter;
        double total = 0.0;
        for (int seed = 0; seed < seeds; ++seed) {
            const Bits sent = frame_payload(payloads[seed]);
            const DecodeResult result = decode_trace(covert_trace(payloads[seed], profile, seed));
            total += ber(sent, result.bits);
        }
        return total / seeds;
    };

    const double light = mean_ber(0.02);
    bool monotone = true;
    double previous = -1.0;
    std::ostringstream curve;
    for (const double jitter : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double current = mean_ber(jitter);
        if (current < previous - 1e-12) monotone = false;
        previous = current;
        curve << " " << current;
    }
    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << "BER(0.02)=" << light << ", curve" << curve.str() << ", " << elapsed << " s";
    detail = out.str();
    return light < 0.01 && monotone && elapsed < 60.0;
}

// 6. The checksum screens corrupted frames: a half-lossy channel may fail
// to deliver, but it almost never delivers the wrong bytes.
bool check_silent_corruption(std::string& detail) {
    std::mt19937_64 rng(106);
    const Bytes payload = random_payload(rng, 1);
    ChannelProfile profile;
    profile.loss_prob = 0.5;
    int corrupted = 0;
    int delivered = 0;
    for (int seed = 0; seed < 1000; ++seed) {
        const DecodeResult result = decode_trace(covert_trace(payload, profile, seed));
        if (!result.ok()) continue;
        ++delivered;
        if (*result.payload != payload) ++corrupted;
    }
    std::ostringstream out;
    out << corrupted << " silent corruptions, " << delivered << " clean deliveries of 1000 tries";
    detail = out.str();
    return corrupted <= 15;
}

// 7. Both detectors separate covert use from natural use.
bool check_warden_efficacy(std::string& detail) {
    const auto start = std::chrono::steady_clock::now();

    std::mt19937_64 rng(107);
    std::vector<double> covert_scores, natural_scores;
    for (int seed = 0; seed < 100; ++seed) {
        const Bytes payload = random_payload(rng, 8);
        covert_scores.push_back(traffic_regularity_score(covert_trace(payload, {}, seed), {}));
        natural_scores.push_back(traffic_regularity_score(generate_natural_trace({}, {}, seed), {}));
    }
    const double auc = evaluate_roc(covert_scores, natural_scores).auc;

    if (g_corpus_path.empty()) {
        detail = "corpus path not provided (--corpus)";
        return false;
    }
    std::ifstream corpus_in(g_corpus_path);
    if (!corpus_in) {
        detail = "cannot open corpus " + g_corpus_path;
        return false;
    }
    const auto corpus = read_corpus(corpus_in);
    const NgramModel model = train_ngram(corpus, 2, 1.0);
    std::vector<std::string> lexicon;
    for (const auto& sentence : corpus) lexicon.insert(lexicon.end(), sentence.begin(), sentence.end());

    const SymbolSchedule session{{{SymbolKind::Voice, 40.0}}};
    std::vector<double> text_scores;
    for (int seed = 0; seed < 200; ++seed) {
        const auto tokens = simulate_recognition(session, RecognitionMode::Natural, lexicon, seed);
        text_scores.push_back(text_anomaly_score(tokens, model));
    }
    const double p95 = percentile(text_scores, 95.0);

    const Bytes payload = random_payload(rng, 8);
    const auto covert_tokens =
        simulate_recognition(bits_to_schedule(frame_payload(payload)), RecognitionMode::Covert, {}, 0);
    const double covert_text = text_anomaly_score(covert_tokens, model);

    const double elapsed = seconds_since(start);
    std::ostringstream out;
    out << "regularity AUC " << auc << ", covert text score " << covert_text
        << " vs natural p95 " << p95 << ", " << elapsed << " s";
    detail = out.str();
    return auc >= 0.9 && covert_text > p95 && elapsed < 120.0;
}

// 8. Every stochastic CLI command is reproducible: same seed, same bytes.
int run_shell(const std::string& command) {
    const int status = std::system(command.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool check_cli_determinism(std::string& detail) {
    if (g_cli_path.empty()) {
        detail = "cli path not provided (--cli)";
        return false;
    }
    const auto dir = std::filesystem::temp_directory_path() / "isteg_acceptance";
    std::filesystem::create_directories(dir);
    const std::string cli = "'" + g_cli_path + "'";
    const auto schedule = dir / "schedule.jsonl";

    if (run_shell(cli + " encode --hex deadbeef > '" + schedule.string() + "'") != 0) {
        detail = "encode failed";
        return false;
    }

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"synth", cli + " synth --schedule '" + schedule.string() +
                      "' --seed 5 --jitter_std_s 0.05 --loss_prob 0.1 --spurious_pdu_rate_hz 0.4"},
        {"gen-natural", cli + " gen-natural --seed 9"},
        {"e2e", cli + " e2e --payload a1b2c3d4 --seed 3 --jitter_std_s 0.1"},
        {"sweep", cli + " sweep --payload aabb --seed 2 --sweep_param jitter_std_s --sweep_min 0"
                      " --sweep_max 0.2 --sweep_steps 3 --sweep_repetitions 2"},
    };

    for (const auto& [name, command] : commands) {
        const auto first = dir / (name + ".first");
        const auto second = dir / (name + ".second");
        if (run_shell(command + " > '" + first.string() + "'") != 0 ||
            run_shell(command + " > '" + second.string() + "'") != 0) {
            detail = name + " exited nonzero";
            return false;
        }
        const std::string a = slurp(first);
        if (a.empty() || a != slurp(second)) {
            detail = name + " reran differently with the same seed";
            return false;
        }
    }
    detail = "synth, gen-natural, e2e, sweep byte-identical across reruns";
    return true;
}

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli") g_cli_path = argv[i + 1];
        if (arg == "--corpus") g_corpus_path = argv[i + 1];
    }

    struct Check {
        const char* name;
        bool (*run)(std::string&);
    };
    const Check checks[] = {
        {"zero-noise round trip", check_round_trip},
        {"symbol timing", check_symbol_timing},
        {"pdu size partition", check_size_partition},
        {"sixteen-digit on-air time", check_credit_card_timing},
        {"jitter robustness", check_jitter_robustness},
        {"silent corruption bound", check_silent_corruption},
        {"warden efficacy", check_warden_efficacy},
        {"cli determinism", check_cli_determinism},
    };

    int failures = 0;
    int index = 0;
    for (const auto& check : checks) {
        ++index;
        std::string detail;
        bool passed = false;
        try {
            passed = check.run(detail);
        } catch (const std::exception& err) {
            detail = std::string("exception: ") + err.what();
        }
        if (!passed) ++failures;
        std::printf("%s  %d %s: %s\n", passed ? "PASS" : "FAIL", index, check.name, detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
