#include "isteg/trace_io.hpp"

#include <cctype>
#include <cstdio>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace isteg {

using ordered_json = nlohmann::ordered_json;

std::string bits_to_string(const Bits& bits) {
    std::string out;
    out.reserve(bits.size());
    for (std::uint8_t bit : bits) out.push_back(bit ? '1' : '0');
    return out;
}

Bits bits_from_string(const std::string& text) {
    Bits bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0') {
            bits.push_back(0);
        } else if (c == '1') {
            bits.push_back(1);
        } else {
            throw ConfigError(std::string("bit strings may only contain '0'/'1', got '") + c + "'");
        }
    }
    return bits;
}

std::string bytes_to_hex(const Bytes& bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

Bytes hex_to_bytes(const std::string& text) {
    if (text.size() % 2 != 0) throw ConfigError("hex payload needs an even number of digits");
    Bytes out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        const int hi = hex_nibble(text[i]);
        const int lo = hex_nibble(text[i + 1]);
        if (hi < 0 || lo < 0) throw ConfigError("malformed hex payload: " + text);
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

Bytes digits_to_bcd(const std::string& digits) {
    if (digits.size() % 2 != 0)
        throw ConfigError("digit payloads pack two digits per byte; use an even count");
    Bytes out;
    out.reserve(digits.size() / 2);
    for (std::size_t i = 0; i < digits.size(); i += 2) {
        if (!std::isdigit(static_cast<unsigned char>(digits[i])) ||
            !std::isdigit(static_cast<unsigned char>(digits[i + 1]))) {
            throw ConfigError("digit payloads may only contain 0-9: " + digits);
        }
        out.push_back(static_cast<std::uint8_t>(((digits[i] - '0') << 4) | (digits[i + 1] - '0')));
    }
    return out;
}

Bytes ascii_to_bytes(const std::string& text) {
    return Bytes(text.begin(), text.end());
}

std::string kind_name(SymbolKind kind) {
    return kind == SymbolKind::Voice ? "voice" : "silence";
}

std::string schedule_to_jsonl(const SymbolSchedule& schedule) {
    std::string out;
    for (const auto& seg : schedule.segments) {
        ordered_json line;
        line["kind"] = kind_name(seg.kind);
        line["dur"] = seg.duration_s;
        out += line.dump();
        out += '\n';
    }
    return out;
}

SymbolSchedule schedule_from_jsonl(std::istream& in) {
    SymbolSchedule schedule;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json parsed;
        try {
            parsed = ordered_json::parse(line);
        } catch (const std::exception& err) {
            throw ConfigError("schedule line " + std::to_string(lineno) + ": " + err.what());
        }
        if (!parsed.contains("kind") || !parsed.contains("dur"))
            throw ConfigError("schedule line " + std::to_string(lineno) + ": needs kind and dur");
        const std::string kind = parsed["kind"].get<std::string>();
        if (kind != "voice" && kind != "silence")
            throw ConfigError("schedule line " + std::to_string(lineno) + ": unknown kind " + kind);
        const double dur = parsed["dur"].get<double>();
        if (!(dur > 0.0))
            throw ConfigError("schedule line " + std::to_string(lineno) + ": dur must be positive");
        schedule.segments.push_back({kind == "voice" ? SymbolKind::Voice : SymbolKind::Silence, dur});
    }
    return schedule;
}

std::string trace_to_jsonl(const PduTrace& trace) {
    std::string out;
    for (const auto& rec : trace.records) {
        ordered_json line;
        line["t"] = rec.t_s;
        line["size"] = rec.size;
        out += line.dump();
        out += '\n';
    }
    return out;
}

namespace {

PduTrace trace_from_csv(std::istream& in, const std::string& header) {
    std::string trimmed = header;
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    if (trimmed != "t,size") throw ConfigError("CSV traces need the header \"t,size\"");

    PduTrace trace;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        double t = 0.0;
        int size = 0;
        if (std::sscanf(line.c_str(), "%lf,%d", &t, &size) != 2)
            throw ConfigError("trace CSV line " + std::to_string(lineno) + ": expected t,size");
        trace.records.push_back({t, size});
    }
    return trace;
}

} // namespace

PduTrace trace_from_stream(std::istream& in) {
    // Peek the first non-blank line to pick a format.
    std::string first;
    while (std::getline(in, first)) {
        if (first.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    if (!in && first.empty()) return {};

    if (first.find_first_not_of(" \t\r") != std::string::npos &&
        first[first.find_first_not_of(" \t\r")] != '{') {
        return trace_from_csv(in, first);
    }

    PduTrace trace;
    std::size_t lineno = 0;
    std::string line = first;
    do {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ordered_json parsed;
        try {
            parsed = ordered_json::parse(line);
        } catch (const std::exception& err) {
            throw ConfigError("trace line " + std::to_string(lineno) + ": " + err.what());
        }
        if (!parsed.contains("t") || !parsed.contains("size"))
            throw ConfigError("trace line " + std::to_string(lineno) + ": needs t and size");
        trace.records.push_back({parsed["t"].get<double>(), parsed["size"].get<int>()});
    } while (std::getline(in, line));
    return trace;
}

std::string decode_status_name(DecodeStatus status) {
    switch (status) {
        case DecodeStatus::Ok: return "Ok";
        case DecodeStatus::NoSignal: return "NoSignal";
        case DecodeStatus::NoPreamble: return "NoPreamble";
        case DecodeStatus::TruncatedFrame: return "TruncatedFrame";
        case DecodeStatus::ChecksumMismatch: return "ChecksumMismatch";
    }
    return "NoSignal";
}

std::string decode_result_to_json(const DecodeResult& result) {
    ordered_json out;
    out["status"] = decode_status_name(result.status);
    out["bits"] = bits_to_string(result.bits);
    if (result.payload) {
        out["payload_hex"] = bytes_to_hex(*result.payload);
    } else {
        out["payload_hex"] = nullptr;
    }
    out["confidence"] = result.confidence;
    ordered_json runs = ordered_json::array();
    for (const auto& run : result.runs) {
        ordered_json item;
        item["kind"] = kind_name(run.kind);
        item["start"] = run.start_s;
        item["end"] = run.end_s;
        runs.push_back(item);
    }
    out["runs"] = runs;
    return out.dump();
}

std::string detection_report_to_json(const DetectionReport& report) {
    ordered_json out;
    out["method"] =
        report.method == DetectionMethod::TextAnomaly ? "TextAnomaly" : "TrafficRegularity";
    out["score"] = report.score;
    out["threshold"] = report.threshold;
    out["verdict"] = report.verdict == Verdict::Covert ? "Covert" : "Benign";
    ordered_json aux = ordered_json::object();
    for (const auto& [key, value] : report.aux) aux[key] = value;
    out["aux"] = aux;
    return out.dump();
}

std::string metrics_csv_header() {
    return "payload_len,elapsed_s,ber,goodput_Bps,symbol_rate_sps";
}

namespace {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

} // namespace

std::string metrics_csv_row(std::size_t payload_len, const ChannelMetrics& metrics) {
    std::string row = std::to_string(payload_len);
    row += ',';
    row += format_double(metrics.elapsed_s);
    row += ',';
    row += format_double(metrics.ber);
    row += ',';
    row += format_double(metrics.goodput_Bps);
    row += ',';
    row += format_double(metrics.symbol_rate_sps);
    return row;
}

std::vector<std::vector<std::string>> read_corpus(std::istream& in) {
    std::vector<std::vector<std::string>> corpus;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream words(line);
        std::vector<std::string> sentence;
        std::string token;
        while (words >> token) sentence.push_back(token);
        if (!sentence.empty()) corpus.push_back(std::move(sentence));
    }
    return corpus;
}

std::vector<std::string> read_tokens(std::istream& in) {
    std::vector<std::string> tokens;
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

} // namespace isteg
