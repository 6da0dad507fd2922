#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "isteg/carriermodel.hpp"
#include "isteg/listener.hpp"
#include "isteg/metrics.hpp"
#include "isteg/symbolcodec.hpp"
#include "isteg/warden.hpp"

// Wire formats.
//   schedule: JSONL, {"kind":"voice"|"silence","dur":<float>}
//   trace:    JSONL, {"t":<float seconds>,"size":<int bytes>}
//             or CSV with header "t,size"
//   decode:   JSON {"status":...,"bits":...,"payload_hex":...,"confidence":...,"runs":[...]}
//   report:   JSON {"method":...,"score":...,"threshold":...,"verdict":...,"aux":{...}}
//   metrics:  CSV row payload_len,elapsed_s,ber,goodput_Bps,symbol_rate_sps

namespace isteg {

std::string bits_to_string(const Bits& bits);
Bits bits_from_string(const std::string& text); // throws ConfigError on non-'0'/'1'

std::string bytes_to_hex(const Bytes& bytes);
Bytes hex_to_bytes(const std::string& text);   // throws ConfigError
Bytes digits_to_bcd(const std::string& digits); // packs two digits per byte; throws ConfigError
Bytes ascii_to_bytes(const std::string& text);

std::string schedule_to_jsonl(const SymbolSchedule& schedule);
SymbolSchedule schedule_from_jsonl(std::istream& in); // throws ConfigError

std::string trace_to_jsonl(const PduTrace& trace);
PduTrace trace_from_stream(std::istream& in); // sniffs JSONL vs CSV; throws ConfigError

std::string decode_result_to_json(const DecodeResult& result);
std::string detection_report_to_json(const DetectionReport& report);

std::string metrics_csv_header();
std::string metrics_csv_row(std::size_t payload_len, const ChannelMetrics& metrics);

std::string decode_status_name(DecodeStatus status);
std::string kind_name(SymbolKind kind); // "voice" / "silence"

/// One whitespace-tokenized sentence per line; blank lines skipped.
std::vector<std::vector<std::string>> read_corpus(std::istream& in);
/// All whitespace-separated tokens in the stream, one flat sequence.
std::vector<std::string> read_tokens(std::istream& in);

} // namespace isteg
