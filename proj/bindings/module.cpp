#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isteg/carriermodel.hpp"
#include "isteg/errors.hpp"
#include "isteg/experiment.hpp"
#include "isteg/listener.hpp"
#include "isteg/metrics.hpp"
#include "isteg/symbolcodec.hpp"
#include "isteg/trace_io.hpp"
#include "isteg/warden.hpp"

namespace py = pybind11;
using namespace isteg;

// Python-facing conventions: bit sequences are '0'/'1' strings, payloads are
// bytes. The C++ vectors stay an internal representation.

namespace {

py::bytes to_py_bytes(const Bytes& data) {
    return py::bytes(reinterpret_cast<const char*>(data.data()), data.size());
}

Bytes from_py_bytes(const py::bytes& data) {
    const std::string raw = data;
    return Bytes(raw.begin(), raw.end());
}

} // namespace

PYBIND11_MODULE(istegsim, m) {
    m.doc() = "Voice/silence covert-channel simulator: codec, carrier, decoder, warden";

    py::enum_<SymbolKind>(m, "SymbolKind")
        .value("Voice", SymbolKind::Voice)
        .value("Silence", SymbolKind::Silence);

    py::class_<TimingParams>(m, "TimingParams")
        .def(py::init<>())
        .def_readwrite("voice_symbol_s", &TimingParams::voice_symbol_s)
        .def_readwrite("silence_symbol_s", &TimingParams::silence_symbol_s);

    py::class_<BitMapping>(m, "BitMapping")
        .def(py::init<>())
        .def_readwrite("bit_one", &BitMapping::bit_one)
        .def_readwrite("bit_zero", &BitMapping::bit_zero)
        .def_static("inverted", &BitMapping::inverted);

    py::class_<Segment>(m, "Segment")
        .def(py::init<SymbolKind, double>(), py::arg("kind"), py::arg("duration_s"))
        .def_readwrite("kind", &Segment::kind)
        .def_readwrite("duration_s", &Segment::duration_s);

    py::class_<SymbolSchedule>(m, "SymbolSchedule")
        .def(py::init<>())
        .def_readwrite("segments", &SymbolSchedule::segments)
        .def("total_duration", &SymbolSchedule::total_duration)
        .def("__len__", [](const SymbolSchedule& s) { return s.segments.size(); });

    m.attr("FRAME_PREAMBLE") = int(kFramePreamble);
    m.attr("MAX_PAYLOAD_BYTES") = int(kMaxPayloadBytes);
    m.attr("COVERT_TOKEN") = std::string(kCovertToken);

    m.def("crc8", [](const py::bytes& data) {
        const Bytes raw = from_py_bytes(data);
        return int(crc8(raw));
    });
    m.def("frame_payload", [](const py::bytes& payload) {
        return bits_to_string(frame_payload(from_py_bytes(payload)));
    });
    m.def("deframe_bits", [](const std::string& bits) {
        const DeframeResult result = deframe_bits(bits_from_string(bits));
        py::object payload = result.ok() ? py::object(to_py_bytes(result.payload)) : py::none();
        const char* status = "NoPreamble";
        switch (result.status) {
            case DeframeStatus::Ok: status = "Ok"; break;
            case DeframeStatus::NoPreamble: status = "NoPreamble"; break;
            case DeframeStatus::TruncatedFrame: status = "TruncatedFrame"; break;
            case DeframeStatus::ChecksumMismatch: status = "ChecksumMismatch"; break;
        }
        return py::make_tuple(std::string(status), payload);
    });
    m.def(
        "bits_to_schedule",
        [](const std::string& bits, const TimingParams& timing, const BitMapping& mapping) {
            return bits_to_schedule(bits_from_string(bits), timing, mapping);
        },
        py::arg("bits"), py::arg("timing") = TimingParams{}, py::arg("mapping") = BitMapping{});
    m.def("schedule_duration", &schedule_duration);

    py::class_<ChannelProfile>(m, "ChannelProfile")
        .def(py::init<>())
        .def_readwrite("talk_size_min", &ChannelProfile::talk_size_min)
        .def_readwrite("talk_size_max", &ChannelProfile::talk_size_max)
        .def_readwrite("silence_size_min", &ChannelProfile::silence_size_min)
        .def_readwrite("silence_size_max", &ChannelProfile::silence_size_max)
        .def_readwrite("talk_pdu_interval_s", &ChannelProfile::talk_pdu_interval_s)
        .def_readwrite("silence_pdu_interval_s", &ChannelProfile::silence_pdu_interval_s)
        .def_readwrite("jitter_std_s", &ChannelProfile::jitter_std_s)
        .def_readwrite("loss_prob", &ChannelProfile::loss_prob)
        .def_readwrite("spurious_pdu_rate_hz", &ChannelProfile::spurious_pdu_rate_hz)
        .def_readwrite("vad_hangover_s", &ChannelProfile::vad_hangover_s)
        .def("validate", &ChannelProfile::validate);

    py::class_<PduRecord>(m, "PduRecord")
        .def(py::init<double, int>(), py::arg("t_s"), py::arg("size"))
        .def_readwrite("t_s", &PduRecord::t_s)
        .def_readwrite("size", &PduRecord::size);

    py::class_<PduTrace>(m, "PduTrace")
        .def(py::init<>())
        .def_readwrite("records", &PduTrace::records)
        .def("end_time", &PduTrace::end_time)
        .def("__len__", &PduTrace::size);

    py::class_<NaturalUsageParams>(m, "NaturalUsageParams")
        .def(py::init<>())
        .def_readwrite("mean_talk_s", &NaturalUsageParams::mean_talk_s)
        .def_readwrite("mean_pause_s", &NaturalUsageParams::mean_pause_s)
        .def_readwrite("duration_sigma", &NaturalUsageParams::duration_sigma)
        .def_readwrite("session_duration_s", &NaturalUsageParams::session_duration_s);

    m.def("synthesize_trace", &synthesize_trace, py::arg("schedule"), py::arg("profile"),
          py::arg("seed"));
    m.def("generate_natural_trace", &generate_natural_trace, py::arg("params"), py::arg("profile"),
          py::arg("seed"));

    py::enum_<RecognitionMode>(m, "RecognitionMode")
        .value("Covert", RecognitionMode::Covert)
        .value("Natural", RecognitionMode::Natural);
    m.def("simulate_recognition", &simulate_recognition, py::arg("schedule"), py::arg("mode"),
          py::arg("lexicon"), py::arg("seed"));

    py::class_<DecoderParams>(m, "DecoderParams")
        .def(py::init<>())
        .def_readwrite("talk_size_min", &DecoderParams::talk_size_min)
        .def_readwrite("talk_size_max", &DecoderParams::talk_size_max)
        .def_readwrite("silence_size_min", &DecoderParams::silence_size_min)
        .def_readwrite("silence_size_max", &DecoderParams::silence_size_max)
        .def_readwrite("bin_s", &DecoderParams::bin_s)
        .def_readwrite("voice_window_s", &DecoderParams::voice_window_s)
        .def_readwrite("silence_window_s", &DecoderParams::silence_window_s)
        .def_readwrite("vote_margin", &DecoderParams::vote_margin)
        .def_readwrite("min_run_bins", &DecoderParams::min_run_bins)
        .def("validate", &DecoderParams::validate);

    py::enum_<PduClass>(m, "PduClass")
        .value("Voice", PduClass::Voice)
        .value("Silence", PduClass::Silence)
        .value("Unknown", PduClass::Unknown);

    py::class_<RunSegment>(m, "RunSegment")
        .def_readonly("kind", &RunSegment::kind)
        .def_readonly("start_s", &RunSegment::start_s)
        .def_readonly("end_s", &RunSegment::end_s)
        .def_readonly("bin_count", &RunSegment::bin_count)
        .def_readonly("mean_margin", &RunSegment::mean_margin)
        .def("duration", &RunSegment::duration);

    py::enum_<DecodeStatus>(m, "DecodeStatus")
        .value("Ok", DecodeStatus::Ok)
        .value("NoSignal", DecodeStatus::NoSignal)
        .value("NoPreamble", DecodeStatus::NoPreamble)
        .value("TruncatedFrame", DecodeStatus::TruncatedFrame)
        .value("ChecksumMismatch", DecodeStatus::ChecksumMismatch);

    py::class_<DecodeResult>(m, "DecodeResult")
        .def_property_readonly("bits", [](const DecodeResult& r) { return bits_to_string(r.bits); })
        .def_readonly("runs", &DecodeResult::runs)
        .def_property_readonly("payload",
                               [](const DecodeResult& r) {
                                   return r.payload ? py::object(to_py_bytes(*r.payload))
                                                    : py::object(py::none());
                               })
        .def_readonly("status", &DecodeResult::status)
        .def_readonly("confidence", &DecodeResult::confidence)
        .def("ok", &DecodeResult::ok);

    m.def("classify_pdu", &classify_pdu, py::arg("size"), py::arg("params") = DecoderParams{});
    m.def("segment_runs", &segment_runs, py::arg("trace"), py::arg("params") = DecoderParams{});
    m.def(
        "runs_to_bits",
        [](const std::vector<RunSegment>& runs, const DecoderParams& params,
           const BitMapping& mapping) { return bits_to_string(runs_to_bits(runs, params, mapping)); },
        py::arg("runs"), py::arg("params") = DecoderParams{}, py::arg("mapping") = BitMapping{});
    m.def("decode_trace", &decode_trace, py::arg("trace"), py::arg("params") = DecoderParams{},
          py::arg("mapping") = BitMapping{});

    py::class_<NgramModel>(m, "NgramModel")
        .def("order", &NgramModel::order)
        .def("alpha", &NgramModel::alpha)
        .def("vocab_size", &NgramModel::vocab_size)
        .def("probability", &NgramModel::probability, py::arg("context"), py::arg("token"))
        .def("log2_probability", &NgramModel::log2_probability, py::arg("context"),
             py::arg("token"));

    m.def("train_ngram", &train_ngram, py::arg("corpus"), py::arg("order") = 2,
          py::arg("alpha") = 1.0);
    m.def("text_anomaly_score", &text_anomaly_score, py::arg("tokens"), py::arg("model"));
    m.def("traffic_regularity_score", &traffic_regularity_score, py::arg("trace"),
          py::arg("params") = DecoderParams{});

    py::class_<RocPoint>(m, "RocPoint")
        .def_readonly("threshold", &RocPoint::threshold)
        .def_readonly("fpr", &RocPoint::fpr)
        .def_readonly("tpr", &RocPoint::tpr);

    py::class_<RocCurve>(m, "RocCurve")
        .def_readonly("points", &RocCurve::points)
        .def_readonly("auc", &RocCurve::auc);

    m.def("evaluate_roc", &evaluate_roc, py::arg("covert_scores"), py::arg("benign_scores"));

    py::enum_<DetectionMethod>(m, "DetectionMethod")
        .value("TextAnomaly", DetectionMethod::TextAnomaly)
        .value("TrafficRegularity", DetectionMethod::TrafficRegularity);

    py::enum_<Verdict>(m, "Verdict").value("Covert", Verdict::Covert).value("Benign", Verdict::Benign);

    py::class_<DetectionReport>(m, "DetectionReport")
        .def_readonly("method", &DetectionReport::method)
        .def_readonly("score", &DetectionReport::score)
        .def_readonly("threshold", &DetectionReport::threshold)
        .def_readonly("verdict", &DetectionReport::verdict)
        .def_readonly("aux", &DetectionReport::aux);

    m.def("make_detection_report", &make_detection_report, py::arg("method"), py::arg("score"),
          py::arg("threshold"), py::arg("aux") = std::map<std::string, double>{});
    m.def("percentile", &percentile, py::arg("values"), py::arg("pct"));

    py::class_<ChannelMetrics>(m, "ChannelMetrics")
        .def_readonly("ber", &ChannelMetrics::ber)
        .def_readonly("goodput_Bps", &ChannelMetrics::goodput_Bps)
        .def_readonly("symbol_rate_sps", &ChannelMetrics::symbol_rate_sps)
        .def_readonly("elapsed_s", &ChannelMetrics::elapsed_s);

    m.def(
        "ber",
        [](const std::string& sent, const std::string& received) {
            return ber(bits_from_string(sent), bits_from_string(received));
        },
        py::arg("sent"), py::arg("received"));
    m.def("goodput", &goodput, py::arg("payload_len"), py::arg("elapsed_s"));

    py::class_<SweepAxis>(m, "SweepAxis")
        .def(py::init<>())
        .def_readwrite("param", &SweepAxis::param)
        .def_readwrite("min", &SweepAxis::min)
        .def_readwrite("max", &SweepAxis::max)
        .def_readwrite("steps", &SweepAxis::steps)
        .def_readwrite("repetitions", &SweepAxis::repetitions);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("payload", &ExperimentConfig::payload)
        .def_readwrite("payload_format", &ExperimentConfig::payload_format)
        .def_readwrite("timing", &ExperimentConfig::timing)
        .def_readwrite("profile", &ExperimentConfig::profile)
        .def_readwrite("decoder", &ExperimentConfig::decoder)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("sweep", &ExperimentConfig::sweep)
        .def("payload_bytes",
             [](const ExperimentConfig& c) { return to_py_bytes(c.payload_bytes()); })
        .def("decoder_params", &ExperimentConfig::decoder_params)
        .def("validate", &ExperimentConfig::validate);

    m.def("apply_config_kv", &apply_config_kv, py::arg("config"), py::arg("key"), py::arg("value"));
    m.def("parse_config_file", &parse_config_file, py::arg("path"));

    py::class_<E2eResult>(m, "E2eResult")
        .def_property_readonly("sent_bits",
                               [](const E2eResult& r) { return bits_to_string(r.sent_bits); })
        .def_readonly("schedule", &E2eResult::schedule)
        .def_readonly("decode", &E2eResult::decode)
        .def_readonly("metrics", &E2eResult::metrics)
        .def_readonly("payload_len", &E2eResult::payload_len);

    m.def("run_e2e", &run_e2e, py::arg("config"), py::arg("seed"));

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("repetition", &SweepRow::repetition)
        .def_readonly("seed", &SweepRow::seed)
        .def_readonly("payload_len", &SweepRow::payload_len)
        .def_readonly("metrics", &SweepRow::metrics);

    m.def("run_sweep", &run_sweep, py::arg("config"));
}
