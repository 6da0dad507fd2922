"""Smoke tests for the istegsim Python module.

The heavy verification lives in the C++ test suite; these only prove the
bindings expose working, deterministic entry points.
"""

import pytest

import istegsim


def test_module_constants():
    assert istegsim.FRAME_PREAMBLE == 0xAB
    assert istegsim.MAX_PAYLOAD_BYTES == 255
    assert istegsim.COVERT_TOKEN == "call"


def test_crc8_known_vector():
    assert istegsim.crc8(b"123456789") == 0xF4
    assert istegsim.crc8(b"") == 0x00


def test_frame_deframe_round_trip():
    bits = istegsim.frame_payload(b"\xde\xad\xbe\xef")
    assert set(bits) <= {"0", "1"}
    assert bits.startswith("10101011")
    status, payload = istegsim.deframe_bits(bits)
    assert status == "Ok"
    assert payload == b"\xde\xad\xbe\xef"


def test_full_pipeline_round_trip():
    payload = bytes(range(16))
    bits = istegsim.frame_payload(payload)
    schedule = istegsim.bits_to_schedule(bits)
    trace = istegsim.synthesize_trace(schedule, istegsim.ChannelProfile(), 0)
    result = istegsim.decode_trace(trace)
    assert result.ok()
    assert result.payload == payload
    assert result.confidence == pytest.approx(1.0)


def test_synthesis_is_deterministic():
    schedule = istegsim.bits_to_schedule("101101")
    profile = istegsim.ChannelProfile()
    profile.jitter_std_s = 0.05
    profile.loss_prob = 0.1
    first = istegsim.synthesize_trace(schedule, profile, 42)
    second = istegsim.synthesize_trace(schedule, profile, 42)
    assert [(r.t_s, r.size) for r in first.records] == [(r.t_s, r.size) for r in second.records]
    other = istegsim.synthesize_trace(schedule, profile, 43)
    assert [(r.t_s, r.size) for r in first.records] != [(r.t_s, r.size) for r in other.records]


def test_classification_boundaries():
    assert istegsim.classify_pdu(800) == istegsim.PduClass.Voice
    assert istegsim.classify_pdu(900) == istegsim.PduClass.Voice
    assert istegsim.classify_pdu(100) == istegsim.PduClass.Silence
    assert istegsim.classify_pdu(700) == istegsim.PduClass.Silence
    assert istegsim.classify_pdu(750) == istegsim.PduClass.Unknown


def test_roc_sanity():
    separated = istegsim.evaluate_roc([0.9, 0.8, 0.95], [0.1, 0.2, 0.3])
    assert separated.auc == pytest.approx(1.0)
    same = istegsim.evaluate_roc([0.5, 0.6], [0.5, 0.6])
    assert same.auc == pytest.approx(0.5)


def test_detectors_spot_the_covert_pattern():
    schedule = istegsim.bits_to_schedule(istegsim.frame_payload(b"\x12\x34\x56\x78"))
    trace = istegsim.synthesize_trace(schedule, istegsim.ChannelProfile(), 1)
    assert istegsim.traffic_regularity_score(trace) >= 0.95

    corpus = [["please", "call", "mom"], ["set", "a", "timer"], ["play", "some", "jazz"]]
    model = istegsim.train_ngram(corpus, 2, 1.0)
    covert = istegsim.text_anomaly_score(["call"] * 10, model)
    natural = istegsim.text_anomaly_score(["please", "call", "mom"], model)
    assert covert > natural


def test_experiment_config_e2e():
    config = istegsim.ExperimentConfig()
    istegsim.apply_config_kv(config, "payload", "cafebabe")
    istegsim.apply_config_kv(config, "seed", "7")
    result = istegsim.run_e2e(config, config.seed)
    assert result.decode.ok()
    assert result.metrics.ber == 0.0
    assert result.payload_len == 4

    config.sweep.param = "jitter_std_s"
    config.sweep.min = 0.0
    config.sweep.max = 0.1
    config.sweep.steps = 2
    config.sweep.repetitions = 3
    rows = istegsim.run_sweep(config)
    assert len(rows) == 6
    assert [row.seed for row in rows] == [7, 8, 9, 7, 8, 9]
