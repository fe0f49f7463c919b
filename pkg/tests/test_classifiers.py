"""Classifier correctness: analytic anchors, brute-force oracle agreement,
threshold tie rules, consensus logic, and distributional invariants."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medleak.classifiers import (
    ClassifierConfig,
    EmptyCorpus,
    EmptyPayload,
    chi_squared,
    classify,
    classify_ascii,
    classify_chi,
    classify_entropy,
    compare_methods,
    histogram,
    shannon_entropy,
)
from medleak.corpus import CorpusSpec, LabeledPayload, deterministic_bytes, generate_corpus
from medleak.payload import AppPayload

from _oracles import chi_squared_double_loop_oracle, chi_squared_two_pass_oracle, entropy_oracle

ALL_256_ONCE = bytes(range(256))


def _payload(data, index=0):
    return AppPayload(index, "outbound", (40000, 80), data, "TCP")


class TestHistogram:
    def test_single_value(self):
        h = histogram(b"AAAA")
        assert h.counts[65] == 4
        assert h.total == 4
        assert sum(h.counts) == 4

    def test_uniform(self):
        h = histogram(ALL_256_ONCE)
        assert all(c == 1 for c in h.counts)
        assert h.total == 256
        assert h.expected_uniform == 1.0

    def test_two_symbols(self):
        h = histogram(b"abab")
        assert h.counts[97] == 2
        assert h.counts[98] == 2

    def test_probabilities_sum_to_one(self):
        h = histogram(b"some arbitrary payload \x00\xff")
        assert abs(sum(h.probabilities) - 1.0) < 1e-12

    def test_empty_raises(self):
        with pytest.raises(EmptyPayload):
            histogram(b"")


class TestAscii:
    def test_http_request_is_ascii(self):
        assert classify_ascii(b"GET /index.html HTTP/1.1") is True

    def test_high_byte_fails(self):
        assert classify_ascii(b"caf\xc3\xa9") is False

    def test_boundary_0x7f_passes(self):
        assert classify_ascii(b"\x7f") is True

    def test_boundary_0x80_fails(self):
        assert classify_ascii(b"\x80") is False

    def test_empty_raises(self):
        with pytest.raises(EmptyPayload):
            classify_ascii(b"")


class TestEntropyAnchors:
    def test_single_symbol_is_zero(self):
        assert shannon_entropy(b"AAAA") == pytest.approx(0.0, abs=1e-12)

    def test_uniform_is_eight(self):
        assert shannon_entropy(ALL_256_ONCE) == pytest.approx(8.0, abs=1e-12)

    def test_two_equiprobable_symbols_is_one(self):
        assert shannon_entropy(b"abab") == pytest.approx(1.0, abs=1e-12)

    def test_empty_raises(self):
        with pytest.raises(EmptyPayload):
            shannon_entropy(b"")


class TestChiAnchors:
    def test_uniform_256_is_zero(self):
        assert chi_squared(ALL_256_ONCE) == pytest.approx(0.0, abs=1e-12)

    def test_256_identical_bytes(self):
        # one bin (256-1)^2/1 plus 255 bins (0-1)^2/1 = 65025 + 255
        assert chi_squared(b"\x41" * 256) == pytest.approx(65280.0, abs=1e-12)

    def test_empty_raises(self):
        with pytest.raises(EmptyPayload):
            chi_squared(b"")


class TestOracleAgreement:
    def test_entropy_matches_brute_force_on_random_payloads(self):
        rng = random.Random(1311)
        for _ in range(200):
            data = rng.randbytes(rng.randint(1, 4096))
            assert shannon_entropy(data) == pytest.approx(entropy_oracle(data), abs=1e-9)

    def test_chi_matches_two_pass_oracle_on_random_payloads(self):
        rng = random.Random(1312)
        for _ in range(200):
            data = rng.randbytes(rng.randint(1, 4096))
            assert chi_squared(data) == pytest.approx(chi_squared_two_pass_oracle(data), abs=1e-9)

    def test_chi_matches_double_loop_oracle_on_small_payloads(self):
        rng = random.Random(1313)
        for _ in range(100):
            data = rng.randbytes(32)
            assert chi_squared(data) == pytest.approx(chi_squared_double_loop_oracle(data), abs=1e-9)


class TestThresholdRules:
    def test_high_entropy_is_presumed_encrypted(self):
        data = deterministic_bytes(7, "high-entropy", 4096)  # measured H well above 7.5
        assert shannon_entropy(data) > 7.5
        assert classify_entropy(data) is False

    def test_low_entropy_is_cleartext(self):
        assert classify_entropy(b"AAAA") is True

    def test_entropy_tie_counts_as_encrypted(self):
        data = ALL_256_ONCE  # entropy exactly 8.0
        assert classify_entropy(data, threshold=8.0) is False
        assert classify_entropy(data, threshold=8.0 + 1e-9) is True

    def test_chi_tie_counts_as_encrypted(self):
        data = b"\x41" * 256  # chi-squared exactly 65280
        assert classify_chi(data, threshold=65280.0) is False
        assert classify_chi(data, threshold=65279.0) is True

    def test_chi_uniform_payload_not_flagged(self):
        assert classify_chi(ALL_256_ONCE) is False

    def test_english_http_requests_exceed_chi_threshold(self):
        corpus = generate_corpus(CorpusSpec(30, 1, (256, 600), seed=11))
        cleartext = [item for item in corpus if item.label == "cleartext"]
        assert any(item.generator_note.startswith("http-request") for item in cleartext)
        for item in cleartext:
            assert chi_squared_two_pass_oracle(item.data) > 1000
            assert classify_chi(item.data) is True

    def test_pseudorandom_2048_bytes_never_flagged_by_chi(self):
        rng = random.Random(4242)
        assert not any(classify_chi(rng.randbytes(2048)) for _ in range(1000))


class TestClassifyConsensus:
    def test_http_payload_is_cleartext(self):
        raw = (
            b"GET /probe?b=blood_pressure,heart_pulse&withings_mobile_app=ios_healthmate HTTP/1.1\r\n"
            b"Host: scalews.withings.net\r\n"
            b"User-Agent: HealthMate/2.1.4 (iPhone; iOS 10.2)\r\n"
            b"Cookie: current_user=48213; session_token=9f27c44ab31e\r\n"
            b"Accept: */*\r\nAccept-Language: en-us\r\nConnection: keep-alive\r\n\r\n"
        )
        assert classify(_payload(raw)).consensus == "cleartext"

    def test_pseudorandom_payload_is_encrypted(self):
        data = deterministic_bytes(8, "enc", 2048)
        result = classify(_payload(data))
        assert result.consensus == "encrypted"
        assert result.ascii_verdict is False

    def test_short_ascii_payload_falls_back_to_cleartext(self):
        result = classify(_payload(b"user=bob42"))
        assert result.consensus == "cleartext"

    def test_short_binary_payload_is_indeterminate(self):
        result = classify(_payload(b"\x81\x80\x00\x01\x00\x02"))
        assert result.consensus == "indeterminate"

    def test_decision_method_is_configurable(self):
        # text whose chi is low at this length but entropy is low too:
        # entropy method says cleartext, chi method may disagree
        data = deterministic_bytes(9, "enc2", 100)
        by_entropy = classify(_payload(data), ClassifierConfig(decision_method="entropy"))
        by_chi = classify(_payload(data), ClassifierConfig(decision_method="chi_squared"))
        assert by_entropy.entropy_verdict == (by_entropy.consensus == "cleartext")
        assert by_chi.chi_verdict == (by_chi.consensus == "cleartext")

    def test_unknown_decision_method_raises(self):
        with pytest.raises(ValueError):
            classify(_payload(b"x" * 100), ClassifierConfig(decision_method="coin-flip"))

    def test_deterministic(self):
        data = deterministic_bytes(10, "det", 512)
        assert classify(_payload(data)) == classify(_payload(data))

    def test_empty_raises(self):
        with pytest.raises(EmptyPayload):
            classify(_payload(b""))


class TestCompareMethods:
    def test_all_encrypted_nothing_flagged(self):
        corpus = [
            LabeledPayload(deterministic_bytes(3, f"e{i}", 2048), "encrypted", "xof", 3) for i in range(20)
        ]
        report = compare_methods(corpus)
        for stats in report.per_method.values():
            assert stats.precision is None
            assert stats.fraction_flagged == 0.0
            assert stats.true_positives == 0

    def test_single_cleartext_item_flagged_by_all(self):
        text = ("GET /api/v2/status?id=4711 HTTP/1.1\r\nHost: sync.example\r\n\r\n" + "status ok " * 60).encode()
        assert len(text) >= 256
        report = compare_methods([LabeledPayload(text, "cleartext", "http", 1)])
        for stats in report.per_method.values():
            assert stats.precision == 1.0
            assert stats.fraction_flagged == 1.0

    def test_empty_corpus_raises(self):
        with pytest.raises(EmptyCorpus):
            compare_methods([])

    def test_counts_reconcile(self):
        corpus = generate_corpus(CorpusSpec(50, 50, (64, 512), seed=5))
        report = compare_methods(corpus)
        for stats in report.per_method.values():
            assert stats.flagged == stats.true_positives + stats.false_positives
            assert stats.true_positives + stats.false_negatives == 50
            assert stats.total == 100


# --- invariants ------------------------------------------------------------

@given(data=st.binary(min_size=1, max_size=2048))
def test_entropy_bounds_and_zero_condition(data):
    h = shannon_entropy(data)
    assert 0.0 <= h <= 8.0
    assert (h == 0.0) == (len(set(data)) == 1)


@given(data=st.binary(min_size=1, max_size=1024), seed=st.integers(0, 2**16))
def test_permutation_invariance(data, seed):
    mixed = bytearray(data)
    random.Random(seed).shuffle(mixed)
    mixed = bytes(mixed)
    assert shannon_entropy(mixed) == shannon_entropy(data)
    assert chi_squared(mixed) == chi_squared(data)


@given(data=st.binary(min_size=1, max_size=1024))
def test_chi_nonnegative_and_zero_iff_uniform(data):
    chi = chi_squared(data)
    assert chi >= 0.0
    counts = histogram(data).counts
    all_equal = len(set(counts)) == 1
    assert (chi == 0.0) == all_equal


@given(repeats=st.integers(min_value=1, max_value=4), seed=st.integers(0, 2**16))
def test_entropy_is_eight_iff_all_values_equally_frequent(repeats, seed):
    data = bytearray(ALL_256_ONCE * repeats)
    random.Random(seed).shuffle(data)
    assert shannon_entropy(bytes(data)) == pytest.approx(8.0, abs=1e-12)
    skewed = bytes(data) + b"\x42"  # one extra byte breaks uniformity
    assert shannon_entropy(skewed) < 8.0


@given(data=st.binary(min_size=1, max_size=512), high_byte=st.integers(128, 255))
def test_ascii_flips_false_with_high_byte_and_never_back(data, high_byte):
    extended = data + bytes([high_byte])
    assert classify_ascii(extended) is False
    if not classify_ascii(data):
        assert classify_ascii(data + b"ascii tail") is False


@given(data=st.binary(min_size=1, max_size=1024))
def test_self_concatenation_keeps_entropy(data):
    assert shannon_entropy(data + data) == shannon_entropy(data)
