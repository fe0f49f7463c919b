"""Payload extraction, TLS detection, and HTTP parsing."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medleak.capture import DeviceStream, IpInfo, RawPacket, TransportInfo
from medleak.payload import (
    AppPayload,
    HttpMessage,
    detect_tls,
    extract_payloads,
    looks_like_http_continuation,
    parse_http,
)

DEV = "00:24:e4:1b:20:31"
AP = "b8:27:eb:5a:10:04"


def _packet(index, payload, kind="TCP", src=DEV, dst=AP, sport=40000, dport=80, with_transport=True):
    return RawPacket(
        index=index,
        timestamp_us=index * 1000,
        src_mac=src,
        dst_mac=dst,
        ethertype=0x0800,
        ip=IpInfo("192.168.4.21", "89.30.121.52", 6 if kind == "TCP" else 17),
        transport=TransportInfo(sport, dport, kind) if with_transport else None,
        payload=payload,
        frame=b"\x00" * (54 + len(payload)),
    )


def _payload(data, sport=40000, dport=80, direction="outbound", kind="TCP", index=0):
    return AppPayload(index, direction, (sport, dport), data, kind)


class TestExtractPayloads:
    def test_empty_tcp_segments_are_filtered(self):
        packets = [
            _packet(0, b"hello"),
            _packet(1, b""),  # bare ACK
            _packet(2, b"world"),
            _packet(3, b""),
            _packet(4, b"!"),
        ]
        stream = DeviceStream("monitor", DEV, packets)
        extracted = extract_payloads(stream)
        assert [p.packet_index for p in extracted] == [0, 2, 4]

    def test_udp_dns_query_payload(self):
        dns = b"\x3a\x21\x01\x00\x00\x01\x00\x00\x00\x00\x00\x00\x07scalews\x08withings\x03net\x00\x00\x01\x00\x01"
        stream = DeviceStream("monitor", DEV, [_packet(0, dns, kind="UDP", sport=42333, dport=53)])
        extracted = extract_payloads(stream)
        assert len(extracted) == 1
        assert extracted[0].data == dns
        assert extracted[0].transport_kind == "UDP"

    def test_packet_without_transport_is_excluded(self):
        arp = _packet(0, b"\x00\x01\x08\x00", with_transport=False)
        assert extract_payloads(DeviceStream("monitor", DEV, [arp])) == []

    def test_direction_follows_device_mac(self):
        packets = [_packet(0, b"out", src=DEV, dst=AP), _packet(1, b"in", src=AP, dst=DEV)]
        extracted = extract_payloads(DeviceStream("monitor", DEV, packets))
        assert [p.direction for p in extracted] == ["outbound", "inbound"]


class TestDetectTls:
    def test_port_and_record(self):
        verdict = detect_tls(_payload(b"\x17\x03\x03\x01\x00" + b"\x00" * 16, dport=443))
        assert verdict.is_tls
        assert verdict.reason == "both"
        assert verdict.version == (3, 3)

    def test_plain_http_on_port_80(self):
        verdict = detect_tls(_payload(b"GET / HTTP/1.1\r\n\r\n", dport=80))
        assert not verdict.is_tls
        assert verdict.reason is None
        assert verdict.version is None

    def test_record_on_nonstandard_port(self):
        verdict = detect_tls(_payload(b"\x16\x03\x01\x00\xa0" + b"\x00" * 8, dport=8883))
        assert verdict.is_tls
        assert verdict.reason == "record-based"
        assert verdict.version == (3, 1)

    def test_port_443_without_record_shape(self):
        verdict = detect_tls(_payload(b"binary-but-not-tls", sport=443))
        assert verdict.is_tls
        assert verdict.reason == "port-based"
        assert verdict.version is None

    def test_bad_version_minor_is_not_a_record(self):
        assert not detect_tls(_payload(b"\x16\x03\x09\x00\x10", dport=80)).is_tls

    def test_short_payload_cannot_match_record_rule(self):
        assert not detect_tls(_payload(b"\x16\x03", dport=80)).is_tls

    @settings(max_examples=50)
    @given(
        data=st.binary(min_size=3, max_size=64),
        tail=st.binary(max_size=64),
        sport=st.integers(1, 65535),
        dport=st.integers(1, 65535),
    )
    def test_depends_only_on_ports_and_first_three_bytes(self, data, tail, sport, dport):
        a = detect_tls(_payload(data, sport=sport, dport=dport))
        b = detect_tls(_payload(data + tail, sport=sport, dport=dport))
        assert a == b


FIG_REQUEST = (
    b"GET /probe?b=blood_pressure,heart_pulse HTTP/1.1\r\n"
    b"Host: scalews.withings.net\r\n"
    b"Cookie: current_user=48213; token=abc\r\n"
    b"\r\n"
)


class TestParseHttp:
    def test_request_with_health_terms(self):
        message = parse_http(_payload(FIG_REQUEST))
        assert message.kind == "request"
        assert message.method == "GET"
        assert "blood_pressure" in message.url
        assert message.host == "scalews.withings.net"
        assert ("current_user", "48213") in message.cookies
        assert ("token", "abc") in message.cookies

    def test_response(self):
        raw = b"HTTP/1.1 200 OK\r\nContent-Type: image/jpeg\r\n\r\n\xff\xd8\xff\xe0"
        message = parse_http(_payload(raw, sport=80, dport=40000, direction="inbound"))
        assert message.kind == "response"
        assert message.status_code == 200
        assert ("Content-Type", "image/jpeg") in message.headers

    def test_dns_bytes_are_not_http(self):
        assert parse_http(_payload(b"\x3a\x21\x81\x80\x00\x01\x00\x01")) is None

    def test_unknown_method_is_not_http(self):
        assert parse_http(_payload(b"FROB / HTTP/1.1\r\n\r\n")) is None

    def test_status_code_out_of_range_rejected(self):
        assert parse_http(_payload(b"HTTP/1.1 999 Nope\r\n\r\n")) is None
        assert parse_http(_payload(b"HTTP/1.1 099 Nope\r\n\r\n")) is None

    def test_malformed_header_lines_are_skipped(self):
        raw = b"GET /x HTTP/1.1\r\nHost: h.example\r\ngarbage line no colon\r\nX-Ok: 1\r\n\r\n"
        message = parse_http(_payload(raw))
        assert message.host == "h.example"
        assert ("X-Ok", "1") in message.headers
        assert all(name != "garbage line no colon" for name, _ in message.headers)

    def test_set_cookie_takes_first_segment_only(self):
        raw = b"HTTP/1.1 200 OK\r\nSet-Cookie: sid=99; Path=/; HttpOnly\r\n\r\n"
        message = parse_http(_payload(raw))
        assert message.cookies == [("sid", "99")]

    def test_request_round_trip_on_parsed_subset(self):
        message = parse_http(_payload(FIG_REQUEST))
        serialized = f"{message.method} {message.url} HTTP/1.1\r\n"
        serialized += "".join(f"{name}: {value}\r\n" for name, value in message.headers)
        serialized += "\r\n"
        reparsed = parse_http(_payload(serialized.encode("latin-1")))
        assert reparsed == message


class TestContinuationHeuristic:
    def test_header_fragment_looks_like_continuation(self):
        assert looks_like_http_continuation(b"Accept-Language: en-us\r\nCookie: a=1\r\n\r\n")

    def test_full_request_is_not_a_continuation(self):
        assert not looks_like_http_continuation(FIG_REQUEST)

    def test_binary_is_not_a_continuation(self):
        assert not looks_like_http_continuation(b"\x00\x01\x02\x03\xfe\xff")
