"""Traffic-shape analysis: activity periods, endpoint profiles, periodicity.

Even fully encrypted devices reveal usage behavior through when they talk
and whom they talk to; this module extracts that second-order evidence from
a device stream using only in-capture information.
"""

from __future__ import annotations

import ipaddress
import statistics
import struct
from collections import Counter
from dataclasses import dataclass, field

from .capture import DeviceStream, RawPacket
from .leaks import matches_vendor
from .payload import AppPayload, parse_http


@dataclass
class ActivityPeriod:
    device_id: str
    start: float
    end: float
    packet_count: int
    bytes_total: int
    endpoints: set[tuple[str, str | None]] = field(default_factory=set)


@dataclass
class EndpointProfile:
    address: str
    hostname: str | None
    packet_count: int
    vendor_flag: bool


@dataclass(frozen=True)
class PeriodicityHint:
    median_interval: float
    dispersion: float


def remote_address(packet: RawPacket, device_mac: str) -> str | None:
    """The non-device end of an IP packet, relative to the device MAC."""
    if packet.ip is None:
        return None
    return packet.ip.dst_addr if packet.src_mac == device_mac else packet.ip.src_addr


def activity_periods(
    stream: DeviceStream,
    gap_threshold: float = 60.0,
    hostnames: dict[str, str] | None = None,
) -> list[ActivityPeriod]:
    """Greedy segmentation of a time-sorted stream into usage sessions.

    Consecutive packets whose inter-arrival time is at most ``gap_threshold``
    seconds share a period; a single packet forms a zero-duration period.
    """
    if not stream.packets:
        return []
    hostnames = hostnames or {}
    gap_us = gap_threshold * 1_000_000

    def finish(group: list[RawPacket]) -> ActivityPeriod:
        endpoints = set()
        for packet in group:
            address = remote_address(packet, stream.mac)
            if address is not None:
                endpoints.add((address, hostnames.get(address)))
        return ActivityPeriod(
            device_id=stream.device_id,
            start=group[0].timestamp,
            end=group[-1].timestamp,
            packet_count=len(group),
            bytes_total=sum(p.frame_len for p in group),
            endpoints=endpoints,
        )

    periods: list[ActivityPeriod] = []
    group = [stream.packets[0]]
    for packet in stream.packets[1:]:
        if packet.timestamp_us - group[-1].timestamp_us <= gap_us:
            group.append(packet)
        else:
            periods.append(finish(group))
            group = [packet]
    periods.append(finish(group))
    return periods


def _decode_dns_name(data: bytes, offset: int) -> tuple[str, int]:
    """Decode a (possibly compressed) DNS name; returns (name, next offset)."""
    labels: list[str] = []
    jumps = 0
    next_offset = -1
    while True:
        if offset >= len(data) or jumps > 32:
            break
        length = data[offset]
        if length == 0:
            offset += 1
            break
        if length & 0xC0 == 0xC0:  # compression pointer
            if offset + 1 >= len(data):
                break
            pointer = ((length & 0x3F) << 8) | data[offset + 1]
            if next_offset < 0:
                next_offset = offset + 2
            offset = pointer
            jumps += 1
            continue
        labels.append(data[offset + 1 : offset + 1 + length].decode("latin-1"))
        offset += 1 + length
    return ".".join(labels), (next_offset if next_offset >= 0 else offset)


def _parse_dns_response(data: bytes) -> dict[str, str]:
    """address -> hostname pairs from the answer section of one response."""
    if len(data) < 12:
        return {}
    flags, qdcount, ancount = struct.unpack("!HHH", data[2:8])
    if not flags & 0x8000:  # not a response
        return {}
    offset = 12
    for _ in range(qdcount):
        _, offset = _decode_dns_name(data, offset)
        offset += 4  # qtype + qclass
    answers: dict[str, str] = {}
    for _ in range(ancount):
        if offset >= len(data):
            break
        name, offset = _decode_dns_name(data, offset)
        if offset + 10 > len(data):
            break
        rtype, _, _, rdlength = struct.unpack("!HHIH", data[offset : offset + 10])
        offset += 10
        rdata = data[offset : offset + rdlength]
        offset += rdlength
        if rtype == 1 and rdlength == 4:  # A
            answers.setdefault(str(ipaddress.IPv4Address(rdata)), name)
        elif rtype == 28 and rdlength == 16:  # AAAA
            answers.setdefault(str(ipaddress.IPv6Address(rdata)), name)
    return answers


def extract_dns_answers(packets: list[RawPacket]) -> dict[str, str]:
    """address -> hostname map from every DNS response in a capture."""
    answers: dict[str, str] = {}
    for packet in packets:
        if packet.transport is None or packet.transport.kind != "UDP":
            continue
        if packet.transport.src_port != 53:
            continue
        for address, hostname in _parse_dns_response(packet.payload).items():
            answers.setdefault(address, hostname)
    return answers


def resolve_hostnames(stream: DeviceStream, dns_answers: dict[str, str] | None = None) -> dict[str, str]:
    """Merge DNS answers with HTTP Host evidence from the stream itself."""
    hostmap = dict(dns_answers or {})
    for packet in stream.packets:
        if packet.transport is None or packet.transport.kind != "TCP" or not packet.payload:
            continue
        address = remote_address(packet, stream.mac)
        if address is None or address in hostmap:
            continue
        message = parse_http(
            AppPayload(packet.index, "outbound", (0, 0), packet.payload, "TCP")
        )
        if message is not None and message.host:
            hostmap[address] = message.host
    return hostmap


def endpoint_profiles(
    stream: DeviceStream,
    dns_answers: dict[str, str] | None = None,
    vendor_patterns=(),
) -> list[EndpointProfile]:
    """One profile per distinct remote address the device exchanged IP
    traffic with, in first-seen order."""
    counts: Counter[str] = Counter()
    order: list[str] = []
    for packet in stream.packets:
        address = remote_address(packet, stream.mac)
        if address is None:
            continue
        if address not in counts:
            order.append(address)
        counts[address] += 1
    hostmap = resolve_hostnames(stream, dns_answers)
    profiles = []
    for address in order:
        hostname = hostmap.get(address)
        profiles.append(
            EndpointProfile(
                address=address,
                hostname=hostname,
                packet_count=counts[address],
                vendor_flag=matches_vendor(hostname, vendor_patterns)
                or matches_vendor(address, vendor_patterns),
            )
        )
    return profiles


def periodicity_hint(periods: list[ActivityPeriod]) -> PeriodicityHint | None:
    """Median and median-absolute-deviation of successive period starts.

    Robust at the handful-of-sessions scale typical of desk captures; None
    when fewer than three periods exist.
    """
    if len(periods) < 3:
        return None
    starts = [p.start for p in periods]
    intervals = [later - earlier for earlier, later in zip(starts, starts[1:])]
    median = statistics.median(intervals)
    dispersion = statistics.median(abs(value - median) for value in intervals)
    return PeriodicityHint(median_interval=median, dispersion=dispersion)
