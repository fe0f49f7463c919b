"""PCAP ingestion and MAC-based per-device stream attribution.

Reads classic libpcap captures (microsecond or nanosecond variants, Ethernet
link type), decodes Ethernet/IPv4/IPv6/TCP/UDP headers, and partitions the
decoded packets into one stream per registered device MAC address.
"""

from __future__ import annotations

import ipaddress
import logging
import re
import struct
from dataclasses import dataclass

log = logging.getLogger(__name__)

ETHERTYPE_IPV4 = 0x0800
ETHERTYPE_IPV6 = 0x86DD
ETHERTYPE_ARP = 0x0806

LINKTYPE_ETHERNET = 1

GLOBAL_HEADER_LEN = 24
RECORD_HEADER_LEN = 16
ETHERNET_HEADER_LEN = 14

# Classic pcap magic bytes as they appear at the start of the file:
# (struct byte-order prefix, fractional-seconds divisor to reach microseconds)
_MAGICS = {
    b"\xd4\xc3\xb2\xa1": ("<", 1),      # little-endian, microseconds
    b"\xa1\xb2\xc3\xd4": (">", 1),      # big-endian, microseconds
    b"\x4d\x3c\xb2\xa1": ("<", 1000),   # little-endian, nanoseconds
    b"\xa1\xb2\x3c\x4d": (">", 1000),   # big-endian, nanoseconds
}

_MAC_PATTERN = re.compile(r"^[0-9a-f]{2}(?::[0-9a-f]{2}){5}$")


class MalformedCapture(Exception):
    """The capture cannot be read at all (bad magic, truncated global header,
    or an unsupported link type)."""


@dataclass(frozen=True)
class IpInfo:
    src_addr: str
    dst_addr: str
    protocol: int


@dataclass(frozen=True)
class TransportInfo:
    src_port: int
    dst_port: int
    kind: str  # "TCP" | "UDP"


@dataclass(frozen=True)
class RawPacket:
    """One captured frame, decoded through the transport layer.

    ``payload`` holds whatever remains after every decoded header; ``frame``
    keeps the raw captured bytes so a capture can be re-serialized losslessly.
    Timestamps are normalized to integer microseconds since the epoch
    regardless of the capture's native precision.
    """

    index: int
    timestamp_us: int
    src_mac: str
    dst_mac: str
    ethertype: int
    ip: IpInfo | None
    transport: TransportInfo | None
    payload: bytes
    frame: bytes

    @property
    def timestamp(self) -> float:
        """Capture time in seconds since the epoch."""
        return self.timestamp_us / 1_000_000

    @property
    def frame_len(self) -> int:
        return len(self.frame)


@dataclass
class CaptureParse:
    packets: list[RawPacket]
    warnings: list[str]


@dataclass
class DeviceStream:
    device_id: str
    mac: str
    packets: list[RawPacket]


def normalize_mac(mac: str) -> str:
    """Canonicalize a MAC address to lowercase colon-separated form.

    Accepts ``aa:bb:cc:dd:ee:ff``, ``AA-BB-...``, and bare 12-digit hex.
    Raises ValueError for anything that is not a 6-byte hardware address.
    """
    digits = re.sub(r"[:\-.]", "", mac.strip().lower())
    if len(digits) != 12 or not all(c in "0123456789abcdef" for c in digits):
        raise ValueError(f"malformed MAC address: {mac!r}")
    return ":".join(digits[i : i + 2] for i in range(0, 12, 2))


def is_valid_mac(mac: str) -> bool:
    return bool(_MAC_PATTERN.match(mac))


def _format_mac(raw: bytes) -> str:
    return ":".join(f"{b:02x}" for b in raw)


def _decode_ipv4(body: bytes) -> tuple[IpInfo, bytes] | None:
    if len(body) < 20:
        return None
    ver_ihl = body[0]
    if ver_ihl >> 4 != 4:
        return None
    header_len = (ver_ihl & 0x0F) * 4
    if header_len < 20 or len(body) < header_len:
        return None
    total_len = int.from_bytes(body[2:4], "big")
    # total_length bounds the datagram so Ethernet trailer padding is dropped
    end = min(total_len, len(body)) if total_len >= header_len else len(body)
    info = IpInfo(
        src_addr=str(ipaddress.IPv4Address(body[12:16])),
        dst_addr=str(ipaddress.IPv4Address(body[16:20])),
        protocol=body[9],
    )
    return info, body[header_len:end]


def _decode_ipv6(body: bytes) -> tuple[IpInfo, bytes] | None:
    if len(body) < 40:
        return None
    if body[0] >> 4 != 6:
        return None
    payload_len = int.from_bytes(body[4:6], "big")
    end = min(40 + payload_len, len(body))
    info = IpInfo(
        src_addr=str(ipaddress.IPv6Address(body[8:24])),
        dst_addr=str(ipaddress.IPv6Address(body[24:40])),
        protocol=body[6],
    )
    return info, body[40:end]


def _decode_transport(protocol: int, segment: bytes) -> tuple[TransportInfo, bytes] | None:
    if protocol == 6:  # TCP
        if len(segment) < 20:
            return None
        data_offset = (segment[12] >> 4) * 4
        if data_offset < 20 or len(segment) < data_offset:
            return None
        sport, dport = struct.unpack("!HH", segment[:4])
        return TransportInfo(sport, dport, "TCP"), segment[data_offset:]
    if protocol == 17:  # UDP
        if len(segment) < 8:
            return None
        sport, dport, udp_len = struct.unpack("!HHH", segment[:6])
        if udp_len < 8:
            return None
        return TransportInfo(sport, dport, "UDP"), segment[8 : min(udp_len, len(segment))]
    return None


def _decode_frame(index: int, ts_us: int, frame: bytes) -> tuple[RawPacket | None, str | None]:
    if len(frame) < ETHERNET_HEADER_LEN:
        return None, f"frame {index}: truncated Ethernet header ({len(frame)} bytes)"
    dst_mac = _format_mac(frame[0:6])
    src_mac = _format_mac(frame[6:12])
    ethertype = int.from_bytes(frame[12:14], "big")
    body = frame[ETHERNET_HEADER_LEN:]

    ip: IpInfo | None = None
    payload = body
    if ethertype == ETHERTYPE_IPV4:
        decoded = _decode_ipv4(body)
        if decoded is None:
            return None, f"frame {index}: truncated or invalid IPv4 header"
        ip, payload = decoded
    elif ethertype == ETHERTYPE_IPV6:
        decoded = _decode_ipv6(body)
        if decoded is None:
            return None, f"frame {index}: truncated or invalid IPv6 header"
        ip, payload = decoded

    transport: TransportInfo | None = None
    if ip is not None and ip.protocol in (6, 17):
        decoded_t = _decode_transport(ip.protocol, payload)
        if decoded_t is None:
            kind = "TCP" if ip.protocol == 6 else "UDP"
            return None, f"frame {index}: truncated {kind} header"
        transport, payload = decoded_t

    packet = RawPacket(
        index=index,
        timestamp_us=ts_us,
        src_mac=src_mac,
        dst_mac=dst_mac,
        ethertype=ethertype,
        ip=ip,
        transport=transport,
        payload=payload,
        frame=frame,
    )
    return packet, None


def parse_capture(data: bytes) -> CaptureParse:
    """Decode a classic libpcap capture into RawPackets.

    Frames with truncated headers are skipped and counted as warnings rather
    than aborting the parse. The returned packets are stably sorted by
    timestamp, so equal timestamps keep capture order.
    """
    if len(data) < GLOBAL_HEADER_LEN:
        raise MalformedCapture(f"truncated global header ({len(data)} bytes)")
    try:
        endian, frac_divisor = _MAGICS[data[:4]]
    except KeyError:
        raise MalformedCapture(f"unrecognized pcap magic {data[:4].hex()}") from None
    _, _, _, _, _, network = struct.unpack(endian + "HHiIII", data[4:GLOBAL_HEADER_LEN])
    if network != LINKTYPE_ETHERNET:
        raise MalformedCapture(f"unsupported link type {network} (only Ethernet is supported)")

    packets: list[RawPacket] = []
    warnings: list[str] = []
    offset = GLOBAL_HEADER_LEN
    index = 0
    while offset < len(data):
        if offset + RECORD_HEADER_LEN > len(data):
            warnings.append(f"frame {index}: truncated record header at offset {offset}")
            break
        ts_sec, ts_frac, incl_len, _ = struct.unpack(
            endian + "IIII", data[offset : offset + RECORD_HEADER_LEN]
        )
        offset += RECORD_HEADER_LEN
        if offset + incl_len > len(data):
            warnings.append(
                f"frame {index}: declared caplen {incl_len} exceeds remaining "
                f"{len(data) - offset} bytes"
            )
            break
        frame = data[offset : offset + incl_len]
        offset += incl_len
        ts_us = ts_sec * 1_000_000 + ts_frac // frac_divisor
        packet, warning = _decode_frame(index, ts_us, frame)
        index += 1
        if warning is not None:
            warnings.append(warning)
            continue
        assert packet is not None
        packets.append(packet)

    packets.sort(key=lambda p: p.timestamp_us)  # stable: capture order kept on ties
    return CaptureParse(packets=packets, warnings=warnings)


def parse_capture_file(path) -> CaptureParse:
    with open(path, "rb") as fh:
        return parse_capture(fh.read())


def split_by_device(
    packets: list[RawPacket], registry: dict[str, str]
) -> tuple[list[DeviceStream], list[RawPacket]]:
    """Partition packets into per-device streams keyed by MAC address.

    Each packet lands in exactly one stream (matched by source or destination
    MAC) or in the unattributed bucket. When both endpoints are registered the
    packet is attributed to the source device. A stream is produced for every
    registry entry, empty or not, in registry order.
    """
    if not registry:
        log.warning("empty device registry: all %d packets unattributed", len(packets))
        return [], list(packets)
    streams: dict[str, DeviceStream] = {}
    for mac, device_id in registry.items():
        streams[normalize_mac(mac)] = DeviceStream(device_id=device_id, mac=normalize_mac(mac), packets=[])
    unattributed: list[RawPacket] = []
    for packet in packets:
        if packet.src_mac in streams:
            streams[packet.src_mac].packets.append(packet)
        elif packet.dst_mac in streams:
            streams[packet.dst_mac].packets.append(packet)
        else:
            unattributed.append(packet)
    return list(streams.values()), unattributed
