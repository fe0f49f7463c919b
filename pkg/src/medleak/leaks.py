"""Mining cleartext payloads for privacy leaks.

Covers dictionary hits (medical terms, first names, PII field names) plus
structural HTTP tells: sensitive words in URLs and cookies, vendor-branded
endpoints, user-identifier keys, and the tell-tale image GET that follows a
measurement upload.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fnmatch import fnmatchcase

from .classifiers import CLEARTEXT, ClassificationResult
from .payload import AppPayload, HttpMessage, detect_tls

DICTIONARY_NAMES = ("medical-terms", "first-names", "pii-fields")

SEVERITY_INFO = "info"
SEVERITY_WARN = "warn"
SEVERITY_HIGH = "high"

CATEGORIES = (
    "dictionary-medical",
    "dictionary-name",
    "dictionary-pii",
    "url-leak",
    "cookie-leak",
    "vendor-identifier",
    "image-get-signature",
    "user-identifier",
)

DEFAULT_IDENTIFIER_KEYS = frozenset({"current_user", "userid", "uid"})
IMAGE_EXTENSIONS = (".jpg", ".jpeg", ".png", ".gif")

# Two-letter tokens ("al", "jo") produce floods of bogus name hits.
MIN_NAME_TOKEN_LEN = 3
CONTEXT_LEN = 120
_MATCH_TEXT_CAP = 100

_CATEGORY_BY_DICT = {
    "medical-terms": "dictionary-medical",
    "first-names": "dictionary-name",
    "pii-fields": "dictionary-pii",
}
_SEVERITY_BY_DICT = {
    "medical-terms": SEVERITY_HIGH,
    "first-names": SEVERITY_WARN,
    "pii-fields": SEVERITY_WARN,
}

_WORD = re.compile(r"[a-z0-9]+(?:[_\-][a-z0-9]+)*")
_JOINERS = re.compile(r"[_\-]+")
_ALPHA_OR_DIGIT_RUN = re.compile(r"[a-z]+|[0-9]+")


@dataclass(frozen=True)
class Dictionary:
    """A named set of lowercase terms (single- or multi-word) to search for."""

    name: str
    entries: frozenset[str]
    source_note: str = ""

    def __post_init__(self) -> None:
        if self.name not in DICTIONARY_NAMES:
            raise ValueError(f"unknown dictionary name: {self.name!r}")
        if not self.entries:
            raise ValueError(f"dictionary {self.name!r} has no entries")
        for entry in self.entries:
            if entry != entry.strip() or entry != entry.lower() or not entry:
                raise ValueError(f"dictionary {self.name!r}: bad entry {entry!r}")


@dataclass(frozen=True)
class LeakFinding:
    packet_index: int
    category: str
    matched_text: str
    context: str
    severity: str


@dataclass(frozen=True)
class TimedMessage:
    """An HTTP message paired with the capture time of its packet."""

    timestamp: float
    packet_index: int
    message: HttpMessage
    outbound: bool
    vendor_endpoint: bool = False
    payload: bytes = b""


def normalize_text(text: str) -> str:
    """Lowercase and collapse ``_``/``-`` runs to single spaces.

    Device firmware writes "blood_pressure" where the dictionary says
    "blood pressure"; all matching and evidence relocation happens in this
    normalized space.
    """
    return _JOINERS.sub(" ", text.lower())


def payload_text(data: bytes) -> str:
    return data.decode("latin-1")


def tokenize(data: bytes) -> list[str]:
    """Lowercased tokens of a cleartext payload.

    Splits on non-alphanumeric delimiters but keeps ``_``/``-``-joined words
    together, additionally emitting the space-normalized form and the
    individual components; a secondary pass splits digits from letters
    ("alice123" also yields "alice").
    """
    text = payload_text(data).lower()
    tokens: list[str] = []
    for word in _WORD.findall(text):
        tokens.append(word)
        if "_" in word or "-" in word:
            tokens.append(_JOINERS.sub(" ", word))
            parts = _JOINERS.split(word)
            tokens.extend(parts)
        else:
            parts = [word]
        for part in parts:
            runs = _ALPHA_OR_DIGIT_RUN.findall(part)
            if len(runs) > 1:
                tokens.extend(runs)
    return tokens


def _evidence(normalized_payload: str, matched: str) -> tuple[str, str]:
    """Clamp matched text and cut a context window that contains it."""
    matched = matched[:_MATCH_TEXT_CAP]
    at = normalized_payload.find(matched)
    if at < 0:
        return matched, matched
    start = max(0, at - (CONTEXT_LEN - len(matched)) // 2)
    if start + CONTEXT_LEN < at + len(matched):
        start = at
    return matched, normalized_payload[start : start + CONTEXT_LEN]


def relocate(finding: LeakFinding, data: bytes) -> bool:
    """Independently re-locate a finding's evidence in its payload."""
    return normalize_text(finding.matched_text) in normalize_text(payload_text(data))


def dictionary_match(
    tokens: list[str],
    dictionaries: list[Dictionary],
    packet_index: int = 0,
    payload: bytes = b"",
) -> list[LeakFinding]:
    """One finding per distinct (token, dictionary) hit.

    Medical-term hits are high severity; name and PII hits warn. Name
    matching skips tokens shorter than MIN_NAME_TOKEN_LEN.
    """
    normalized = normalize_text(payload_text(payload)) if payload else ""
    findings: list[LeakFinding] = []
    seen: set[tuple[str, str]] = set()
    for dictionary in dictionaries:
        for token in tokens:
            if dictionary.name == "first-names" and len(token) < MIN_NAME_TOKEN_LEN:
                continue
            if token not in dictionary.entries or (token, dictionary.name) in seen:
                continue
            seen.add((token, dictionary.name))
            matched, context = _evidence(normalized, token)
            findings.append(
                LeakFinding(
                    packet_index=packet_index,
                    category=_CATEGORY_BY_DICT[dictionary.name],
                    matched_text=matched,
                    context=context,
                    severity=_SEVERITY_BY_DICT[dictionary.name],
                )
            )
    return findings


def scan_cleartext_payload(
    payload: AppPayload,
    verdict: ClassificationResult,
    dictionaries: list[Dictionary],
) -> list[LeakFinding]:
    """Dictionary-mine one payload that already passed cleartext
    classification. Refuses TLS or non-cleartext payloads outright."""
    if detect_tls(payload).is_tls:
        raise ValueError("leak scan refused: payload is TLS")
    if verdict.consensus != CLEARTEXT:
        raise ValueError(f"leak scan refused: payload classified {verdict.consensus}")
    return dictionary_match(
        tokenize(payload.data), dictionaries, packet_index=payload.packet_index, payload=payload.data
    )


def matches_vendor(subject: str | None, vendor_patterns) -> bool:
    if not subject:
        return False
    lowered = subject.lower()
    return any(fnmatchcase(lowered, pattern.lower()) for pattern in vendor_patterns)


def _query_keys(url: str) -> list[str]:
    # raw split, no percent-decoding: evidence must stay relocatable as-is
    if "?" not in url:
        return []
    query = url.split("?", 1)[1]
    return [part.split("=", 1)[0] for part in query.split("&") if part]


def http_leak_scan(
    message: HttpMessage,
    vendor_patterns,
    dictionaries: list[Dictionary] = (),
    identifier_keys: frozenset[str] = DEFAULT_IDENTIFIER_KEYS,
    packet_index: int = 0,
    payload: bytes = b"",
) -> list[LeakFinding]:
    """Structural HTTP leak checks on one parsed message.

    - url-leak / cookie-leak: dictionary hits inside the URL or cookies
    - vendor-identifier: host or URL matches a vendor pattern
    - user-identifier: cookie/query key is a configured identifier key
    """
    normalized = normalize_text(payload_text(payload)) if payload else ""
    findings: list[LeakFinding] = []

    def add(category: str, matched: str, severity: str) -> None:
        matched_text, context = _evidence(normalized, normalize_text(matched))
        findings.append(
            LeakFinding(
                packet_index=packet_index,
                category=category,
                matched_text=matched_text,
                context=context,
                severity=severity,
            )
        )

    url = message.url or ""
    if url:
        seen: set[tuple[str, str]] = set()
        for dictionary in dictionaries:
            for token in tokenize(url.encode("latin-1")):
                if dictionary.name == "first-names" and len(token) < MIN_NAME_TOKEN_LEN:
                    continue
                if token in dictionary.entries and (token, dictionary.name) not in seen:
                    seen.add((token, dictionary.name))
                    add("url-leak", token, _SEVERITY_BY_DICT[dictionary.name])

    cookie_blob = " ".join(f"{k}={v}" for k, v in message.cookies)
    if cookie_blob:
        seen = set()
        for dictionary in dictionaries:
            for token in tokenize(cookie_blob.encode("latin-1")):
                if dictionary.name == "first-names" and len(token) < MIN_NAME_TOKEN_LEN:
                    continue
                if token in dictionary.entries and (token, dictionary.name) not in seen:
                    seen.add((token, dictionary.name))
                    add("cookie-leak", token, _SEVERITY_BY_DICT[dictionary.name])

    if matches_vendor(message.host, vendor_patterns):
        add("vendor-identifier", message.host or "", SEVERITY_WARN)
    elif matches_vendor(url, vendor_patterns):
        add("vendor-identifier", url, SEVERITY_WARN)

    candidate_keys = [key for key, _ in message.cookies] + _query_keys(url)
    reported: set[str] = set()
    for key in candidate_keys:
        lowered = key.lower()
        if lowered in identifier_keys and lowered not in reported:
            reported.add(lowered)
            add("user-identifier", key, SEVERITY_WARN)

    return findings


def image_get_signature(messages: list[TimedMessage], window_s: float = 30.0) -> list[LeakFinding]:
    """Flag outbound GETs for image files that trail other device traffic.

    A GET whose URL path ends in an image extension within ``window_s``
    seconds after earlier outbound or vendor-endpoint traffic from the same
    device marks the end of a measurement session for any observer.
    """
    ordered = sorted(messages, key=lambda m: (m.timestamp, m.packet_index))
    findings: list[LeakFinding] = []
    for position, timed in enumerate(ordered):
        message = timed.message
        if not (timed.outbound and message.kind == "request" and message.method == "GET"):
            continue
        path = (message.url or "").split("?", 1)[0]
        if not path.lower().endswith(IMAGE_EXTENSIONS):
            continue
        preceded = any(
            (prior.outbound or prior.vendor_endpoint)
            and timed.timestamp - prior.timestamp <= window_s
            for prior in ordered[:position]
        )
        if not preceded:
            continue
        normalized = normalize_text(payload_text(timed.payload)) if timed.payload else ""
        matched, context = _evidence(normalized, normalize_text(path))
        findings.append(
            LeakFinding(
                packet_index=timed.packet_index,
                category="image-get-signature",
                matched_text=matched,
                context=context,
                severity=SEVERITY_WARN,
            )
        )
    return findings
