"""Run configuration, device registry, and dictionary loading.

Config files are flat key=value INI sections (see README for the exact
keys). Dictionary files are UTF-8, one lowercase entry per line, with '#'
comments; the bundled set can be overridden per run or via the
MEDLEAK_DICT_DIR environment variable.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .capture import normalize_mac
from .classifiers import DECISION_METHODS, ClassifierConfig
from .leaks import DEFAULT_IDENTIFIER_KEYS, DICTIONARY_NAMES, Dictionary

ENV_DICT_DIR = "MEDLEAK_DICT_DIR"

DICTIONARY_FILES = {name: f"{name}.txt" for name in DICTIONARY_NAMES}

DEFAULT_VENDOR_PATTERNS = ("*withings*", "*ihealth*", "*1byone*")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    entropy_threshold: float = 7.5
    chi_threshold: float = 1000.0
    min_stat_len: int = 64
    gap_threshold: float = 60.0
    image_window: float = 30.0
    decision_method: str = "chi_squared"
    dict_dir: Path | None = None
    vendor_patterns: tuple[str, ...] = DEFAULT_VENDOR_PATTERNS
    identifier_keys: frozenset[str] = DEFAULT_IDENTIFIER_KEYS
    registry: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        for name in ("entropy_threshold", "chi_threshold", "min_stat_len", "gap_threshold", "image_window"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.decision_method not in DECISION_METHODS:
            raise ConfigError(
                f"unknown decision method {self.decision_method!r} (expected one of {DECISION_METHODS})"
            )
        normalized: dict[str, str] = {}
        for mac, device_id in self.registry.items():
            try:
                canonical = normalize_mac(mac)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            if canonical in normalized:
                raise ConfigError(f"duplicate registry MAC {canonical}")
            normalized[canonical] = device_id
        self.registry = normalized

    def classifier_config(self) -> ClassifierConfig:
        return ClassifierConfig(
            entropy_threshold=self.entropy_threshold,
            chi_threshold=self.chi_threshold,
            min_stat_len=self.min_stat_len,
            decision_method=self.decision_method,
        )


def _read_ini(path) -> configparser.ConfigParser:
    # '=' only: the default ':' delimiter would split MAC-address keys
    parser = configparser.ConfigParser(delimiters=("=",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return parser


def load_registry(path) -> dict[str, str]:
    """MAC -> device label, from the [devices] section of an INI file."""
    parser = _read_ini(path)
    if not parser.has_section("devices"):
        raise ConfigError(f"{path}: missing [devices] section")
    registry = dict(parser.items("devices"))
    if not registry:
        raise ConfigError(f"{path}: empty device registry")
    return registry


def load_config(path) -> RunConfig:
    """Build a RunConfig from an INI file; unspecified keys keep defaults."""
    parser = _read_ini(path)
    config = RunConfig()
    if parser.has_section("thresholds"):
        section = parser["thresholds"]
        try:
            config.entropy_threshold = section.getfloat("entropy_threshold", config.entropy_threshold)
            config.chi_threshold = section.getfloat("chi_threshold", config.chi_threshold)
            config.min_stat_len = section.getint("min_stat_len", config.min_stat_len)
            config.gap_threshold = section.getfloat("gap_threshold", config.gap_threshold)
            config.image_window = section.getfloat("image_window", config.image_window)
        except ValueError as exc:
            raise ConfigError(f"{path}: bad threshold value: {exc}") from None
    if parser.has_section("analysis"):
        method = parser["analysis"].get("decision_method", config.decision_method)
        config.decision_method = method.strip().replace("-", "_")
    if parser.has_section("dictionaries"):
        directory = parser["dictionaries"].get("dir", "").strip()
        if directory:
            config.dict_dir = Path(directory)
    if parser.has_section("vendor-patterns"):
        patterns = parser["vendor-patterns"].get("patterns", "")
        parsed = tuple(p.strip() for p in patterns.split(",") if p.strip())
        if parsed:
            config.vendor_patterns = parsed
    if parser.has_section("identifier-keys"):
        keys = parser["identifier-keys"].get("keys", "")
        parsed_keys = frozenset(k.strip().lower() for k in keys.split(",") if k.strip())
        if parsed_keys:
            config.identifier_keys = parsed_keys
    if parser.has_section("devices"):
        config.registry = dict(parser.items("devices"))
    config.validate()
    return config


def save_registry(registry: dict[str, str], path) -> None:
    parser = configparser.ConfigParser(delimiters=("=",))
    parser["devices"] = dict(registry)
    with open(path, "w", encoding="utf-8") as fh:
        parser.write(fh)


def parse_dictionary_text(text: str, name: str, source_note: str = "") -> Dictionary:
    entries = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            entries.add(line)
    if not entries:
        raise ConfigError(f"dictionary {name!r} has no entries")
    return Dictionary(name=name, entries=frozenset(entries), source_note=source_note)


def load_dictionary(path, name: str) -> Dictionary:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read dictionary {path}: {exc}") from None
    return parse_dictionary_text(text, name, source_note=str(path))


def load_dictionaries(dict_dir: Path | None = None) -> list[Dictionary]:
    """Load the three dictionaries from dict_dir, $MEDLEAK_DICT_DIR, or the
    bundled data files, in that order of preference."""
    if dict_dir is None:
        env = os.environ.get(ENV_DICT_DIR, "").strip()
        if env:
            dict_dir = Path(env)
    if dict_dir is not None:
        return [load_dictionary(Path(dict_dir) / filename, name) for name, filename in DICTIONARY_FILES.items()]
    data = resources.files("medleak") / "data"
    return [
        parse_dictionary_text(
            (data / filename).read_text(encoding="utf-8"), name, source_note=f"bundled:{filename}"
        )
        for name, filename in DICTIONARY_FILES.items()
    ]


def merge_cli_overrides(config: RunConfig, **overrides) -> RunConfig:
    """Apply non-None CLI flag values over a config."""
    updates = {key: value for key, value in overrides.items() if value is not None}
    if not updates:
        return config
    merged = replace(config, **updates)
    merged.validate()
    return merged
