#!/usr/bin/env python3
"""Build the three golden-fixture captures and run the full pipeline on them.

Shows the whole chain on known inputs: the leaky blood pressure monitor ends
LEAK, the TLS-only scale ends OK, and the mixed-home capture attributes
findings to the right device while background traffic stays unattributed.
"""

import sys
import tempfile
from pathlib import Path

from medleak.config import RunConfig
from medleak.corpus import SCENARIOS, build_fixture_capture, fixture_registry
from medleak.report import analyze, render


def main() -> int:
    worst = 0
    with tempfile.TemporaryDirectory() as tmp:
        for scenario in SCENARIOS:
            path = Path(tmp) / f"{scenario}.pcap"
            path.write_bytes(build_fixture_capture(scenario))
            result = analyze([path], RunConfig(registry=fixture_registry(scenario)))
            print(f"== {scenario} (exit {result.exit_code}) ==")
            print(render(result.reports, "text").decode(), end="")
            for warning in result.warnings:
                print(f"  note: {warning}")
            print()
            worst = max(worst, result.exit_code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
