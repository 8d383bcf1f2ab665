"""Spectral verification of every l=4 candidate (v = 65536), with eigenvalue histograms.

Brute force at this size would need ~v*|D| subtractions per candidate, so only the
character-table route runs.  Pass --all to sweep every 0 <= k <= j <= 4.
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field

from pdslab import build_d, spectral_verify


@dataclass
class StretchConfig:
    cases: list[tuple[int, int]] = field(default_factory=lambda: [(1, 1), (4, 4)])
    json_out: bool = False


def main(cfg: StretchConfig) -> int:
    failures = 0
    for j, k in cfg.cases:
        t = time.perf_counter()
        cand = build_d(4, j, k)
        try:
            cert = spectral_verify(cand)
        except Exception as exc:  # report and keep sweeping
            failures += 1
            print(f"D_{{4,{j},{k}}}  FAIL  {exc}")
            continue
        dt = time.perf_counter() - t
        hist = cert.spectrum.histogram
        if cfg.json_out:
            print(json.dumps({"j": j, "k": k, "params": list(cert.params), "histogram": hist, "seconds": dt}))
        else:
            print(f"D_{{4,{j},{k}}}  {cand.shape.describe():<16} {tuple(cert.params)}  {hist}  {dt:.2f}s")
    return failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--all", action="store_true")
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args()
    cfg = StretchConfig(json_out=a.json)
    if a.all:
        cfg.cases = [(j, k) for j in range(5) for k in range(j + 1)]
    raise SystemExit(1 if main(cfg) else 0)
