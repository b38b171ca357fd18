#!/usr/bin/env python3
"""Tabulate how fast the decreasing majorant mean decays for sample integrands.

For each (f, m) pair the script builds D(R) = mean over [a, R] of the right
maximization of f, samples it along a geometric schedule, and reports whether
the decay check passes.  Writes one CSV per case when --outdir is given.
"""

import argparse
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from meanmax import (
    DecaySchedule,
    Domain,
    Function1D,
    Tail,
    decreasing_majorant_mean,
    estimate_decay,
    identity_measure,
    log_measure,
)


@dataclass
class Case:
    name: str
    fn: Function1D
    measure: object
    schedule: DecaySchedule


def build_cases() -> list[Case]:
    exp_f = Function1D(
        eval=lambda x: np.exp(-x), domain=Domain(0.0, math.inf), tail=Tail.vanishing()
    )
    inv_f = Function1D(
        eval=lambda x: 1 / x, domain=Domain(1.0, math.inf),
        tail=Tail.vanishing(), monotonicity="decreasing",
    )
    pow_f = Function1D(
        eval=lambda x: x**-0.25, domain=Domain(1.0, math.inf),
        tail=Tail.vanishing(), monotonicity="decreasing",
    )
    return [
        Case("exp_vs_dx", exp_f, identity_measure(0.0),
             DecaySchedule(start=2, ratio=2, steps=10, threshold=1e-2)),
        Case("inverse_vs_dlnx", inv_f, log_measure(1.0),
             DecaySchedule(start=10, ratio=10, steps=5, threshold=0.12)),
        Case("quarter_power_vs_dlnx", pow_f, log_measure(1.0),
             DecaySchedule(start=10, ratio=10, steps=5, threshold=0.5)),
    ]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default=None, help="write per-case CSVs here")
    args = parser.parse_args()

    for case in build_cases():
        result = decreasing_majorant_mean(case.fn, case.measure)
        report = estimate_decay(result.fn, case.schedule)
        points = report.details["points"]
        seq = report.details["sequence"]
        print(f"{case.name}: {report.verdict}  final D({points[-1]:g}) = {seq[-1]:.6g}")
        for x, v in zip(points, seq):
            print(f"    D({x:g}) = {v:.10g}")
        if args.outdir:
            out = Path(args.outdir)
            out.mkdir(parents=True, exist_ok=True)
            rows = "\n".join(f"{x:.10g},{v:.10g}" for x, v in zip(points, seq))
            (out / f"{case.name}.csv").write_text(rows + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
