"""Fragmentation demonstration: positive-exponent scans fragment into more
and more parameter runs as the grid refines, while machine halting sets
decompose into a depth-bounded number of basic pieces (at most 2^d at path
depth d, one per branch pattern).  The report prints both side by side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np


@dataclass
class MachineContrast:
    name: str
    pieces: int
    depth: int

    @property
    def bound(self) -> int:
        return 1 << self.depth

    @property
    def within_bound(self) -> bool:
        return self.pieces <= self.bound


@dataclass
class FragmentationReport:
    resolutions: List[int]
    run_counts: List[int]
    contrast: List[MachineContrast]

    @property
    def counts_non_decreasing(self) -> bool:
        return all(a <= b for a, b in zip(self.run_counts, self.run_counts[1:]))

    def render(self) -> str:
        lines = ["fragmentation of the positive-exponent parameter set", ""]
        lines.append(f"{'resolution':>12}  {'positive runs':>13}")
        for res, cnt in zip(self.resolutions, self.run_counts):
            lines.append(f"{res:>12}  {cnt:>13}")
        lines.append("")
        lines.append(
            "contrast: a halting set decomposes into at most 2^d basic"
            " semi-algebraic pieces at path depth d, so its component count"
            " cannot keep growing; the scan's run count does."
        )
        for mc in self.contrast:
            ok = "ok" if mc.within_bound else "VIOLATED"
            lines.append(
                f"  machine {mc.name}: {mc.pieces} piece(s) at depth {mc.depth}"
                f" <= 2^{mc.depth} = {mc.bound} [{ok}]"
            )
        return "\n".join(lines) + "\n"


def _count_runs(mask: np.ndarray) -> int:
    m = np.asarray(mask, dtype=bool)
    if m.size == 0:
        return 0
    return int(m[0]) + int(np.sum(m[1:] & ~m[:-1]))


def fragmentation_report(
    scans: Sequence[Tuple[int, Sequence[bool]]],
    machine_contrast: Optional[Sequence[MachineContrast]] = None,
) -> FragmentationReport:
    """Build the report from (resolution, positive-mask) pairs, plus the
    shipped-machine piece counts for the bounded-decomposition contrast."""
    resolutions = [int(r) for r, _ in scans]
    counts = [_count_runs(np.asarray(mask)) for _, mask in scans]
    return FragmentationReport(resolutions, counts, list(machine_contrast or []))
