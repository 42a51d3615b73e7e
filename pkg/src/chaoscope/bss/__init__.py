"""Machines over the reals: a small register language, its interpreter, and
symbolic path enumeration into unions of basic semi-algebraic sets, with
exact connected-component counting for one input variable."""

from importlib import resources
from pathlib import Path
from typing import Dict

from .components import components_1d
from .polynomial import DegreeOverflowError, Poly
from .program import (
    OUT_OF_FUEL,
    BssError,
    BssSemanticError,
    BssSyntaxError,
    Halted,
    OutOfFuel,
    Program,
    parse_program,
    run,
)
from .realroots import UnresolvedRootError, isolate_real_roots
from .report import FragmentationReport, MachineContrast, fragmentation_report
from .semialgebraic import (
    DEFAULT_MAX_DEPTH,
    MAX_DEGREE,
    BasicSemiAlgebraicSet,
    HaltingSetDescription,
    enumerate_paths,
    serialize_description,
)

__all__ = [
    "BasicSemiAlgebraicSet",
    "BssError",
    "BssSemanticError",
    "BssSyntaxError",
    "DegreeOverflowError",
    "FragmentationReport",
    "Halted",
    "HaltingSetDescription",
    "MachineContrast",
    "OUT_OF_FUEL",
    "OutOfFuel",
    "Poly",
    "Program",
    "UnresolvedRootError",
    "components_1d",
    "enumerate_paths",
    "fragmentation_report",
    "isolate_real_roots",
    "parse_program",
    "run",
    "serialize_description",
    "shipped_machines",
    "load_machine",
]


def shipped_machines() -> Dict[str, Path]:
    """Name -> path of the example programs installed with the package."""
    root = resources.files("chaoscope") / "machines"
    return {p.name[: -len(".bss")]: Path(str(p)) for p in sorted(root.iterdir(), key=lambda q: q.name) if p.name.endswith(".bss")}


def load_machine(name: str) -> Program:
    """Parse one of the shipped example programs by name."""
    machines = shipped_machines()
    if name not in machines:
        raise KeyError(f"unknown machine {name!r}; shipped: {sorted(machines)}")
    return parse_program(machines[name].read_text())
