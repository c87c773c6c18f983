"""Measures on the group and the sphere, and the report type for integrals."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

METHODS = ("qmc-sphere", "radial-2d", "qmc-group", "cubature-sphere")
MEASURES = ("theta", "lebesgue", "eta")


@dataclass(frozen=True)
class FunctionalReport:
    value: float
    stderr: float
    samples: int
    seed: int
    method: str

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown integration method {self.method!r}")
        if not self.stderr >= 0:
            raise ValueError("stderr must be non-negative")
        if self.samples <= 0:
            raise ValueError("samples must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MeasureSpec:
    """``theta``: Vol_Theta~ on the group, ``lebesgue``: dH, ``eta``: Vol_eta~ on the sphere."""

    which: str
    n: int

    def __post_init__(self):
        if self.which not in MEASURES:
            raise ValueError(f"unknown measure {self.which!r}; expected one of {MEASURES}")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def on_group(self) -> bool:
        return self.which != "eta"

    @property
    def density(self) -> Fraction:
        """Factor relative to ``dH`` (group) or to the round measure (sphere)."""
        n = self.n
        if self.which == "lebesgue":
            return Fraction(1)
        if self.which == "theta":
            return Fraction(math.factorial(2 * n), 8)
        return Fraction(2 ** (2 * n + 3) * math.factorial(2 * n))


def sphere_area_float(n: int) -> float:
    return 2 * math.pi ** (2 * n + 2) / math.factorial(2 * n + 1)


def eta_volume(n: int) -> float:
    return float(MeasureSpec("eta", n).density) * sphere_area_float(n)


def q_sphere_area(n: int) -> float:
    """Area of the unit sphere ``S^{4n-1}`` in ``H^n``."""
    return 2 * math.pi ** (2 * n) / math.factorial(2 * n - 1)
