"""Solver configuration, objectives and error types."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

OBJECTIVES = ("Pmin", "Pmax", "Emin", "Emax")


class SolverError(RuntimeError):
    """A numeric engine failed to produce a result."""


class IterationCapExceeded(SolverError):
    pass


class FloatingPointBreakage(SolverError):
    """A float-derived vector failed exact (co-)inductivity re-verification."""

    def __init__(self, side: str, state: int, detail: str = ""):
        self.side = side
        self.state = state
        msg = f"floating-point breakage: {side} vector not {'co-' if side == 'lower' else ''}inductive at state {state}"
        super().__init__(msg + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class Objective:
    """What to optimise: ``kind`` is ``P`` or ``E``, ``opt`` is ``min`` or ``max``."""

    kind: str
    opt: str
    target: frozenset
    semantics: str = "inf"

    def __post_init__(self):
        if self.kind not in ("P", "E"):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.opt not in ("min", "max"):
            raise ValueError(f"unknown optimisation direction {self.opt!r}")
        if self.semantics not in ("inf", "rho"):
            raise ValueError(f"unknown reward semantics {self.semantics!r}")
        object.__setattr__(self, "target", frozenset(self.target))

    @classmethod
    def parse(cls, name: str, target, semantics: str = "inf") -> "Objective":
        if name not in OBJECTIVES:
            raise ValueError(f"unknown objective {name!r}")
        return cls(name[0], name[1:], frozenset(target), semantics if name[0] == "E" else "inf")

    @property
    def name(self) -> str:
        return self.kind + self.opt

    @property
    def is_reward(self) -> bool:
        return self.kind == "E"


@dataclass(frozen=True)
class SolverConfig:
    epsilon: Fraction = Fraction(1, 10 ** 6)
    gamma: Optional[Fraction] = None  # None picks 1/20 (safe) or 9/10 (none)
    rounding: str = "safe"
    precision_bits: int = 53
    method: str = "pi"
    max_sweeps: int = 10 ** 6

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.gamma is not None:
            object.__setattr__(self, "gamma", Fraction(self.gamma))
            if not 0 <= self.gamma < 1:
                raise ValueError("gamma must lie in [0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.precision_bits < 2:
            raise ValueError("precision_bits must be at least 2")
        if self.rounding not in ("none", "safe"):
            raise ValueError(f"unknown rounding mode {self.rounding!r}")
        if self.method not in ("pi", "ii"):
            raise ValueError(f"unknown method {self.method!r}")

    @property
    def effective_gamma(self) -> Fraction:
        if self.gamma is not None:
            return self.gamma
        return Fraction(1, 20) if self.rounding == "safe" else Fraction(9, 10)


@dataclass(frozen=True)
class BoundPair:
    lower: Tuple
    upper: Tuple
    sweeps: int = 0
    meta: dict = field(default_factory=dict, compare=False)
