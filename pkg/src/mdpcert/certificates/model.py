"""In-memory certificate model."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..ext import INF

OBJECTIVES = ("Pmin", "Pmax", "Emin", "Emax")


class CertificateError(ValueError):
    """Malformed certificate: missing or unexpected fields, wrong sizes, bad values."""


@dataclass(frozen=True)
class Query:
    objective: str
    target: str = "target"
    semantics: Optional[str] = None
    bound: str = "both"
    epsilon: Fraction = Fraction(1, 10 ** 6)

    def __post_init__(self):
        if self.objective not in OBJECTIVES:
            raise CertificateError(f"unknown objective {self.objective!r}")
        if self.objective.startswith("E"):
            sem = self.semantics or "inf"
            if sem not in ("inf", "rho"):
                raise CertificateError(f"unknown reward semantics {sem!r}")
            object.__setattr__(self, "semantics", sem)
        elif self.semantics is not None:
            raise CertificateError("reward semantics only applies to expected-reward queries")
        if self.bound not in ("lower", "upper", "both"):
            raise CertificateError(f"unknown bound direction {self.bound!r}")
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))

    @property
    def opt(self) -> str:
        return self.objective[1:]

    @property
    def is_reward(self) -> bool:
        return self.objective.startswith("E")

    def with_bound(self, bound: str) -> "Query":
        return Query(self.objective, self.target, self.semantics, bound, self.epsilon)


@dataclass(frozen=True)
class Certificate:
    """A value vector plus whatever auxiliary data its proposition needs.

    ``query.bound`` is ``lower`` or ``upper``.  ``r`` doubles as the first
    ranking function of the two-rank forms, ``r2`` is the second, and
    ``tin`` is the declared over-approximation of the zero-reward set.
    """

    query: Query
    x: Tuple
    r: Optional[Tuple] = None
    r2: Optional[Tuple] = None
    sigma: Optional[Tuple[int, ...]] = None
    tin: Optional[frozenset] = None
    meta: Dict[str, str] = field(default_factory=dict, compare=False)

    @property
    def kind(self) -> str:
        """Short name of the proposition this certificate instantiates."""
        return kind_of(self.query, self.sigma is not None)


def kind_of(q: Query, with_sigma: bool) -> str:
    if q.bound not in ("lower", "upper"):
        raise CertificateError("a certificate covers exactly one bound direction")
    if q.objective.startswith("P"):
        if q.bound == "upper":
            return "reach-upper"
        if q.opt == "min":
            return "reach-lower-min"
        return "reach-lower-max-witness" if with_sigma else "reach-lower-max"
    if q.semantics == "inf":
        if q.bound == "lower":
            return "rew-inf-lower"
        if q.opt == "max":
            return "rew-inf-upper-max"
        return "rew-inf-upper-min-witness" if with_sigma else "rew-inf-upper-min"
    if q.bound == "upper":
        return "rew-rho-upper"
    if q.opt == "min":
        return "rew-rho-lower-min"
    return "rew-rho-lower-max" if with_sigma else "rew-rho-lower-max-nostrat"


# which optional fields each proposition needs: (r, r2, sigma, tin)
FIELDS = {
    "reach-upper": (False, False, False, False),
    "reach-lower-min": (True, False, False, False),
    "reach-lower-max": (True, False, False, False),
    "reach-lower-max-witness": (True, False, True, False),
    "rew-inf-lower": (True, False, False, False),
    "rew-inf-upper-max": (True, False, False, False),
    "rew-inf-upper-min": (True, False, False, False),
    "rew-inf-upper-min-witness": (True, False, True, False),
    "rew-rho-upper": (False, False, False, False),
    "rew-rho-lower-min": (True, True, False, True),
    "rew-rho-lower-max": (True, True, True, True),
    "rew-rho-lower-max-nostrat": (True, True, False, True),
}

SIGMA_OPTIONAL = {"reach-lower-max", "rew-inf-upper-min", "rew-rho-lower-max-nostrat"}


def check_presence(c: Certificate) -> None:
    kind = c.kind
    need = FIELDS[kind]
    for present, wanted, name in zip(
        (c.r is not None, c.r2 is not None, c.sigma is not None, c.tin is not None),
        need,
        ("ranks", "ranks2", "strategy", "tin"),
    ):
        if wanted and not present:
            raise CertificateError(f"field {name!r} is required for a {kind} certificate")
        if present and not wanted:
            raise CertificateError(f"field {name!r} is not allowed in a {kind} certificate")


def check_shape(c: Certificate, n_states: int) -> None:
    for name, vec in (("values", c.x), ("ranks", c.r), ("ranks2", c.r2), ("strategy", c.sigma)):
        if vec is not None and len(vec) != n_states:
            raise CertificateError(
                f"dimension mismatch: {name} has {len(vec)} entries, model has {n_states} states"
            )
    if c.tin is not None and any(not 0 <= s < n_states for s in c.tin):
        raise CertificateError("dimension mismatch: tin names a state outside the model")
    for vec in (c.r, c.r2):
        for v in vec or ():
            if v != INF and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
                raise CertificateError(f"rank entry {v!r} is not a natural number or inf")
    for v in c.x:
        if v != INF and v < 0:
            raise CertificateError("negative value in certificate")
    if not c.query.is_reward:
        for v in c.x:
            if v == INF or v > 1:
                raise CertificateError("probability out of range")
