"""Text formats for models, certificates and queries.

Model files are line oriented::

    # comment
    mdp 3
    state 1 s             # optional display name
    label target 2
    reward 1 1/2
    1 solid -> 0 1/3, 1 1/3, 2 1/3

Actions are named by the token after the source state and numbered in order
of first appearance.  Certificate files are flat ``key value...`` documents
with one line per state-indexed array.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .certificates.model import Certificate, CertificateError, Query, check_presence
from .ext import INF, format_ext, parse_ext, parse_ext_nat, parse_rat
from .mdp import Mdp, ModelError, validate_mdp

_NAME = re.compile(r"[A-Za-z_][\w.+-]*$")


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        self.line, self.col = line, col
        super().__init__(f"line {line}, column {col}: {message}")


def _tokens(line: str) -> List[Tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line.split("#", 1)[0])]


# models --------------------------------------------------------------------

def parse_model(text: str) -> Mdp:
    """Parse a model document; raises :class:`ParseError` or :class:`ModelError`."""
    n: Optional[int] = None
    names: Dict[int, str] = {}
    labels: Dict[str, set] = {}
    rewards: Dict[int, Fraction] = {}
    acts: List[Dict[str, List]] = []

    def state(tok, lineno, col):
        try:
            s = int(tok)
        except ValueError:
            raise ParseError(lineno, col, f"expected a state index, got {tok!r}") from None
        if not 0 <= s < n:
            raise ParseError(lineno, col, f"state {s} out of range 0..{n - 1}")
        return s

    def rat(tok, lineno, col):
        try:
            return parse_rat(tok)
        except ValueError as e:
            raise ParseError(lineno, col, str(e)) from None

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        col, head = toks[0]
        if head == "mdp":
            if n is not None:
                raise ParseError(lineno, col, "duplicate mdp header")
            if len(toks) != 2 or not toks[1][1].isdigit():
                raise ParseError(lineno, col, "expected 'mdp <nStates>'")
            n = int(toks[1][1])
            acts = [dict() for _ in range(n)]
            continue
        if n is None:
            raise ParseError(lineno, col, "missing 'mdp <nStates>' header")
        if head == "label":
            if len(toks) < 2 or not _NAME.match(toks[1][1]):
                raise ParseError(lineno, col, "expected 'label <name> <states>...'")
            labels.setdefault(toks[1][1], set()).update(state(t, lineno, c) for c, t in toks[2:])
        elif head == "reward":
            if len(toks) != 3:
                raise ParseError(lineno, col, "expected 'reward <state> <rat>'")
            s = state(toks[1][1], lineno, toks[1][0])
            if s in rewards:
                raise ParseError(lineno, col, f"duplicate reward for state {s}")
            rewards[s] = rat(toks[2][1], lineno, toks[2][0])
        elif head == "state":
            if len(toks) != 3 or not _NAME.match(toks[2][1]):
                raise ParseError(lineno, col, "expected 'state <index> <name>'")
            names[state(toks[1][1], lineno, toks[1][0])] = toks[2][1]
        else:
            s = state(head, lineno, col)
            if len(toks) < 4 or toks[2][1] != "->":
                raise ParseError(lineno, col, "expected '<state> <action> -> <succ> <rat>, ...'")
            aname = toks[1][1]
            if not _NAME.match(aname) and not aname.isdigit():
                raise ParseError(lineno, toks[1][0], f"bad action name {aname!r}")
            if aname in acts[s]:
                raise ParseError(lineno, toks[1][0], f"duplicate action {aname!r} at state {s}")
            rest = " ".join(t for _, t in toks[3:])
            dist = []
            offset = toks[3][0]
            for part in rest.split(","):
                items = part.split()
                if len(items) != 2:
                    raise ParseError(lineno, offset, "expected '<succ> <rat>' pairs separated by commas")
                dist.append((state(items[0], lineno, offset), rat(items[1], lineno, offset)))
            acts[s][aname] = dist
    if n is None or n == 0:
        raise ModelError(["no states declared"])
    m = Mdp(
        tuple(tuple(tuple(d) for d in acts[s].values()) for s in range(n)),
        {k: frozenset(v) for k, v in labels.items()},
        tuple(rewards.get(s, Fraction(0)) for s in range(n)) if rewards else None,
        tuple(names.get(s, "") for s in range(n)) if names else None,
        tuple(tuple(acts[s].keys()) for s in range(n)),
    )
    diags = validate_mdp(m)
    if diags:
        raise ModelError(diags)
    return m


def write_model(m: Mdp) -> str:
    lines = [f"mdp {m.n_states}"]
    if m.state_names is not None:
        lines += [f"state {s} {name}" for s, name in enumerate(m.state_names) if name]
    for name in sorted(m.labels):
        lines.append(" ".join(["label", name] + [str(s) for s in sorted(m.labels[name])]))
    if m.rewards is not None:
        lines += [f"reward {s} {format_ext(r)}" for s, r in enumerate(m.rewards) if r != 0]
    for s, dists in enumerate(m.transitions):
        for a, d in enumerate(dists):
            name = m.action_name(s, a)
            pairs = ", ".join(f"{t} {format_ext(p)}" for t, p in d)
            lines.append(f"{s} {name} -> {pairs}")
    return "\n".join(lines) + "\n"


# queries -------------------------------------------------------------------

_QUERY = re.compile(
    r"^\s*(Pmin|Pmax|Emin|Emax)\s*=\s*\?\s*\[\s*F\s+(\"?)([A-Za-z_][\w.+-]*)\2\s*\]"
    r"(?:\s+semantics\s*=\s*(inf|rho))?\s*$"
)


def parse_query(text: str, bound: str = "both", epsilon=Fraction(1, 10 ** 6)) -> Query:
    """``Pmin=? [F target]``, optionally followed by ``semantics=inf|rho`` for E queries."""
    m = _QUERY.match(text)
    if not m:
        raise ValueError(f"malformed query {text!r}; expected e.g. 'Pmax=? [F target]'")
    obj, _, label, sem = m.groups()
    if sem is not None and obj.startswith("P"):
        raise ValueError("semantics= only applies to expected-reward queries")
    return Query(obj, label, sem if obj.startswith("E") else None, bound, Fraction(epsilon))


def format_query(q: Query) -> str:
    out = f"{q.objective}=? [F {q.target}]"
    if q.semantics is not None:
        out += f" semantics={q.semantics}"
    return out


# certificates --------------------------------------------------------------

CERT_VERSION = "1"


def write_certificate(c: Certificate) -> str:
    q = c.query
    lines = [
        f"certificate {CERT_VERSION}",
        f"objective {q.objective}",
        f"target {q.target}",
    ]
    if q.semantics is not None:
        lines.append(f"semantics {q.semantics}")
    lines += [
        f"bound {q.bound}",
        f"epsilon {format_ext(q.epsilon)}",
        f"kind {c.kind}",
        f"states {len(c.x)}",
        "values " + " ".join(format_ext(v) for v in c.x),
    ]
    if c.r is not None:
        lines.append("ranks " + " ".join(format_ext(v) for v in c.r))
    if c.r2 is not None:
        lines.append("ranks2 " + " ".join(format_ext(v) for v in c.r2))
    if c.sigma is not None:
        lines.append("strategy " + " ".join(str(a) for a in c.sigma))
    if c.tin is not None:
        lines.append(" ".join(["tin"] + [str(s) for s in sorted(c.tin)]))
    for k in sorted(c.meta):
        lines.append(f"meta {k} {c.meta[k]}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    """Inverse of :func:`write_certificate`; raises :class:`CertificateError`."""
    fields: Dict[str, Tuple[int, List[str]]] = {}
    meta: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = [t for _, t in _tokens(raw)]
        if not toks:
            continue
        key, rest = toks[0], toks[1:]
        if key == "meta":
            if len(rest) < 2:
                raise CertificateError(f"line {lineno}: expected 'meta <key> <value>'")
            meta[rest[0]] = " ".join(rest[1:])
            continue
        if key not in ("certificate", "objective", "target", "semantics", "bound", "epsilon",
                       "kind", "states", "values", "ranks", "ranks2", "strategy", "tin"):
            raise CertificateError(f"line {lineno}: unknown field {key!r}")
        if key in fields:
            raise CertificateError(f"line {lineno}: duplicate field {key!r}")
        fields[key] = (lineno, rest)

    def scalar(key, required=True):
        if key not in fields:
            if required:
                raise CertificateError(f"missing field {key!r}")
            return None
        lineno, rest = fields[key]
        if len(rest) != 1:
            raise CertificateError(f"line {lineno}: field {key!r} takes exactly one value")
        return rest[0]

    if scalar("certificate") != CERT_VERSION:
        raise CertificateError("unsupported certificate version")
    try:
        q = Query(
            scalar("objective"),
            scalar("target"),
            scalar("semantics", False),
            scalar("bound"),
            parse_rat(scalar("epsilon", False) or "1/1000000"),
        )
    except ValueError as e:
        raise CertificateError(str(e)) from e
    if q.bound == "both":
        raise CertificateError("a certificate covers exactly one bound direction")
    n_tok = scalar("states")
    if not n_tok.isdigit():
        raise CertificateError(f"malformed state count {n_tok!r}")
    n = int(n_tok)

    def vector(key, conv, what):
        if key not in fields:
            return None
        lineno, rest = fields[key]
        if len(rest) != n:
            raise CertificateError(f"line {lineno}: {key} has {len(rest)} entries, expected {n}")
        try:
            return tuple(conv(t) for t in rest)
        except ValueError as e:
            raise CertificateError(f"line {lineno}: malformed {what}: {e}") from e

    x = vector("values", parse_ext, "value")
    if x is None:
        raise CertificateError("missing field 'values'")
    if not q.is_reward and any(v == INF or v < 0 or v > 1 for v in x):
        raise CertificateError("probability out of range")
    if any(v != INF and v < 0 for v in x):
        raise CertificateError("negative value in certificate")
    r = vector("ranks", parse_ext_nat, "rank")
    r2 = vector("ranks2", parse_ext_nat, "rank")
    sigma = vector("strategy", _parse_action, "strategy entry")
    tin = None
    if "tin" in fields:
        lineno, rest = fields["tin"]
        try:
            tin = frozenset(int(t) for t in rest)
        except ValueError as e:
            raise CertificateError(f"line {lineno}: malformed tin entry") from e
    c = Certificate(q, x, r, r2, sigma, tin, meta)
    check_presence(c)
    kind = scalar("kind", False)
    if kind is not None and kind != c.kind:
        raise CertificateError(f"declared kind {kind!r} does not match the fields ({c.kind})")
    return c


def _parse_action(tok: str) -> int:
    if not tok.isdigit():
        raise ValueError(f"{tok!r} is not an action index")
    return int(tok)
