"""Known classification of 1-large representations as lookup tables.

The verdicts here are ground truth for cross-validation, not computations.
``source`` names the table entry that produced a verdict.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .algebra.linalg import rank_rational
from .repspec import CLASSICAL_FAMILIES, RepSpec
from .torus import stability_check

__all__ = [
    "OracleVerdict",
    "sl2_verdict",
    "classical_verdict",
    "torus_verdict",
    "oracle_verdict",
    "TABLE_ONLY",
]

# Multisets of degrees for which an SL2 module without invariants fails.
SL2_EXCEPTIONS = (Counter({1: 1}), Counter({1: 2}), Counter({2: 1}))

# Entries of the classical table with no matrix model here: family -> (dim, min p).
TABLE_ONLY = {"G2": (7, 4), "Spin7": (8, 5)}


@dataclass(frozen=True)
class OracleVerdict:
    one_large: bool | None
    source: str
    applicable: bool = True
    reason: str = ""

    def to_dict(self) -> dict:
        return {
            "one_large": self.one_large,
            "source": self.source,
            "applicable": self.applicable,
            "reason": self.reason,
        }


def _inapplicable(source: str, reason: str) -> OracleVerdict:
    return OracleVerdict(None, source, applicable=False, reason=reason)


def sl2_verdict(degrees: Iterable[int]) -> OracleVerdict:
    """SL2 on a sum of binary forms with no invariants: 1-large except R1, 2R1, R2."""
    degrees = [int(d) for d in degrees]
    source = "oracle:sl2-table"
    if not degrees:
        return _inapplicable(source, "empty representation")
    if any(d < 0 for d in degrees):
        raise ValueError("binary form degrees must be non-negative")
    if 0 in degrees:
        return _inapplicable(source, "trivial summand R0 present (V^G != 0)")
    c = Counter(degrees)
    if c in SL2_EXCEPTIONS:
        names = " + ".join(f"R{d}" for d in sorted(degrees))
        return OracleVerdict(False, source, reason=f"{names} is one of the listed exceptions")
    return OracleVerdict(True, source)


def _threshold(family: str, n: int, p: int, q: int) -> tuple[bool, str]:
    if family == "gl":
        return p >= n and q >= n, f"needs p >= {n} and q >= {n}"
    if family == "sl":
        return p + q >= 2 * n - 1, f"needs p + q >= {2 * n - 1}"
    if family == "so":
        return p >= n - 1, f"needs p >= {n - 1}"
    return p >= 2 * n + 1, f"needs p >= {2 * n + 1}"


def classical_verdict(family: str, n: int, p: int, q: int = 0) -> OracleVerdict:
    """Threshold table for pC^n + q(C^n)* under GL, SL, SO and Sp(2n).

    Below the threshold the verdict is False because the thresholds are sharp;
    the reason string says so.
    """
    if family in TABLE_ONLY:
        dim, p_min = TABLE_ONLY[family]
        rule = f"p C^{dim} needs p >= {p_min}; table only, no matrix model"
        if p >= p_min:
            return OracleVerdict(True, f"oracle:classical-{family}", reason=rule)
        return OracleVerdict(False, f"oracle:classical-{family}", reason=f"{rule}; below a sharp threshold")
    if family not in CLASSICAL_FAMILIES:
        raise ValueError(f"unsupported family {family!r}")
    if n < 1 or p < 0 or q < 0:
        raise ValueError("need n >= 1 and p, q >= 0")
    if family in ("so", "sp") and q:
        raise ValueError(f"{family} modules are self-dual; use q = 0")
    source = f"oracle:classical-{family}"
    ok, rule = _threshold(family, n, p, q)
    if ok:
        return OracleVerdict(True, source, reason=rule)
    return OracleVerdict(False, source, reason=f"{rule}; below a sharp threshold")


def torus_verdict(weights) -> OracleVerdict:
    """A faithful torus module is 1-large iff it is stable."""
    source = "oracle:torus-stability"
    k = len(weights)
    if rank_rational([list(r) for r in weights]) < k:
        return _inapplicable(source, "weights do not span: action not faithful")
    st = stability_check(weights)
    return OracleVerdict(st.stable, source)


def oracle_verdict(spec: RepSpec) -> OracleVerdict:
    if spec.group == "torus":
        return torus_verdict(spec.weights)
    if spec.group == "sl2":
        return sl2_verdict(spec.degrees)
    return classical_verdict(spec.group, spec.n, spec.p, spec.q)
