"""Norm minimization along complexified orbits (numerical evidence only).

Vectors live in the orthonormal coordinates of the action's compact form, so
``|v|^2`` is the standard hermitian norm and ``rho_a(v) = (-i/2) v^H B_a v``.

Along ``t -> exp(t X) v`` with ``X = sum_a rho_a(v) i B_a`` the squared norm has
derivative ``-4 |rho(v)|^2`` at ``t = 0`` and is convex in t, so moving
forward in t descends.  Each step uses the exact exponential of ``t X``
(computed from an eigendecomposition, X being hermitian).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .moment import complex_moment_values, real_moment
from .repspec import LieAction

__all__ = [
    "FlowConfig",
    "MinimalVectorResult",
    "kempf_ness_flow",
    "rank_sample",
    "membership_check",
    "compact_group_element",
    "write_trace",
]

# Near a minimum |v|^2 is flat to machine precision while rho is still
# shrinking; accepted steps may exceed the previous norm by this many ulps.
ROUNDING_SLACK = 8 * np.finfo(float).eps

CONVERGED = "converged"
NULL_CONE = "null_cone"
MAX_ITER = "max_iter"


@dataclass(frozen=True)
class FlowConfig:
    step: float = 1.0
    backtrack: float = 0.5
    armijo: float = 1e-4
    tol: float = 1e-10
    max_iter: int = 100_000
    null_cone: float = 1e-8
    trace: bool = False

    def __post_init__(self):
        for name in ("step", "armijo", "tol", "null_cone"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.backtrack < 1:
            raise ValueError("backtrack factor must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class MinimalVectorResult:
    vector: np.ndarray
    rho_norm: float
    iterations: int
    status: str
    norm: float
    trace: list[tuple[int, float, float]] = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def summary(self) -> dict:
        return {
            "status": self.status,
            "iterations": self.iterations,
            "norm_squared": self.norm ** 2,
            "rho_norm": self.rho_norm,
        }


def _blocks(B: np.ndarray) -> list[np.ndarray]:
    """Index sets of the finest block decomposition shared by all of ``B``."""
    n = B.shape[1]
    linked = (np.abs(B) > 0).any(axis=0)
    linked = linked | linked.T
    seen = np.zeros(n, dtype=bool)
    out = []
    for start in range(n):
        if seen[start]:
            continue
        comp, stack = [], [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.nonzero(linked[i] & ~seen)[0]:
                seen[j] = True
                stack.append(j)
        out.append(np.array(sorted(comp)))
    return out


class _Exp:
    """``t -> exp(t X) v`` for hermitian X, diagonalized block by block.

    Working per block means identical summands are transformed identically,
    which keeps exactly dependent copies dependent.
    """

    def __init__(self, X: np.ndarray, blocks: list[np.ndarray], v: np.ndarray):
        self.parts = []
        for idx in blocks:
            sub = X[np.ix_(idx, idx)]
            vals, vecs = np.linalg.eigh((sub + sub.conj().T) / 2)
            self.parts.append((idx, vals, vecs, vecs.conj().T @ v[idx]))
        self.v = v

    def __call__(self, t: float) -> np.ndarray:
        # v + Q (e^{t L} - 1) Q^H v: exact at t = 0, so tiny steps cannot
        # gain norm from the eigenbasis round trip
        u = self.v.copy()
        with np.errstate(over="ignore", invalid="ignore"):
            for idx, vals, vecs, c in self.parts:
                u[idx] += vecs @ (np.expm1(t * vals) * c)
        return u


def kempf_ness_flow(action: LieAction, v0, cfg: FlowConfig = FlowConfig()) -> MinimalVectorResult:
    """Descend ``|v|^2`` along the complexified orbit of ``v0``.

    Statuses: ``converged`` when ``|rho| <= tol * min(1, |v|^2)``,
    ``null_cone`` when ``|v|`` drops below ``null_cone * |v0|``, otherwise
    ``max_iter`` (also reported if no step can be accepted).  Accepted steps
    never increase ``|v|^2`` beyond :data:`ROUNDING_SLACK`.
    """
    v = np.asarray(v0, dtype=complex).ravel().copy()
    if v.shape[0] != action.dim_v:
        raise ValueError(f"start vector has length {v.shape[0]}, expected {action.dim_v}")
    norm0 = float(np.linalg.norm(v))
    if norm0 == 0:
        raise ValueError("start vector must be nonzero")
    B = action.compact_basis
    iB = 1j * B
    blocks = _blocks(B)
    f = float(np.vdot(v, v).real)
    rho = real_moment(action, v, compact=B)
    eta = cfg.step
    trace: list[tuple[int, float, float]] = []
    it = 0
    status = MAX_ITER
    while True:
        g2 = float(rho @ rho)
        if cfg.trace:
            trace.append((it, f, g2 ** 0.5))
        # the null-cone test goes first: near zero rho underflows and would
        # pass the convergence test spuriously
        if f ** 0.5 < cfg.null_cone * norm0:
            status = NULL_CONE
            break
        if g2 ** 0.5 <= cfg.tol * min(1.0, f):
            status = CONVERGED
            break
        if it >= cfg.max_iter:
            break
        step = _Exp(np.einsum("a,aij->ij", rho, iB), blocks, v)
        t = eta
        accepted = False
        while t > 1e-300:
            u = step(t)
            fu = float(np.vdot(u, u).real)
            if np.isfinite(fu) and fu <= f * (1 + ROUNDING_SLACK):
                rho_u = real_moment(action, u, compact=B)
                # Armijo, or no overshoot: the derivative at u along X is still
                # non-positive, so by convexity |.|^2 decreased on all of [0, t].
                if fu <= f - cfg.armijo * t * 4 * g2 or float(rho @ rho_u) >= 0:
                    accepted = True
                    break
            t *= cfg.backtrack
        if not accepted:
            break
        v, f, rho = u, fu, rho_u
        eta = 2 * t
        it += 1
    return MinimalVectorResult(v, float(np.linalg.norm(rho)), it, status, f ** 0.5, trace)


def rank_sample(action: LieAction, v, tol: float = 1e-8) -> int:
    """Numerical rank of the real k x 2n Jacobian of rho at v.

    With ``v = x + i y`` and ``g_a = v^H B_a``, the row of ``rho_a`` is
    ``(Im g_a, Re g_a)`` in the coordinates ``(x, y)``.
    """
    w = np.asarray(v, dtype=complex).ravel()
    g = np.einsum("i,aij->aj", w.conj(), action.compact_basis)
    J = np.concatenate([g.imag, g.real], axis=1)
    s = np.linalg.svd(J, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def membership_check(action: LieAction, v, mi=None) -> float:
    """``max_a |mu_a(v, conj v)|`` for the symbolic quadrics."""
    vals = complex_moment_values(action, v, mi)
    return float(np.max(np.abs(vals), initial=0.0))


def compact_group_element(action: LieAction, coeffs: Sequence[float]) -> np.ndarray:
    """``exp(sum_a c_a B_a)`` for real coefficients; a unitary matrix."""
    H = 1j * np.einsum("a,aij->ij", np.asarray(coeffs, dtype=float), action.compact_basis)
    vals, vecs = np.linalg.eigh((H + H.conj().T) / 2)
    return vecs @ np.diag(np.exp(-1j * vals)) @ vecs.conj().T


def write_trace(result: MinimalVectorResult, out: IO[str]) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["iteration", "norm_squared", "rho_norm"])
    for it, f, r in result.trace:
        w.writerow([it, repr(f), repr(r)])
