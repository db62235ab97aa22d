"""Exponent recurrences for contribution counts and the fs bounds they imply.

If every simple m x c*m^(k-1) matrix makes m^a contributions, then
fs(m, F) = O(m^(2k-1-a)) for every k-row F. Each recurrence below improves
an exponent gamma that parametrises ``a``:

* ``k2``: a = 1 - gamma, gamma -> gamma / (k - 1 + gamma), from gamma_0 = 1;
* ``quadratic``: a = k - 1 - gamma, gamma -> h(gamma), from gamma_0 = k - 1;
* ``exact``: as ``quadratic`` but solving the un-simplified floor-sum
  balance for the next gamma instead of its quadratic lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConvergenceError, DomainError

MODES = ("k2", "quadratic", "exact")
BISECTION_TOL = 1e-12
ITERATION_TOL = 1e-9
MAX_ITER = 10**6


def gamma_step_k2(gamma: float, k: int) -> float:
    if not 0 < gamma <= 1 or k < 2:
        raise DomainError(f"need 0 < gamma <= 1 and k >= 2, got gamma={gamma}, k={k}")
    return gamma / (k - 1 + gamma)


def gamma_step_quadratic(gamma: float, k: int) -> float:
    """h(gamma): the root in [0, k-1] of k - 1 - x = x(x+1) / (2 gamma)."""
    if k < 2 or not 0 <= gamma <= k - 1:
        raise DomainError(f"need k >= 2 and 0 <= gamma <= k-1, got gamma={gamma}, k={k}")
    b = 2 * gamma + 1
    return (-b + math.sqrt(b * b + 8 * gamma * (k - 1))) / 2


def floor_sum(x: float) -> float:
    """sum_{j=1}^{floor(x+1)} (x - j + 1).

    Continuous in x: the term admitted at an integer x is zero.
    """
    if x < 0:
        raise DomainError("floor_sum needs x >= 0")
    terms = math.floor(x + 1)
    return terms * (x + 1) - terms * (terms + 1) / 2


def exact_balance(x: float, gamma: float, k: int) -> float:
    """(k - 1 - x) - floor_sum(x) / gamma; strictly decreasing in x."""
    return (k - 1 - x) - floor_sum(x) / gamma


def gamma_step_exact(gamma: float, k: int, tol: float = BISECTION_TOL) -> float:
    """Root in [0, k-1] of ``exact_balance(., gamma, k)`` by bisection."""
    if k < 2 or not 0 < gamma <= k - 1 or tol <= 0:
        raise DomainError(f"need k >= 2, 0 < gamma <= k-1, tol > 0; got gamma={gamma}, k={k}")
    lo, hi = 0.0, float(k - 1)
    f_lo, f_hi = exact_balance(lo, gamma, k), exact_balance(hi, gamma, k)
    if f_lo < 0 or f_hi > 0 or (f_lo == 0 and f_hi == 0):
        raise DomainError("no sign change on [0, k-1]")
    if f_lo == 0:
        return lo
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if exact_balance(mid, gamma, k) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def fs_exponent_bound(k: int, contribution_exponent: float) -> float:
    """Exponent of the fs upper bound when m^a contributions are guaranteed."""
    if not 0 <= contribution_exponent <= k - 1:
        raise DomainError(f"contribution exponent must lie in [0, {k - 1}]")
    return 2 * k - 1 - contribution_exponent


def alpha(k: int) -> float:
    """Fixed point 2k/3 - 1 of the quadratic recurrence."""
    return 2 * k / 3 - 1


@dataclass(frozen=True)
class ExponentState:
    k: int
    mode: str
    gamma_sequence: tuple[float, ...] = field(repr=False)
    limit: float
    fs_exponent: float
    alpha: float
    converged: bool = True

    @property
    def iterations(self) -> int:
        return len(self.gamma_sequence) - 1

    def to_dict(self, sequence_terms: int = 0) -> dict:
        out = {
            "k": self.k,
            "mode": self.mode,
            "limit": self.limit,
            "fs_exponent": self.fs_exponent,
            "alpha": self.alpha,
            "iterations": self.iterations,
            "converged": self.converged,
        }
        if sequence_terms:
            out["gamma_sequence"] = list(self.gamma_sequence[:sequence_terms])
        return out


def contribution_exponent(k: int, mode: str, gamma: float) -> float:
    return 1 - gamma if mode == "k2" else k - 1 - gamma


def initial_gamma(k: int, mode: str) -> float:
    return 1.0 if mode == "k2" else float(k - 1)


def iterate_to_limit(
    k: int,
    mode: str,
    tol: float = ITERATION_TOL,
    max_iter: int = MAX_ITER,
    bisection_tol: float = BISECTION_TOL,
) -> ExponentState:
    """Iterate the chosen step from its starting gamma until successive terms
    differ by less than ``tol``.

    Raises :class:`ConvergenceError` carrying the partial state when
    ``max_iter`` steps are not enough.
    """
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if k < 2:
        raise DomainError("k must be at least 2")
    if tol <= 0:
        raise DomainError("tol must be positive")
    if mode == "k2":
        step = lambda g: gamma_step_k2(g, k)  # noqa: E731
    elif mode == "quadratic":
        step = lambda g: gamma_step_quadratic(g, k)  # noqa: E731
    else:
        step = lambda g: gamma_step_exact(g, k, bisection_tol)  # noqa: E731

    seq = [initial_gamma(k, mode)]
    converged = False
    for _ in range(max_iter):
        g = seq[-1]
        if g == 0:
            converged = True
            break
        nxt = step(g)
        seq.append(nxt)
        if abs(nxt - g) < tol:
            converged = True
            break

    limit = seq[-1]
    state = ExponentState(
        k=k,
        mode=mode,
        gamma_sequence=tuple(seq),
        limit=limit,
        fs_exponent=fs_exponent_bound(k, contribution_exponent(k, mode, limit)),
        alpha=alpha(k),
        converged=converged,
    )
    if not converged:
        raise ConvergenceError(f"no convergence within {max_iter} steps", state)
    return state


def exponent_table(kmin: int, kmax: int, mode: str, tol: float = ITERATION_TOL) -> list[ExponentState]:
    return [iterate_to_limit(k, mode, tol) for k in range(kmin, kmax + 1)]
