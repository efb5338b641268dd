"""Resonant/non-resonant multi-index combinatorics of the frequency vector.

Multi-indices are plain tuples of Python ints, so all lattice predicates are
exact; the only floating-point operation is the dot product with the
frequency vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import FrequencyResonant, NotStabilized

MultiIndex = tuple[int, ...]

#: |m . omega| below this counts as a numerically resonant combination.
TOL_RES = 1e-9

#: First radius tried by the stabilization loop.
START_RADIUS = 3


def degree(m: MultiIndex) -> int:
    return sum(m)


def abs_index(m: MultiIndex) -> MultiIndex:
    return tuple(abs(c) for c in m)


def norm1(m: MultiIndex) -> int:
    return sum(abs(c) for c in m)


def preceq(m: MultiIndex, n: MultiIndex) -> bool:
    """Componentwise partial order m <= n."""
    return all(a <= b for a, b in zip(m, n))


def prec(m: MultiIndex, n: MultiIndex) -> bool:
    """Strict partial order: m <= n componentwise and m != n."""
    return m != n and preceq(m, n)


def unit_index(j: int, n_modes: int) -> MultiIndex:
    return tuple(1 if i == j else 0 for i in range(n_modes))


def zpow(z: np.ndarray, m: MultiIndex) -> complex:
    """Signed monomial z^m: positive entries use z_j, negative conj(z_j)."""
    out = complex(1.0)
    for zj, mj in zip(z, m):
        if mj >= 0:
            out *= zj**mj
        else:
            out *= np.conj(zj) ** (-mj)
    return out


def dzpow(z: np.ndarray, m: MultiIndex, w: np.ndarray) -> complex:
    """Real-linear directional derivative of z^m in direction w."""
    out = complex(0.0)
    for j, mj in enumerate(m):
        if mj == 0:
            continue
        rest = list(m)
        rest[j] = 0
        prefix = zpow(z, tuple(rest))
        if mj > 0:
            out += prefix * mj * z[j] ** (mj - 1) * w[j]
        else:
            out += prefix * (-mj) * np.conj(z[j]) ** (-mj - 1) * np.conj(w[j])
    return out


def dzpow_holomorphic(z: np.ndarray, m: MultiIndex, j: int) -> complex:
    """Partial derivative of z^m with respect to z_j (zero if m_j < 0)."""
    mj = m[j]
    if mj <= 0:
        return complex(0.0)
    rest = list(m)
    rest[j] = 0
    return zpow(z, tuple(rest)) * mj * z[j] ** (mj - 1)


@dataclass(frozen=True)
class FrequencyVector:
    """Strictly increasing negative frequencies with a nonresonance witness."""

    omegas: np.ndarray

    def __post_init__(self):
        om = np.asarray(self.omegas, dtype=float)
        object.__setattr__(self, "omegas", om)
        if om.ndim != 1 or om.size < 1:
            raise ValueError("omegas must be a nonempty 1-d vector")
        if not np.all(np.diff(om) > 0):
            raise ValueError("omegas must be strictly increasing")
        if not np.all(om < 0):
            raise ValueError("omegas must all be negative")

    @property
    def n_modes(self) -> int:
        return self.omegas.size

    def dot(self, m: MultiIndex) -> float:
        return float(np.dot(self.omegas, m))

    def nonresonance_margin(self, radius: int) -> tuple[float, MultiIndex]:
        """Smallest |m . omega| over the full lattice ball 0 < ||m|| <= radius."""
        best = np.inf
        worst: MultiIndex = ()
        for m in _lattice_ball(self.n_modes, radius):
            val = abs(self.dot(m))
            if val < best:
                best, worst = val, m
        return best, worst

    def validate_nonresonant(self, radius: int, tol: float = TOL_RES) -> None:
        margin, worst = self.nonresonance_margin(radius)
        if margin <= tol:
            raise FrequencyResonant(
                f"m={worst} gives |m.omega|={margin:.3e} <= {tol:.1e}"
            )


@dataclass(frozen=True)
class IndexSets:
    """Minimal resonant and truncated non-resonant indices."""

    R_min: frozenset[MultiIndex]
    NR_1: frozenset[MultiIndex]
    radius_used: int
    stabilized: bool
    n_modes: int = field(default=0)

    def sorted_r_min(self) -> list[MultiIndex]:
        return sorted(self.R_min)

    def sorted_nr_1(self) -> list[MultiIndex]:
        return sorted(self.NR_1)


def _lattice_ball(n: int, radius: int) -> Iterator[MultiIndex]:
    """All m in Z^n with 0 < ||m||_1 <= radius, lexicographic order."""

    def rec(prefix: tuple[int, ...], budget: int) -> Iterator[MultiIndex]:
        if len(prefix) == n:
            yield prefix
            return
        for c in range(-budget, budget + 1):
            yield from rec(prefix + (c,), budget - abs(c))

    for m in rec((), radius):
        if any(m):
            yield m


def _degree_one_slice(n: int, radius: int) -> Iterator[MultiIndex]:
    """All m in Z^n with sum(m) = 1 and ||m||_1 <= radius."""

    def rec(prefix: tuple[int, ...], budget: int, deg: int) -> Iterator[MultiIndex]:
        pos = len(prefix)
        if pos == n:
            if deg == 1:
                yield prefix
            return
        for c in range(-budget, budget + 1):
            nb = budget - abs(c)
            # remaining coordinates must reach degree 1 within their budget
            if abs(1 - (deg + c)) > nb:
                continue
            yield from rec(prefix + (c,), nb, deg + c)

    yield from rec((), radius, 0)


def enumerate_r_nr(
    freqs: FrequencyVector, radius: int, tol: float = TOL_RES
) -> tuple[set[MultiIndex], set[MultiIndex]]:
    """Partition the degree-one slice of radius ``radius`` into (R, NR).

    Raises FrequencyResonant if any enumerated index pairs to zero within
    ``tol``; the partition would be ill-defined there.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    res: set[MultiIndex] = set()
    non: set[MultiIndex] = set()
    for m in _degree_one_slice(freqs.n_modes, radius):
        val = freqs.dot(m)
        if abs(val) <= tol:
            raise FrequencyResonant(f"m={m} gives m.omega={val:.3e}")
        (res if val > 0 else non).add(m)
    return res, non


def minimal_resonant(res: set[MultiIndex]) -> set[MultiIndex]:
    """Indices of R whose absolute vector is minimal for the strict order."""
    out = set()
    for m in res:
        am = abs_index(m)
        if not any(prec(abs_index(n), am) for n in res):
            out.add(m)
    return out


def nonresonant_truncated(
    non: set[MultiIndex], r_min: set[MultiIndex]
) -> set[MultiIndex]:
    """Non-resonant indices not strictly dominating any minimal resonant one."""
    mins = [abs_index(n) for n in r_min]
    return {m for m in non if not any(prec(a, abs_index(m)) for a in mins)}


def index_sets_stabilized(
    freqs: FrequencyVector, max_radius: int, tol: float = TOL_RES
) -> IndexSets:
    """Grow the enumeration radius until R_min and NR_1 stop changing.

    Stabilization means two consecutive radius increments left both sets
    unchanged; this is an empirical stand-in for their finiteness.
    """
    if max_radius < START_RADIUS:
        raise ValueError(f"max_radius must be >= {START_RADIUS}")
    history: list[tuple[frozenset, frozenset]] = []
    radius = START_RADIUS
    while radius <= max_radius:
        res, non = enumerate_r_nr(freqs, radius, tol)
        rmin = frozenset(minimal_resonant(res))
        nr1 = frozenset(nonresonant_truncated(non, set(rmin)))
        history.append((rmin, nr1))
        if len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            return IndexSets(rmin, nr1, radius, True, freqs.n_modes)
        radius += 1
    raise NotStabilized(
        f"index sets still changing at max_radius={max_radius}"
    )


def enumerate_A(
    m_order: int, m: MultiIndex, nr_1: Sequence[MultiIndex] | set[MultiIndex]
) -> list[tuple[MultiIndex, ...]]:
    """Composition tuples of length 2*m_order+1 over NR_1 reproducing ``m``.

    A tuple (m_1, ..., m_{2p+1}) qualifies when the alternating signed sum
    (odd slots minus even slots) equals m and the componentwise sum of
    absolute vectors equals |m| exactly.  Output is lexicographic.
    """
    if m_order < 1:
        raise ValueError("m_order must be >= 1")
    slots = 2 * m_order + 1
    target_abs = abs_index(m)
    if slots > sum(target_abs):
        return []
    pool = sorted(set(nr_1))
    n = len(m)
    out: list[tuple[MultiIndex, ...]] = []

    def rec(chosen: tuple[MultiIndex, ...], abs_acc: tuple[int, ...],
            signed_acc: tuple[int, ...]) -> None:
        pos = len(chosen)
        if pos == slots:
            if abs_acc == target_abs and signed_acc == m:
                out.append(chosen)
            return
        sign = 1 if pos % 2 == 0 else -1
        slack = slots - pos - 1  # each remaining slot adds at least one unit
        for cand in pool:
            na = tuple(a + b for a, b in zip(abs_acc, abs_index(cand)))
            if any(a > t for a, t in zip(na, target_abs)):
                continue
            if sum(target_abs) - sum(na) < slack:
                continue
            ns = tuple(s + sign * c for s, c in zip(signed_acc, cand))
            rec(chosen + (cand,), na, ns)

    rec((), (0,) * n, (0,) * n)
    return out


def max_source_order(m: MultiIndex) -> int:
    """Largest p with 2p+1 <= ||m||; beyond it A(p, m) is empty."""
    return max((norm1(m) - 1) // 2, 0)
