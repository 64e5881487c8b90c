"""Measurement operators and states for the optimal quantum strategies."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateError
from .linalg import SX, SY, SZ
from .scenario import StarScenario, encode, sign, wrap_next


@dataclass(frozen=True, eq=False)
class ObservableFamily:
    """Ordered dichotomic observables of one party, indexed from 1."""

    operators: tuple

    def __post_init__(self):
        ops = tuple(linalg.matrix(op) for op in self.operators)
        if not ops:
            raise ValueError("an observable family needs at least one operator")
        dims = {op.shape for op in ops}
        if len(dims) != 1 or ops[0].shape[0] != ops[0].shape[1]:
            raise ValueError(f"operators must share one square shape, got {sorted(dims)}")
        object.__setattr__(self, "operators", ops)

    @property
    def m(self) -> int:
        return len(self.operators)

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def op(self, x: int) -> np.ndarray:
        if not 1 <= x <= self.m:
            raise IndexError(f"input {x} outside [1, {self.m}]")
        return self.operators[x - 1]

    def is_valid(self, tol: float = linalg.ALGEBRA_TOL) -> bool:
        return all(linalg.is_involution(op, tol) for op in self.operators)


@dataclass(frozen=True, eq=False)
class CompositeObservable:
    """Product observable of the central party, one factor per source.

    Factors are kept separate; :meth:`dense` multiplies them out.
    """

    factors: tuple

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)

    @property
    def dim(self) -> int:
        return math.prod(self.dims)

    def dense(self) -> np.ndarray:
        return linalg.kron_all(self.factors)


def planar_family(m: int, dim: int = 2) -> ObservableFamily:
    """Qubit observables at angles (x-1)*pi/m in the x-z plane."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if dim != 2:
        raise ValueError("planar families are defined on qubits only")
    ops = []
    for x in range(1, m + 1):
        theta = (x - 1) * math.pi / m
        ops.append(math.cos(theta) * SZ + math.sin(theta) * SX)
    return ObservableFamily(tuple(ops))


def _gamma_generators(k: int) -> list[np.ndarray]:
    # 2k+1 mutually anticommuting involutions in dimension 2**k
    if k == 1:
        return [SX, SZ, SY]
    eye = np.eye(2 ** (k - 1), dtype=complex)
    return [np.kron(SX, eye), np.kron(SZ, eye)] + [np.kron(SY, g) for g in _gamma_generators(k - 1)]


def anticommuting_family(m: int) -> ObservableFamily:
    """m pairwise anticommuting involutions in dimension 2**ceil((m-1)/2)."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    k = max(1, math.ceil((m - 1) / 2))
    return ObservableFamily(tuple(_gamma_generators(k)[:m]))


def max_entangled_state(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |ii>."""
    if d < 2:
        raise ValueError(f"need d >= 2, got {d}")
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0 / math.sqrt(d)
    return v


def anticommutator_table(family: ObservableFamily) -> dict[tuple[int, int], float]:
    """Normalized trace Tr({A_x, A_x'})/d for every pair x < x'."""
    d = family.dim
    table = {}
    for x in range(1, family.m + 1):
        for xp in range(x + 1, family.m + 1):
            ac = linalg.anticommutator(family.op(x), family.op(xp))
            table[(x, xp)] = float(np.trace(ac).real / d)
    return table


def normalized_combination(family: ObservableFamily, coeffs: dict[int, float]) -> tuple[np.ndarray, float]:
    """Return (M / nu, nu) for M = sum_x c_x A_x and nu = sqrt(Tr(M^2)/d).

    nu is the norm of M applied to a maximally entangled state.
    """
    mat = sum(c * family.op(x) for x, c in coeffs.items())
    nu = math.sqrt(max(0.0, linalg.trace_product(mat, mat).real / family.dim))
    if nu < 1e-12:
        raise DegenerateError(f"combination {coeffs} has vanishing normalizer")
    return mat / nu, nu


def chained_pair(family: ObservableFamily, j: int) -> dict[int, float]:
    """Coefficients of A_j + A_{j+1}, with A_{m+1} = -A_1."""
    nxt, s = wrap_next(j, family.m)
    return {j: 1.0, nxt: float(s)}


def _check_factor(op: np.ndarray) -> np.ndarray:
    if not linalg.is_involution(op, linalg.PHYSICS_TOL):
        raise ValueError("constructed central-party factor is not a dichotomic observable")
    return op


def bob_composite(mode: str, scenario: StarScenario, edge_families, index) -> CompositeObservable:
    """SOS-optimal central observable for input ``index``.

    ``mode="delta"`` takes ``index = y``; factor k is the transpose of the
    normalized sign-weighted sum of edge k's observables.
    ``mode="c"`` takes ``index = (j, t)``; factor t is the transpose of the
    normalized chained pair A_j + A_{j+1}, every other factor is A_j transposed.
    """
    families = list(edge_families)
    if len(families) != scenario.n:
        raise ValueError(f"expected {scenario.n} edge families, got {len(families)}")
    if any(f.m != scenario.m for f in families):
        raise ValueError("edge family sizes do not match the scenario")
    if mode == "delta":
        enc = encode(scenario.m)
        y = index
        coeffs = {x: float(sign(enc, y, x)) for x in range(1, scenario.m + 1)}
        factors = tuple(_check_factor(normalized_combination(f, coeffs)[0].T) for f in families)
    elif mode == "c":
        j, t = index
        if not (1 <= j <= scenario.m and 1 <= t <= scenario.n):
            raise IndexError(f"(j, t)={index} out of range")
        factors = []
        for k, fam in enumerate(families, start=1):
            if k == t:
                op = normalized_combination(fam, chained_pair(fam, j))[0]
            else:
                op = fam.op(j)
            factors.append(_check_factor(op.T))
        factors = tuple(factors)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return CompositeObservable(factors)


# A qubit maximally entangled pair measured with sigma_z on both sides
# carries the middle parties' inputs through the chain unchanged.
_RELAY = SZ


def chain_bob_factors(mode: str, n: int, alice: ObservableFamily, charlie: ObservableFamily, label):
    """Factors (left, right) of each middle party's optimal observable.

    ``mode="I"`` takes an integer label r; ``mode="T"`` takes (r, t).
    Middle sources between two middle parties use a sigma_z relay.
    """
    m = alice.m
    if mode == "I":
        enc = encode(m)
        coeffs = {x: float(sign(enc, label, x)) for x in range(1, m + 1)}
        left_end = normalized_combination(alice, coeffs)[0].T
        right_end = normalized_combination(charlie, coeffs)[0].T
    elif mode == "T":
        r, t = label
        if t == 1:
            left_end = normalized_combination(alice, chained_pair(alice, r))[0].T
            right_end = charlie.op(r).T
        elif t == 2:
            left_end = alice.op(r).T
            right_end = normalized_combination(charlie, chained_pair(charlie, r))[0].T
        else:
            raise IndexError(f"t={t} outside [1, 2]")
    else:
        raise ValueError(f"unknown chain mode {mode!r}")
    out = []
    for k in range(1, n):
        left = left_end if k == 1 else _RELAY.T
        right = right_end if k == n - 1 else _RELAY
        out.append((_check_factor(left), _check_factor(right)))
    return out
