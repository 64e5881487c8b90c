"""Network functionals evaluated on any correlator provider.

Each term is expanded into individual correlator calls; no provider is
asked for pre-summed quantities.  Summation follows index order so results
are bit-reproducible.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import GuardError
from .scenario import encode, sign, wrap_next

FAMILIES = ("star_delta", "star_c", "chain_I", "chain_T")
EVAL_GUARD = 2 ** 22


@dataclass(frozen=True)
class FunctionalSpec:
    family: str
    n: int
    m: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.n < 2 or self.m < 2:
            raise ValueError(f"need n >= 2 and m >= 2, got n={self.n}, m={self.m}")

    @property
    def topology(self) -> str:
        return "star" if self.family.startswith("star") else "chain"


@dataclass
class FunctionalValue:
    family: str
    n: int
    total: float
    terms: dict = field(default_factory=dict)

    def recompute_total(self) -> float:
        return aggregate(self.family, self.n, self.terms.values())

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "total": self.total,
            "terms": [{"index": list(k) if isinstance(k, tuple) else k, "value": v} for k, v in self.terms.items()],
        }


def aggregate(family: str, n: int, term_values) -> float:
    """Combine term values by the family's rule (roots only after accumulation)."""
    vals = list(term_values)
    if family == "star_delta":
        return math.fsum(abs(v) ** (1.0 / n) for v in vals)
    if family == "chain_I":
        return math.fsum(math.sqrt(abs(v)) for v in vals)
    return math.fsum(vals)


def _value(family: str, n: int, terms: dict) -> FunctionalValue:
    return FunctionalValue(family, n, aggregate(family, n, terms.values()), terms)


def eval_star_delta(provider, n: int, m: int) -> FunctionalValue:
    """Sum over y of |I_y|**(1/n), I_y = <prod_k sum_x s(y,x) A^k_x B_y>."""
    enc = encode(m)
    terms = {}
    for y in range(1, len(enc) + 1):
        s = [sign(enc, y, x) for x in range(1, m + 1)]
        acc = 0.0
        for xs in itertools.product(range(1, m + 1), repeat=n):
            coef = math.prod(s[x - 1] for x in xs)
            acc += coef * provider.correlator(xs, y)
        terms[y] = acc
    return _value("star_delta", n, terms)


def eval_star_c(provider, n: int, m: int) -> FunctionalValue:
    """Sum over (t, j) of <prod_{k != t} A^k_j (A^t_j + A^t_{j+1}) B_{j,t}>."""
    terms = {}
    for t in range(1, n + 1):
        for j in range(1, m + 1):
            nxt, w = wrap_next(j, m)
            xs = [j] * n
            first = provider.correlator(tuple(xs), (j, t))
            xs[t - 1] = nxt
            terms[(j, t)] = first + w * provider.correlator(tuple(xs), (j, t))
    return _value("star_c", n, terms)


def eval_chain_I(provider, n: int, m: int) -> FunctionalValue:
    """Sum over r of sqrt|J_r|, with every middle party fed the same r."""
    enc = encode(m)
    terms = {}
    for r in range(1, len(enc) + 1):
        rs = (r,) * (n - 1)
        acc = 0.0
        for x in range(1, m + 1):
            for z in range(1, m + 1):
                acc += sign(enc, r, x) * sign(enc, r, z) * provider.correlator(x, rs, z)
        terms[r] = acc
    return _value("chain_I", n, terms)


def eval_chain_T(provider, n: int, m: int) -> FunctionalValue:
    """Chained sums on Alice's side (t=1) and Charlie's side (t=2), matched index r."""
    terms = {}
    for t in (1, 2):
        for r in range(1, m + 1):
            nxt, w = wrap_next(r, m)
            rs = ((r, t),) * (n - 1)
            if t == 1:
                val = provider.correlator(r, rs, r) + w * provider.correlator(nxt, rs, r)
            else:
                val = provider.correlator(r, rs, r) + w * provider.correlator(r, rs, nxt)
            terms[(r, t)] = val
    return _value("chain_T", n, terms)


_EVALUATORS = {
    "star_delta": eval_star_delta,
    "star_c": eval_star_c,
    "chain_I": eval_chain_I,
    "chain_T": eval_chain_T,
}


def correlator_calls(spec: FunctionalSpec) -> int:
    """Number of provider correlator calls one evaluation makes."""
    n, m = spec.n, spec.m
    if spec.family == "star_delta":
        return 2 ** (m - 1) * m ** n
    if spec.family == "chain_I":
        return 2 ** (m - 1) * m * m
    return 2 * m * (n if spec.family == "star_c" else 2)


def evaluate(spec: FunctionalSpec, provider) -> FunctionalValue:
    calls = correlator_calls(spec)
    if calls > EVAL_GUARD:
        raise GuardError("functionals", f"evaluation needs {calls} correlator calls, guard is {EVAL_GUARD}")
    return _EVALUATORS[spec.family](provider, spec.n, spec.m)
