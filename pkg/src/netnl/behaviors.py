"""Correlator providers: quantum, deterministic local, no-signaling boxes and hybrids.

Every provider returns full network correlators, i.e. expectations of the
product of all parties' +-1 outcomes (outcome o in {0, 1} maps to (-1)**o).

Star providers implement ``correlator(xs, y)`` with one input per edge party
and the central party's input label ``y``.  Chain providers implement
``correlator(x, rs, z)`` with Alice's input, the tuple of middle-party
inputs, and Charlie's input.

Sources are *links* between two parties.  The ``u`` side of a link is the
central (star) or the earlier middle party (chain); the ``v`` side is the
other party.  A network correlator is the product of link correlators.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Hashable, Mapping, Protocol, Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, GuardError
from .observables import (
    CompositeObservable,
    ObservableFamily,
    anticommuting_family,
    bob_composite,
    chain_bob_factors,
    max_entangled_state,
    planar_family,
)
from .scenario import ChainScenario, StarScenario, encode

NS_TOL = 1e-12
DENSE_MAX_EDGES = 4


class Link(Protocol):
    def link_correlator(self, u: Hashable, v: Hashable) -> float: ...


# -- no-signaling boxes ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NoSignalingBox:
    """Conditional distribution P(b, a | y, x) over binary outputs.

    ``table[iy, ix, b, a]`` with ``iy``/``ix`` positions in ``y_labels``/``x_labels``.
    """

    y_labels: tuple
    x_labels: tuple
    table: np.ndarray
    kind: str = "custom"
    _y_index: dict = field(init=False, repr=False)
    _x_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        shape = (len(self.y_labels), len(self.x_labels), 2, 2)
        if table.shape != shape:
            raise DimensionError(f"box table has shape {table.shape}, expected {shape}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "_y_index", {lab: i for i, lab in enumerate(self.y_labels)})
        object.__setattr__(self, "_x_index", {lab: i for i, lab in enumerate(self.x_labels)})
        problems = check_box(self)
        if problems:
            raise ValueError("invalid no-signaling box: " + "; ".join(problems))

    @property
    def m_a(self) -> int:
        return len(self.x_labels)

    @property
    def m_b(self) -> int:
        return len(self.y_labels)

    def correlator(self, y: Hashable, x: Hashable) -> float:
        return box_correlator(self, y, x)

    link_correlator = correlator

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "m_a": self.m_a,
            "m_b": self.m_b,
            "index_order": ["y", "x", "b", "a"],
            "y_labels": [_label_json(lab) for lab in self.y_labels],
            "x_labels": [_label_json(lab) for lab in self.x_labels],
            "table": self.table.tolist(),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "NoSignalingBox":
        y_labels = tuple(_label_from_json(v) for v in data.get("y_labels", range(1, data["m_b"] + 1)))
        x_labels = tuple(_label_from_json(v) for v in data.get("x_labels", range(1, data["m_a"] + 1)))
        return cls(y_labels, x_labels, np.array(data["table"], dtype=float), data.get("kind", "custom"))


def _label_json(label):
    return list(label) if isinstance(label, tuple) else label


def _label_from_json(value):
    return tuple(value) if isinstance(value, list) else value


def check_box(box: NoSignalingBox, tol: float = NS_TOL) -> list[str]:
    """Return the violated constraints (empty list for a valid box)."""
    t = box.table
    problems = []
    if np.any(t < -tol):
        problems.append("negative probability")
    norm = t.sum(axis=(2, 3))
    if np.max(np.abs(norm - 1.0)) > tol:
        problems.append("normalization")
    # marginal of a must not depend on y, marginal of b must not depend on x
    p_a = t.sum(axis=2)
    if np.max(np.abs(p_a - p_a[:1])) > tol:
        problems.append("edge marginal depends on the central input")
    p_b = t.sum(axis=3)
    if np.max(np.abs(p_b - p_b[:, :1])) > tol:
        problems.append("central marginal depends on the edge input")
    return problems


_PARITY = np.array([[1.0, -1.0], [-1.0, 1.0]])  # (-1)**(a+b), indexed [b, a]


def box_correlator(box: NoSignalingBox, y: Hashable, x: Hashable) -> float:
    """sum_{a,b} (-1)**(a+b) P(b, a | y, x)."""
    try:
        iy, ix = box._y_index[y], box._x_index[x]
    except KeyError as exc:
        raise KeyError(f"input {exc.args[0]!r} not accepted by this box") from None
    return float(np.sum(_PARITY * box.table[iy, ix]))


def _parity_box(y_labels, x_labels, parity, kind) -> NoSignalingBox:
    """Box with uniform marginals and b xor a = parity(y, x)."""
    table = np.zeros((len(y_labels), len(x_labels), 2, 2))
    for iy, y in enumerate(y_labels):
        for ix, x in enumerate(x_labels):
            p = parity(y, x)
            for a in (0, 1):
                table[iy, ix, a ^ p, a] = 0.5
    return NoSignalingBox(tuple(y_labels), tuple(x_labels), table, kind)


def make_box(kind: str, m: int | None = None, *, n: int | None = None, labels=None) -> NoSignalingBox:
    """Construct one of the fixed boxes used by the hybrid models.

    ``zbit``: y in [2**(m-1)], x in [m]; b xor a equals bit x of string y.
    ``shifted``: b xor a = 1 only when j - x = m - 1; central labels are j,
    or (j, t) for t in [n] when ``n`` is given (the rule ignores t).
    ``chain_shifted``: the shifted rule on central labels (r, t), t in {1, 2}.
    ``identity``: perfectly correlated outputs on ``labels`` (both sides).
    """
    if kind == "identity":
        if labels is None:
            if m is None:
                raise ValueError("identity box needs labels or m")
            labels = range(1, m + 1)
        labels = tuple(labels)
        return _parity_box(labels, labels, lambda y, x: 0, "identity")
    if m is None or m < 2:
        raise ValueError(f"box kind {kind!r} needs m >= 2")
    xs = tuple(range(1, m + 1))
    if kind == "zbit":
        enc = encode(m)
        ys = tuple(range(1, 2 ** (m - 1) + 1))
        return _parity_box(ys, xs, lambda y, x: enc.strings[y - 1][x - 1], "zbit")

    def shifted(j, x):
        return 1 if j - x == m - 1 else 0

    if kind == "shifted":
        if n is None:
            return _parity_box(xs, xs, shifted, "shifted")
        ys = tuple((j, t) for t in range(1, n + 1) for j in xs)
        return _parity_box(ys, xs, lambda y, x: shifted(y[0], x), "shifted")
    if kind == "chain_shifted":
        ys = tuple((r, t) for t in (1, 2) for r in xs)
        return _parity_box(ys, xs, lambda y, x: shifted(y[0], x), "chain_shifted")
    raise ValueError(f"unknown box kind {kind!r}")


# -- local models ------------------------------------------------------------


@dataclass(frozen=True)
class DeterministicStrategy:
    """Fixed +-1 response of one party, as a map input -> output."""

    outputs: Mapping

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.outputs.values()):
            raise ValueError("deterministic outputs must be +1 or -1")

    def __call__(self, inp) -> int:
        return self.outputs[inp]

    def is_total(self, inputs) -> bool:
        return all(i in self.outputs for i in inputs)

    @classmethod
    def from_signs(cls, labels, signs) -> "DeterministicStrategy":
        return cls(dict(zip(labels, (int(s) for s in signs))))

    @classmethod
    def constant(cls, labels, value: int = 1) -> "DeterministicStrategy":
        return cls({lab: value for lab in labels})


@dataclass(frozen=True)
class LocalSource:
    """Convex mixture of deterministic strategy pairs for one local source.

    Each component is ``(weight, v_strategy, u_strategy)``.
    """

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a local source needs at least one component")
        weights = [w for w, _, _ in comps]
        if min(weights) < -1e-12 or abs(sum(weights) - 1.0) > 1e-9:
            raise ValueError("mixture weights must be non-negative and sum to 1")
        object.__setattr__(self, "components", comps)

    @classmethod
    def deterministic(cls, v_strategy: DeterministicStrategy, u_strategy: DeterministicStrategy) -> "LocalSource":
        return cls(((1.0, v_strategy, u_strategy),))

    def link_correlator(self, u, v) -> float:
        return float(sum(w * sv(v) * su(u) for w, sv, su in self.components))


# -- quantum -----------------------------------------------------------------


def _is_max_entangled(state: np.ndarray, d: int) -> bool:
    return state.shape == (d * d,) and bool(np.max(np.abs(state - max_entangled_state(d))) <= 1e-12)


def quantum_correlator(edge_states, edge_observables, bob: CompositeObservable) -> float:
    """<psi| (A^1 x B^1) x ... x (A^n x B^n) |psi> for a product of edge states.

    ``edge_states[k]`` lives on (edge party k) x (central subsystem k).  When
    every state is maximally entangled the value is prod_k Tr(A^k (B^k)^T)/d_k;
    otherwise the full state is contracted densely (at most 4 edges).
    """
    ops = list(edge_observables)
    factors = list(bob.factors)
    if len(ops) != len(factors):
        raise DimensionError(f"{len(ops)} edge observables but {len(factors)} central factors")
    if edge_states is None:
        edge_states = [max_entangled_state(op.shape[0]) for op in ops]
    states = [np.asarray(s, dtype=complex) for s in edge_states]
    if len(states) != len(ops):
        raise DimensionError("one state per edge is required")
    for s, a, b in zip(states, ops, factors):
        if s.shape[0] != a.shape[0] * b.shape[0]:
            raise DimensionError(f"state of length {s.shape[0]} does not fit {a.shape[0]}x{b.shape[0]}")
    if all(a.shape == b.shape and _is_max_entangled(s, a.shape[0]) for s, a, b in zip(states, ops, factors)):
        value = 1.0
        for a, b in zip(ops, factors):
            value *= linalg.trace_product(a, b.T).real / a.shape[0]
        return value
    if len(ops) > DENSE_MAX_EDGES:
        raise GuardError("behaviors", f"dense contraction limited to {DENSE_MAX_EDGES} edges, got {len(ops)}")
    return _dense_correlator(states, ops, factors)


def _dense_correlator(states, ops, factors) -> float:
    shape = []
    psi = np.ones(1, dtype=complex)
    for s, a, b in zip(states, ops, factors):
        psi = np.kron(psi, s)
        shape += [a.shape[0], b.shape[0]]
    tensor = psi.reshape(shape)
    out = tensor
    for k, (a, b) in enumerate(zip(ops, factors)):
        out = linalg.apply_local(a, out, 2 * k)
        out = linalg.apply_local(b, out, 2 * k + 1)
    return float(np.vdot(tensor, out).real)


class QuantumStarProvider:
    """Star network with maximally entangled edge states (or given states)."""

    topology = "star"

    def __init__(self, edge_families: Sequence[ObservableFamily], bob, edge_states=None):
        self.edge_families = list(edge_families)
        self.n = len(self.edge_families)
        self._bob = bob
        self.edge_states = edge_states
        self._fast = edge_states is None or all(
            _is_max_entangled(np.asarray(s, dtype=complex), f.dim) for s, f in zip(edge_states, self.edge_families)
        )

    @lru_cache(maxsize=None)
    def bob(self, y) -> CompositeObservable:
        return self._bob(y)

    @lru_cache(maxsize=None)
    def _edge_value(self, k: int, x: int, y) -> float:
        a = self.edge_families[k].op(x)
        b = self.bob(y).factors[k]
        return linalg.trace_product(a, b.T).real / a.shape[0]

    def correlator(self, xs, y) -> float:
        if len(xs) != self.n:
            raise DimensionError(f"expected {self.n} edge inputs, got {len(xs)}")
        if self._fast:
            return math.prod(self._edge_value(k, x, y) for k, x in enumerate(xs))
        ops = [f.op(x) for f, x in zip(self.edge_families, xs)]
        return quantum_correlator(self.edge_states, ops, self.bob(y))


class QuantumChainProvider:
    """Linear chain with a maximally entangled pair on every source.

    ``middle(label)`` returns the (left, right) factors of each middle party.
    """

    topology = "chain"

    def __init__(self, alice: ObservableFamily, charlie: ObservableFamily, middle, n: int):
        self.alice = alice
        self.charlie = charlie
        self._middle = middle
        self.n = n

    @lru_cache(maxsize=None)
    def middle(self, label):
        factors = self._middle(label)
        if len(factors) != self.n - 1:
            raise DimensionError(f"expected {self.n - 1} middle parties, got {len(factors)}")
        return factors

    @staticmethod
    def _pair(v_op: np.ndarray, u_op: np.ndarray) -> float:
        return linalg.trace_product(v_op, u_op.T).real / v_op.shape[0]

    @lru_cache(maxsize=None)
    def _source_value(self, k: int, u, v) -> float:
        # source k (1-based) between party k-1 (u side) and party k (v side)
        if k == 1:
            return self._pair(self.alice.op(v), self.middle(u)[0][0])
        if k == self.n:
            return self._pair(self.charlie.op(v), self.middle(u)[-1][1])
        return self._pair(self.middle(v)[k - 1][0], self.middle(u)[k - 2][1])

    def correlator(self, x, rs, z) -> float:
        rs = tuple(rs)
        if len(rs) != self.n - 1:
            raise DimensionError(f"expected {self.n - 1} middle inputs, got {len(rs)}")
        value = self._source_value(1, rs[0], x)
        for k in range(2, self.n):
            value *= self._source_value(k, rs[k - 2], rs[k - 1])
        return value * self._source_value(self.n, rs[-1], z)

    def dense_correlator(self, x, rs, z) -> float:
        """Explicit contraction over the full chain state (validation path)."""
        if self.n > DENSE_MAX_EDGES:
            raise GuardError("behaviors", f"dense chain contraction limited to {DENSE_MAX_EDGES} sources")
        ops = [self.alice.op(x)]
        for k, r in enumerate(rs):
            left, right = self.middle(r)[k]
            ops += [left, right]
        ops.append(self.charlie.op(z))
        # source i+1 holds the pair (ops[2i], ops[2i+1])
        states = [max_entangled_state(ops[2 * i].shape[0]) for i in range(self.n)]
        return _dense_correlator(states, ops[0::2], ops[1::2])


def optimal_star_provider(family: str, n: int, m: int) -> QuantumStarProvider:
    """Quantum strategy reaching the optimum of ``star_delta`` or ``star_c``."""
    scenario = StarScenario(n, m)
    if family == "star_delta":
        fams = [anticommuting_family(m)] * n
        return QuantumStarProvider(fams, lambda y: bob_composite("delta", scenario, fams, y))
    if family == "star_c":
        fams = [planar_family(m)] * n
        return QuantumStarProvider(fams, lambda jt: bob_composite("c", scenario, fams, jt))
    raise ValueError(f"{family!r} is not a star family")


def optimal_chain_provider(family: str, n: int, m: int) -> QuantumChainProvider:
    """Quantum strategy reaching the optimum of ``chain_I`` or ``chain_T``."""
    ChainScenario(n, m)
    if family == "chain_I":
        a = c = anticommuting_family(m)
        mode = "I"
    elif family == "chain_T":
        a = c = planar_family(m)
        mode = "T"
    else:
        raise ValueError(f"{family!r} is not a chain family")
    return QuantumChainProvider(a, c, lambda lab: chain_bob_factors(mode, n, a, c, lab), n)


def optimal_provider(family: str, n: int, m: int):
    if family.startswith("star"):
        return optimal_star_provider(family, n, m)
    return optimal_chain_provider(family, n, m)


# -- hybrid networks -----------------------------------------------------------


class StarNetwork:
    """Star provider whose correlator is the product of link correlators."""

    topology = "star"

    def __init__(self, links: Sequence[Link]):
        self.links = list(links)
        self.n = len(self.links)

    def correlator(self, xs, y) -> float:
        if len(xs) != self.n:
            raise DimensionError(f"expected {self.n} edge inputs, got {len(xs)}")
        return math.prod(link.link_correlator(y, x) for link, x in zip(self.links, xs))


class ChainNetwork:
    """Chain provider; link k joins party k-1 (u side) and party k (v side)."""

    topology = "chain"

    def __init__(self, links: Sequence[Link]):
        self.links = list(links)
        self.n = len(self.links)

    def correlator(self, x, rs, z) -> float:
        rs = tuple(rs)
        if len(rs) != self.n - 1:
            raise DimensionError(f"expected {self.n - 1} middle inputs, got {len(rs)}")
        value = self.links[0].link_correlator(rs[0], x)
        for k in range(1, self.n - 1):
            value *= self.links[k].link_correlator(rs[k - 1], rs[k])
        return value * self.links[-1].link_correlator(rs[-1], z)


def hybrid_provider(scenario, local_edges: Mapping[int, LocalSource], boxes: Mapping[int, NoSignalingBox],
                    topology: str | None = None):
    """Network with the given local sources and no-signaling boxes.

    Edges (sources) are numbered from 1.  Every edge must be assigned
    exactly once, either to ``local_edges`` or to ``boxes``.  The central
    party's subsystem outputs are multiplied together, which is what the
    correlator of the merged output b = b^1 = ... = b^n amounts to.
    """
    if topology is None:
        topology = "chain" if isinstance(scenario, ChainScenario) else "star"
    n = scenario.n
    overlap = set(local_edges) & set(boxes)
    if overlap:
        raise ValueError(f"edges {sorted(overlap)} are both local and boxed")
    missing = set(range(1, n + 1)) - set(local_edges) - set(boxes)
    extra = (set(local_edges) | set(boxes)) - set(range(1, n + 1))
    if missing or extra:
        raise ValueError(f"edge assignment incomplete: missing {sorted(missing)}, unknown {sorted(extra)}")
    links = []
    for k in range(1, n + 1):
        src = local_edges.get(k)
        if src is None:
            links.append(boxes[k])
        elif isinstance(src, LocalSource):
            links.append(src)
        else:
            links.append(LocalSource.deterministic(*src))
    if topology == "star":
        return StarNetwork(links)
    if topology == "chain":
        return ChainNetwork(links)
    raise ValueError(f"unknown topology {topology!r}")


# -- input label sets ----------------------------------------------------------


def central_labels(family: str, n: int, m: int) -> tuple:
    """Inputs of the central (star) or every middle (chain) party."""
    if family in ("star_delta", "chain_I"):
        return tuple(range(1, 2 ** (m - 1) + 1))
    if family == "star_c":
        return tuple((j, t) for t in range(1, n + 1) for j in range(1, m + 1))
    if family == "chain_T":
        return tuple((r, t) for t in (1, 2) for r in range(1, m + 1))
    raise ValueError(f"unknown family {family!r}")


def default_box(family: str, n: int, m: int, edge: int) -> NoSignalingBox:
    """The fixed box each nonlocal source uses in the hybrid models."""
    if family == "star_delta":
        return make_box("zbit", m)
    if family == "star_c":
        return make_box("shifted", m, n=n)
    if family == "chain_I":
        if edge in (1, n):
            return make_box("zbit", m)
        return make_box("identity", labels=central_labels(family, n, m))
    if family == "chain_T":
        if edge in (1, n):
            return make_box("chain_shifted", m)
        return make_box("identity", labels=central_labels(family, n, m))
    raise ValueError(f"unknown family {family!r}")


def all_sign_vectors(length: int, fix_first: bool = False):
    """All +-1 tuples of ``length`` in lexicographic order (+1 before -1)."""
    if fix_first:
        return [(1,) + rest for rest in itertools.product((1, -1), repeat=length - 1)]
    return list(itertools.product((1, -1), repeat=length))
