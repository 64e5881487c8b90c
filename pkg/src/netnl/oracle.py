"""Brute-force maximizers over local strategies, alone or next to fixed boxes.

The search works on per-source *profiles*: for a source and one of its
deterministic strategies, the profile lists that source's factor in every
term, with the central party's response on that source set to +1.  A term
of any of the four functionals is the product of its sources' factors, so

    value(tuple) = sum_t c_t * prod_k |P_k[i_k, t]| ** e

where c_t collects the boxed sources and e is 1/n (star_delta), 1/2
(chain_I) or 1 (star_c, chain_T).  The central party's free +-1 responses
are absorbed by the absolute value, and flipping every output of one end
party only flips signs inside the absolute values, so end-party strategies
are enumerated with their first output fixed to +1.

For e < 1 the objective is concave in each local source's behaviour, so
convex mixtures over hidden variables can beat every deterministic point.
``brute_hybrid_max`` therefore follows the enumeration with a mixture
search over the enumerated profiles and reports a Frank-Wolfe duality gap
that bounds the remaining suboptimality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .behaviors import (
    DeterministicStrategy,
    LocalSource,
    NoSignalingBox,
    all_sign_vectors,
    central_labels,
    default_box,
    hybrid_provider,
)
from .errors import GuardError
from .functionals import FunctionalSpec, FunctionalValue, evaluate
from .scenario import ChainScenario, StarScenario, encode, wrap_next

SEARCH_GUARD = 2 ** 24
UNREDUCED_GUARD = 2 ** 16
_CHUNK = 2 ** 22
_RESTARTS = 4


@dataclass
class HybridAssignment:
    """Which sources are local (with their strategies) and which are boxed."""

    spec: FunctionalSpec
    local: dict
    boxes: dict = field(default_factory=dict)

    def scenario(self):
        cls = StarScenario if self.spec.topology == "star" else ChainScenario
        return cls(self.spec.n, self.spec.m)

    def provider(self):
        return hybrid_provider(self.scenario(), self.local, self.boxes, self.spec.topology)

    def to_json(self) -> dict:
        local = {}
        for k, src in sorted(self.local.items()):
            local[str(k)] = [
                {
                    "weight": w,
                    "v": [[_lab(i), o] for i, o in sv.outputs.items()],
                    "u": [[_lab(i), o] for i, o in su.outputs.items()],
                }
                for w, sv, su in src.components
            ]
        return {
            "local": local,
            "boxes": {str(k): box.kind for k, box in sorted(self.boxes.items())},
        }


def _lab(label):
    return list(label) if isinstance(label, tuple) else label


@dataclass
class SearchResult:
    best_value: float
    argmax: HybridAssignment
    evaluations: int
    # upper bound on (true maximum - best_value); zero for pure enumeration
    certificate_gap: float = 0.0
    deterministic_value: float | None = None

    def to_json(self) -> dict:
        return {
            "best_value": self.best_value,
            "deterministic_value": self.deterministic_value,
            "certificate_gap": self.certificate_gap,
            "evaluations": self.evaluations,
            "argmax": self.argmax.to_json(),
        }


# -- profiles --------------------------------------------------------------------


def _exponent(spec: FunctionalSpec) -> float:
    return {"star_delta": 1.0 / spec.n, "chain_I": 0.5}.get(spec.family, 1.0)


def _is_end(spec: FunctionalSpec, edge: int) -> bool:
    return spec.topology == "star" or edge in (1, spec.n)


def _edge_factor(spec: FunctionalSpec, edge: int, label, resp) -> float:
    """Factor of ``edge`` in the term with central label ``label``.

    ``resp(x)`` is the v-side response (a sign, or a box correlator with
    the central input fixed to ``label``).
    """
    fam, m = spec.family, spec.m
    if fam == "star_delta":
        enc = encode(m)
        return sum((1 - 2 * enc.strings[label - 1][x - 1]) * resp(x) for x in range(1, m + 1))
    if fam == "star_c":
        j, t = label
        if edge == t:
            nxt, w = wrap_next(j, m)
            return resp(j) + w * resp(nxt)
        return resp(j)
    if not _is_end(spec, edge):
        return resp(label)
    if fam == "chain_I":
        enc = encode(m)
        return sum((1 - 2 * enc.strings[label - 1][x - 1]) * resp(x) for x in range(1, m + 1))
    if fam == "chain_T":
        r, t = label
        chained_side = 1 if edge == 1 else 2
        if t == chained_side:
            nxt, w = wrap_next(r, m)
            return resp(r) + w * resp(nxt)
        return resp(r)
    raise ValueError(fam)


def local_strategies(spec: FunctionalSpec, edge: int, fix_first: bool = True) -> list:
    """Deterministic v-side strategies enumerated for a local source.

    A middle chain source has nothing to enumerate: its parties' responses
    only contribute signs absorbed by the central responses.
    """
    if not _is_end(spec, edge):
        return [None]
    return all_sign_vectors(spec.m, fix_first=fix_first)


def profile_matrix(spec: FunctionalSpec, edge: int) -> np.ndarray:
    """Coefficients K with profile = K @ strategy (every factor is linear in the strategy)."""
    labels = central_labels(spec.family, spec.n, spec.m)
    eye = np.eye(spec.m)
    return np.array([[_edge_factor(spec, edge, lab, lambda x, c=c: eye[c, x - 1]) for c in range(spec.m)]
                     for lab in labels])


def local_profile(spec: FunctionalSpec, edge: int, strategy) -> np.ndarray:
    if strategy is None:
        return np.ones(len(central_labels(spec.family, spec.n, spec.m)))
    return profile_matrix(spec, edge) @ np.asarray(strategy, dtype=float)


def _profiles(spec: FunctionalSpec, edge: int, strategies: list) -> np.ndarray:
    if strategies == [None]:
        return local_profile(spec, edge, None)[None, :]
    return np.asarray(strategies, dtype=float) @ profile_matrix(spec, edge).T


def box_profile(spec: FunctionalSpec, edge: int, box: NoSignalingBox) -> np.ndarray:
    labels = central_labels(spec.family, spec.n, spec.m)
    return np.array([_edge_factor(spec, edge, lab, lambda x, lab=lab: box.correlator(lab, x)) for lab in labels])


# -- enumeration -----------------------------------------------------------------


def _enumerate(tables: list[np.ndarray], const: np.ndarray, tol: float = 1e-9):
    """Maximize sum_t const_t prod_k tables[k][i_k, t] over index tuples.

    Returns (best value, lexicographically first near-maximal tuple, count).
    """
    count = math.prod(t.shape[0] for t in tables)
    if count > SEARCH_GUARD:
        raise GuardError("oracle", f"search space of {count} strategy tuples exceeds guard {SEARCH_GUARD}")
    prefix = const[None, :]
    for tab in tables[:-1]:
        prefix = (prefix[:, None, :] * tab[None, :, :]).reshape(-1, const.shape[0])
    last = tables[-1]
    rows = max(1, _CHUNK // max(1, last.shape[0]))

    def chunks():
        for start in range(0, prefix.shape[0], rows):
            yield start, prefix[start:start + rows] @ last.T

    best = max(float(block.max()) for _, block in chunks())
    cut = best - tol * max(1.0, abs(best))
    for start, block in chunks():
        hits = np.flatnonzero(block.reshape(-1) >= cut)
        if hits.size:
            flat = start * last.shape[0] + int(hits[0])
            break
    idx = []
    for tab in reversed(tables):
        flat, i = divmod(flat, tab.shape[0])
        idx.append(i)
    return best, tuple(reversed(idx)), count


def _exact_value(raw_terms, e: float) -> float:
    """sum_t |raw_t|**e, exact when each root of an integer is an integer."""
    out = []
    for raw in raw_terms:
        r = abs(raw)
        if e == 1.0:
            out.append(r)
            continue
        root = r ** e
        k = round(root)
        if float(r).is_integer() and abs(k ** (1 / e) - r) < 0.5 and round(k ** round(1 / e)) == round(r):
            out.append(float(k))
        else:
            out.append(root)
    return math.fsum(out)


def _sign(v: float) -> int:
    return -1 if v < 0 else 1


def _assignment(spec: FunctionalSpec, locals_: list[int], mixtures: dict, box_map: dict,
                box_sign: np.ndarray) -> HybridAssignment:
    """Build a HybridAssignment whose central responses align every term.

    ``mixtures[k]`` is a list of (weight, strategy, profile) for local edge k.
    """
    labels = central_labels(spec.family, spec.n, spec.m)
    local = {}
    for pos, k in enumerate(locals_):
        comps = []
        for w, strat, prof in mixtures[k]:
            signs = np.where(prof < 0, -1, 1)
            if pos == 0:
                signs = signs * box_sign
            if strat is None:
                v = DeterministicStrategy.constant(labels)
            else:
                v = DeterministicStrategy.from_signs(range(1, spec.m + 1), strat)
            u = DeterministicStrategy.from_signs(labels, signs)
            comps.append((w, v, u))
        local[k] = LocalSource(tuple(comps))
    return HybridAssignment(spec, local, dict(box_map))


def brute_local_max(spec: FunctionalSpec, unreduced: bool = False) -> SearchResult:
    """Maximum over fully local deterministic strategies."""
    if unreduced:
        return _unreduced_local_max(spec)
    edges = list(range(1, spec.n + 1))
    e = _exponent(spec)
    labels = central_labels(spec.family, spec.n, spec.m)
    strats = {k: local_strategies(spec, k) for k in edges}
    count = math.prod(len(s) for s in strats.values())
    if count > SEARCH_GUARD:
        raise GuardError("oracle", f"search space of {count} strategy tuples exceeds guard {SEARCH_GUARD}")
    profiles = {k: _profiles(spec, k, strats[k]) for k in edges}
    tables = [np.abs(profiles[k]) ** e for k in edges]
    _, idx, count = _enumerate(tables, np.ones(len(labels)))
    raw = np.prod([profiles[k][i] for k, i in zip(edges, idx)], axis=0)
    best = _exact_value(raw, e)
    mix = {k: [(1.0, strats[k][i], profiles[k][i])] for k, i in zip(edges, idx)}
    return SearchResult(best, _assignment(spec, edges, mix, {}, np.ones(len(labels))), count,
                        deterministic_value=best)


def _unreduced_local_max(spec: FunctionalSpec) -> SearchResult:
    """Enumerate every deterministic strategy and evaluate the functional directly.

    The central party's response is one free +-1 per input label (for chains,
    the product of the middle parties' outputs, which is all that enters).
    """
    n, m = spec.n, spec.m
    labels = central_labels(spec.family, n, m)
    ends = [k for k in range(1, n + 1) if _is_end(spec, k)]
    count = 2 ** (m * len(ends) + len(labels))
    if count > UNREDUCED_GUARD:
        raise GuardError("oracle", f"unreduced search of {count} strategies exceeds guard {UNREDUCED_GUARD}")
    ones = DeterministicStrategy.constant(labels)
    best, best_assignment = -math.inf, None
    vectors = all_sign_vectors(m)
    for combo in np.ndindex(*([len(vectors)] * len(ends))):
        for bob in all_sign_vectors(len(labels)):
            local = {}
            for k in range(1, n + 1):
                if k in ends:
                    v = DeterministicStrategy.from_signs(range(1, m + 1), vectors[combo[ends.index(k)]])
                else:
                    v = ones
                u = DeterministicStrategy.from_signs(labels, bob) if k == 1 else ones
                local[k] = LocalSource.deterministic(v, u)
            assignment = HybridAssignment(spec, local)
            value = evaluate(spec, assignment.provider()).total
            if value > best + 1e-9:
                best, best_assignment = value, assignment
    return SearchResult(best, best_assignment, count, deterministic_value=best)


def brute_hybrid_max(spec: FunctionalSpec, local_edges=(1,), boxes: dict | None = None,
                     mixtures: bool | None = None) -> SearchResult:
    """Maximum over local strategies of ``local_edges`` with every other source boxed.

    ``boxes`` overrides the default box of selected nonlocal sources.
    ``mixtures`` (default: on for the root-aggregated families) adds the
    search over convex mixtures of the local sources' strategies.
    """
    n = spec.n
    locals_ = sorted(set(local_edges))
    if not locals_:
        raise ValueError("at least one local source is required")
    if any(not 1 <= k <= n for k in locals_):
        raise ValueError(f"local sources must lie in [1, {n}], got {locals_}")
    boxes = dict(boxes or {})
    box_map = {k: boxes.get(k) or default_box(spec.family, n, spec.m, k) for k in range(1, n + 1) if k not in locals_}
    e = _exponent(spec)
    labels = central_labels(spec.family, n, spec.m)
    box_raw = np.ones(len(labels))
    for k, box in box_map.items():
        box_raw = box_raw * box_profile(spec, k, box)
    box_sign = np.where(box_raw < 0, -1, 1)
    const = np.abs(box_raw) ** e

    strats = {k: local_strategies(spec, k) for k in locals_}
    count = math.prod(len(s) for s in strats.values())
    if count > SEARCH_GUARD:
        raise GuardError("oracle", f"search space of {count} strategy tuples exceeds guard {SEARCH_GUARD}")
    profiles = {k: _profiles(spec, k, strats[k]) for k in locals_}
    _, idx, count = _enumerate([np.abs(profiles[k]) ** e for k in locals_], const)
    raw = box_raw * np.prod([profiles[k][i] for k, i in zip(locals_, idx)], axis=0)
    det_value = _exact_value(raw, e)
    mix = {k: [(1.0, strats[k][i], profiles[k][i])] for k, i in zip(locals_, idx)}
    result = SearchResult(det_value, _assignment(spec, locals_, mix, box_map, box_sign), count,
                          deterministic_value=det_value)

    if mixtures is None:
        mixtures = e < 1.0
    if not mixtures:
        return result
    value, weights, gap, evals = _mixture_search(
        [np.abs(profiles[k]) for k in locals_], const, e, [idx[i] for i in range(len(locals_))]
    )
    result.certificate_gap = gap
    result.evaluations += evals
    if value > det_value:
        mix = {}
        for k, w in zip(locals_, weights):
            keep = np.flatnonzero(w > 1e-14)
            total = w[keep].sum()
            mix[k] = [(float(w[i] / total), strats[k][i], profiles[k][i]) for i in keep]
        result.argmax = _assignment(spec, locals_, mix, box_map, box_sign)
        # report the generic evaluator's value so argmax re-evaluates exactly
        result.best_value = evaluate(spec, result.argmax.provider()).total
    return result


def _mixture_search(abs_profiles: list[np.ndarray], const: np.ndarray, e: float, start: list[int]):
    """Maximize sum_t const_t prod_k (w_k @ V_k)[t] ** e over weight simplices.

    Returns (value, weights, Frank-Wolfe gap, objective evaluations).
    """
    sizes = [v.shape[0] for v in abs_profiles]
    splits = np.cumsum(sizes)[:-1]
    floor = 1e-300

    def parts(wflat):
        return np.split(wflat, splits)

    def mixed(ws):
        return [np.maximum(w @ v, floor) for w, v in zip(ws, abs_profiles)]

    def value(ws) -> float:
        vs = mixed(ws)
        return float(np.sum(const * np.prod([v ** e for v in vs], axis=0)))

    def grads(ws):
        vs = mixed(ws)
        powered = [v ** e for v in vs]
        out = []
        for k, v in enumerate(vs):
            others = np.prod([p for i, p in enumerate(powered) if i != k], axis=0) if len(vs) > 1 else 1.0
            out.append(const * e * v ** (e - 1.0) * others)
        return out

    def neg(wflat):
        return -value(parts(wflat))

    def neg_grad(wflat):
        ws = parts(wflat)
        return -np.concatenate([v @ g for v, g in zip(abs_profiles, grads(ws))])

    x0 = []
    for size, i in zip(sizes, start):
        w = np.full(size, 0.5 / size)
        w[i] += 0.5
        x0.append(w)
    x0 = np.concatenate(x0)
    constraints = []
    lo = 0
    for size in sizes:
        sl = slice(lo, lo + size)
        constraints.append({"type": "eq", "fun": lambda w, sl=sl: np.sum(w[sl]) - 1.0,
                            "jac": lambda w, sl=sl, size=size: _indicator(len(w), sl)})
        lo += size

    def fw_gap(ws) -> float:
        vs = [w @ v for w, v in zip(ws, abs_profiles)]
        gs = grads(ws)
        return max(0.0, float(sum(np.max(va @ g) - v @ g for va, v, g in zip(abs_profiles, vs, gs))))

    evals, gap, ws = 0, math.inf, None
    for _ in range(_RESTARTS):
        res = minimize(neg, x0, jac=neg_grad, method="SLSQP", bounds=[(0.0, 1.0)] * len(x0),
                       constraints=constraints, options={"ftol": 1e-16, "maxiter": 1000})
        evals += int(res.nfev)
        cand = [np.clip(w, 0.0, None) / np.clip(w, 0.0, None).sum() for w in parts(res.x)]
        cand_gap = fw_gap(cand)
        if cand_gap >= gap:
            break
        ws, gap = cand, cand_gap
        if gap <= 1e-12:
            break
        x0 = np.concatenate(ws)
    return value(ws), ws, gap, evals


def _indicator(length: int, sl: slice) -> np.ndarray:
    out = np.zeros(length)
    out[sl] = 1.0
    return out


def lnl_term_decomposition(spec: FunctionalSpec, assignment: HybridAssignment) -> FunctionalValue:
    """Per-term values of a hybrid assignment, through the generic evaluator."""
    return evaluate(spec, assignment.provider())
