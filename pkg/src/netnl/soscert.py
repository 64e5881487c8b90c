"""Sum-of-squares optimality certificates for the star families.

At a candidate strategy, each SOS vector is

    L |psi> = (X_1 (x) ... (x) X_n) |psi> - B |psi>,

where X_k is edge k's (normalized) observable combination in that term and
B the central observable.  All of them vanish exactly when the strategy is
optimal.  The central observables are always those of the optimal
construction, so perturbing the edge observables shows up in the residuals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .behaviors import QuantumStarProvider
from .bounds import delta_quantum
from .errors import GuardError
from .functionals import FunctionalSpec, evaluate
from .observables import (
    ObservableFamily,
    anticommutator_table,
    anticommuting_family,
    bob_composite,
    chained_pair,
    max_entangled_state,
    normalized_combination,
    planar_family,
)
from .scenario import StarScenario, encode, sign

DENSE_MAX_N = 3
DENSE_MAX_DIM = 2 ** 20
EDGE_MAX_DIM = 2 ** 12


@dataclass
class CertificateReport:
    family: str
    n: int
    m: int
    residual_norms: dict
    nu_values: dict
    anticommutator_table: dict
    value: float
    sos_value: float
    closed_form: float
    # |value - closed_form|
    optimum_gap: float
    path: str = "dense"

    @property
    def max_residual(self) -> float:
        return max(self.residual_norms.values())

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "path": self.path,
            "residual_norms": _pairs(self.residual_norms),
            "nu_values": _pairs(self.nu_values),
            "anticommutator_table": _pairs(self.anticommutator_table),
            "value": self.value,
            "sos_value": self.sos_value,
            "closed_form": self.closed_form,
            "optimum_gap": self.optimum_gap,
            "max_residual": self.max_residual,
        }


def _pairs(mapping: dict) -> list:
    return [{"index": list(k) if isinstance(k, tuple) else k, "value": v} for k, v in mapping.items()]


def nu_value(family: str, m: int, j, observables: ObservableFamily) -> float:
    """Norm of an edge's combination applied to a maximally entangled state.

    Chained families (star_c, chain_T) use A_j + A_{j+1} with the wrap sign,
    i.e. sqrt(2 + <{A_j, A_{j+1}}>); the bit-string families (star_delta,
    chain_I) read ``j`` as the central input y and use sum_x s(y,x) A_x.
    """
    if observables.m != m:
        raise ValueError(f"family has {observables.m} observables, expected {m}")
    if family in ("star_c", "chain_T"):
        coeffs = chained_pair(observables, j)
    elif family in ("star_delta", "chain_I"):
        enc = encode(m)
        coeffs = {x: float(sign(enc, j, x)) for x in range(1, m + 1)}
    else:
        raise ValueError(f"unknown family {family!r}")
    return normalized_combination(observables, coeffs)[1]


def _optimal_families(family: str, n: int, m: int) -> list:
    fam = planar_family(m) if family == "star_c" else anticommuting_family(m)
    return [fam] * n


def _terms(family: str, n: int, m: int, edge_families: list):
    """Yield (label, [X_k], [nu or None per edge]) for every SOS vector."""
    if family == "star_c":
        for t in range(1, n + 1):
            for j in range(1, m + 1):
                xs, nus = [], []
                for k, fam in enumerate(edge_families, start=1):
                    if k == t:
                        op, nu = normalized_combination(fam, chained_pair(fam, j))
                        xs.append(op)
                        nus.append(nu)
                    else:
                        xs.append(fam.op(j))
                        nus.append(None)
                yield (j, t), xs, nus
    else:
        enc = encode(m)
        for y in range(1, len(enc) + 1):
            coeffs = {x: float(sign(enc, y, x)) for x in range(1, m + 1)}
            pairs = [normalized_combination(fam, coeffs) for fam in edge_families]
            yield y, [p[0] for p in pairs], [p[1] for p in pairs]


def _dense_residual(xs: list, bs: list) -> float:
    dims = [x.shape[0] for x in xs]
    psi = np.ones(1, dtype=complex)
    for d in dims:
        psi = np.kron(psi, max_entangled_state(d))
    tensor = psi.reshape([d for d in dims for _ in range(2)])
    left, right = tensor, tensor
    for k, (x, b) in enumerate(zip(xs, bs)):
        left = linalg.apply_local(x, left, 2 * k)
        right = linalg.apply_local(b, right, 2 * k + 1)
    return linalg.norm((left - right).reshape(-1))


def _factorized_residual(xs: list, bs: list) -> float:
    # ||X psi - B psi||^2 = <X^2> + <B^2> - 2 Re <X B>, each a product over edges
    xx = bb = xb = 1.0
    for x, b in zip(xs, bs):
        d = x.shape[0]
        xx *= linalg.trace_product(linalg.adjoint(x), x).real / d
        bb *= linalg.trace_product(linalg.adjoint(b), b).real / d
        xb *= linalg.trace_product(linalg.adjoint(x), b.T).real / d
    return math.sqrt(max(0.0, xx + bb - 2.0 * xb))


def sos_residuals(family: str, n: int, m: int, edge_families=None, dense: bool | None = None) -> CertificateReport:
    """Residual norms of every SOS vector, the nu normalizers and the value identity.

    ``edge_families`` replaces the edge observables (central observables stay
    those of the optimal construction).  ``dense`` forces the explicit
    state-vector path; by default it is used for n <= 3.
    """
    if family not in ("star_c", "star_delta"):
        raise ValueError(f"SOS certificates cover star_c and star_delta, got {family!r}")
    scenario = StarScenario(n, m)
    optimal = _optimal_families(family, n, m)
    fams = list(edge_families) if edge_families is not None else optimal
    if len(fams) != n or any(f.m != m for f in fams):
        raise ValueError(f"need {n} edge families of {m} observables")
    d = fams[0].dim
    if d * d > EDGE_MAX_DIM:
        raise GuardError("soscert", f"edge state dimension {d * d} exceeds {EDGE_MAX_DIM}")
    total = (d * d) ** n
    if dense is None:
        dense = n <= DENSE_MAX_N and total <= DENSE_MAX_DIM
    elif dense and (n > DENSE_MAX_N or total > DENSE_MAX_DIM):
        raise GuardError("soscert", f"dense residuals need n <= {DENSE_MAX_N} and dimension <= {DENSE_MAX_DIM}")
    mode = "c" if family == "star_c" else "delta"
    residual = _dense_residual if dense else _factorized_residual

    residuals, nus, term_sos = {}, {}, []
    for label, xs, edge_nus in _terms(family, n, m, fams):
        bob = bob_composite(mode, scenario, optimal, label)
        residuals[label] = residual(xs, list(bob.factors))
        present = [v for v in edge_nus if v is not None]
        if family == "star_c":
            nus[label] = present[0]
            term_sos.append(present[0])
        else:
            for k, v in enumerate(edge_nus, start=1):
                nus[(label, k)] = v
            term_sos.append(math.prod(present) ** (1.0 / n))
    sos_value = math.fsum(term_sos)

    provider = QuantumStarProvider(fams, lambda lab: bob_composite(mode, scenario, optimal, lab))
    value = evaluate(FunctionalSpec(family, n, m), provider).total
    closed = 2 * m * n * math.cos(math.pi / (2 * m)) if family == "star_c" else delta_quantum(m)
    return CertificateReport(family, n, m, residuals, nus, anticommutator_table(fams[0]), value, sos_value,
                             closed, abs(value - closed), "dense" if dense else "factorized")


@dataclass
class RelationReport:
    """Linear relations among the optimal planar observables."""

    m: int
    # name -> max-abs entry of the relation's residual matrix
    relations: dict = field(default_factory=dict)
    # name -> (computed, expected)
    normalizers: dict = field(default_factory=dict)

    def holds(self, tol: float = linalg.ALGEBRA_TOL) -> bool:
        return all(r <= tol for r in self.relations.values()) and all(
            abs(c - e) <= tol for c, e in self.normalizers.values()
        )

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "relations": self.relations,
            "normalizers": {k: {"computed": c, "expected": e} for k, (c, e) in self.normalizers.items()},
            "holds": self.holds(),
        }


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a)))


def _proportional(fam: ObservableFamily, target: int, a: int, b: int) -> tuple[float, float]:
    """(residual of A_target = (A_a + A_b)/nu, nu) with nu = sqrt(2 + <{A_a, A_b}>)."""
    _, nu = normalized_combination(fam, {a: 1.0, b: 1.0})
    return _max_abs(fam.op(target) - (fam.op(a) + fam.op(b)) / nu), nu


def optimum_conditions(m: int) -> RelationReport:
    """Relations satisfied by the optimal planar observables.

    m = 3 gives A1 - A2 + A3 = 0; m = 5 gives A2, A4, A3 proportional to
    A1+A3, A3+A5, A1+A5 with normalizers (sqrt5+1)/2, (sqrt5+1)/2, (sqrt5-1)/2.
    Other m >= 3 report the neighbour relation A_{j-1} + A_{j+1} = 2cos(pi/m) A_j.
    m = 2 has no relation.
    """
    fam = planar_family(m)
    report = RelationReport(m)
    if m == 2:
        return report
    if m == 3:
        report.relations["A1-A2+A3"] = _max_abs(fam.op(1) - fam.op(2) + fam.op(3))
        return report
    if m == 5:
        golden = (math.sqrt(5) + 1) / 2
        for name, (target, a, b), expected in (
            ("nu5", (2, 1, 3), golden),
            ("nu5'", (4, 3, 5), golden),
            ("nu5''", (3, 1, 5), golden - 1),
        ):
            res, nu = _proportional(fam, target, a, b)
            report.relations[f"A{target}=(A{a}+A{b})/{name}"] = res
            report.normalizers[name] = (nu, expected)
        return report
    c = 2 * math.cos(math.pi / m)
    for j in range(2, m):
        report.relations[f"A{j - 1}+A{j + 1}={c:.12g}*A{j}"] = _max_abs(fam.op(j - 1) + fam.op(j + 1) - c * fam.op(j))
    return report
