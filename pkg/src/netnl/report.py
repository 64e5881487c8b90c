"""Validation report: places where direct computation disagrees with printed claims.

Every finding carries the computed numbers, a paraphrase of the claim it
conflicts with and a descriptive locator.  Nothing here patches the claims;
the library's constructions are independent of them.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .behaviors import QuantumStarProvider
from .bounds import chain_I_bounds, chain_T_bounds, delta_quantum, plnl_delta, star_c_bounds, star_c_threshold
from .functionals import FunctionalSpec, evaluate
from .linalg import SX, SZ
from .observables import CompositeObservable, planar_family
from .oracle import brute_hybrid_max

SCHEMA = "netnl/1"


@dataclass(frozen=True)
class Finding:
    key: str
    title: str
    claim: str
    locator: str
    computed: dict
    conflict: bool

    def to_json(self) -> dict:
        return asdict(self)


def _half(a: float, b: float):
    return (a * SX + b * SZ) / 2


def printed_central_observables() -> dict:
    """The central party's qubit observables as listed for n = 2, m = 3, keyed (j, t)."""
    r3 = math.sqrt(3)
    return {
        (1, 1): (_half(r3, 1), SZ),
        (2, 1): (SX, _half(r3, 1)),
        (3, 1): (_half(1, -r3), _half(r3, -1)),
        (1, 2): (SZ, _half(r3, 1)),
        (2, 2): (_half(r3, 1), SX),
        (3, 2): (_half(r3, -1), _half(1, -r3)),
    }


def finding_printed_observables() -> Finding:
    printed = printed_central_observables()
    fams = [planar_family(3)] * 2
    provider = QuantumStarProvider(fams, lambda lab: CompositeObservable(printed[lab]))
    value = evaluate(FunctionalSpec("star_c", 2, 3), provider)
    target = math.sqrt(3)
    short = {f"{j},{t}": v for (j, t), v in value.terms.items() if v < target - 1e-9}
    return Finding(
        key="a",
        title="printed central observables for n=2, m=3 are not all optimal",
        claim="the listed qubit observables for the central party, together with the listed edge "
              "observables and two maximally entangled pairs, attain the optimum 6*sqrt(3)",
        locator="worked bilocal example with three inputs per edge party: explicit qubit settings",
        computed={
            "term_values": {f"{j},{t}": v for (j, t), v in value.terms.items()},
            "terms_below_sqrt3": short,
            "total": value.total,
            "optimum": 6 * target,
            "sos_derived_first_factor_11": "(sqrt(3) sigma_z + sigma_x)/2",
        },
        conflict=bool(short),
    )


def finding_plnl_claim() -> Finding:
    n, m = 4, 3
    quantum = delta_quantum(m)
    values = {p: plnl_delta(n, m, p) for p in range(1, n + 1)}
    oracle = brute_hybrid_max(FunctionalSpec("star_delta", n, m), local_edges=range(1, 4)).best_value
    return Finding(
        key="b",
        title="pLNL with p=3 local sources still simulates the n=4, m=3 quantum optimum",
        claim="for m=3, n=4 the quantum optimum of the bit-string star family cannot be simulated "
              "once more than two sources are local",
        locator="pLNL discussion next to the ratio plot",
        computed={
            "quantum": quantum,
            "plnl_by_p": {str(p): v for p, v in values.items()},
            "plnl_p3_oracle": oracle,
            "p3_exceeds_quantum": values[3] > quantum,
            "note": "the claim does hold under the swapped reading n=3, m=4 (p=3 gives 12 < 16)",
            "swapped_reading": {"quantum": delta_quantum(4), "plnl_p3": plnl_delta(3, 4, 3)},
        },
        conflict=values[3] > quantum,
    )


def finding_star_c_m2() -> Finding:
    b = star_c_bounds(2, 2)
    oracle = brute_hybrid_max(FunctionalSpec("star_c", 2, 2)).best_value
    return Finding(
        key="c",
        title="chained star family at n=2, m=2: quantum optimum lies below the LNL value",
        claim="the quantum optimum is at least the LNL value 4m-2, with equality at m=2; "
              "and for every m >= 2 some n exhibits FNN",
        locator="FNN proof for the chained star family (bilocal case) and the statement of its n-m relation",
        computed={
            "quantum": b.quantum_opt,
            "lnl_closed_form": b.lnl_value,
            "lnl_oracle": oracle,
            "threshold_n_m2": star_c_threshold(2),
        },
        conflict=b.quantum_opt < b.lnl_value,
    )


def finding_chain_middle_local() -> Finding:
    rows = {}
    conflict = False
    for family, bounds_fn in (("chain_T", chain_T_bounds), ("chain_I", chain_I_bounds)):
        for n in (3, 4):
            for m in (3, 4):
                q = bounds_fn(n, m).quantum_opt
                mid = brute_hybrid_max(FunctionalSpec(family, n, m), local_edges=(2,)).best_value
                end = brute_hybrid_max(FunctionalSpec(family, n, m), local_edges=(1,)).best_value
                rows[f"{family},{n},{m}"] = {"quantum": q, "local_end": end, "local_middle": mid}
                conflict |= family == "chain_T" and mid > q
    return Finding(
        key="d",
        title="chains with n >= 3: a local middle source lets boxed ends exceed the quantum optimum",
        claim="the matched-chain family exhibits FNN for every m > 2 (LNL value 4m-2)",
        locator="linear-chain analysis: LNL model of the matched-chain family",
        computed={
            "rows": rows,
            "note": "the LNL value 4m-2 is reproduced when the local source sits at an end of the chain",
        },
        conflict=conflict,
    )


def validation_report() -> dict:
    findings = [finding_printed_observables(), finding_plnl_claim(), finding_star_c_m2(), finding_chain_middle_local()]
    return {"schema": SCHEMA, "findings": [f.to_json() for f in findings]}
