import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netnl.behaviors import (
    DeterministicStrategy,
    LocalSource,
    central_labels,
    hybrid_provider,
    optimal_provider,
)
from netnl.bounds import bounds
from netnl.errors import GuardError
from netnl.functionals import FAMILIES, FunctionalSpec, aggregate, evaluate
from netnl.scenario import ChainScenario, StarScenario


def quantum_value(family, n, m):
    return evaluate(FunctionalSpec(family, n, m), optimal_provider(family, n, m))


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("n", [2, 3, 4])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_quantum_construction_reaches_closed_form(family, n, m):
    assert abs(quantum_value(family, n, m).total - bounds(family, n, m).quantum_opt) <= 1e-9


def test_worked_examples():
    assert quantum_value("star_delta", 2, 2).total == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert quantum_value("star_delta", 2, 3).total == pytest.approx(4 * math.sqrt(3), abs=1e-12)
    assert quantum_value("star_c", 2, 3).total == pytest.approx(6 * math.sqrt(3), abs=1e-12)
    assert quantum_value("star_c", 3, 4).total == pytest.approx(24 * math.cos(math.pi / 8), abs=1e-12)
    assert quantum_value("chain_I", 2, 2).total == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    for n in (2, 3, 5):
        assert quantum_value("chain_T", n, 3).total == pytest.approx(12 * math.cos(math.pi / 6), abs=1e-12)


def test_star_c_terms_are_sqrt3_at_optimum():
    terms = quantum_value("star_c", 2, 3).terms
    assert set(terms) == {(j, t) for j in (1, 2, 3) for t in (1, 2)}
    assert all(abs(v - math.sqrt(3)) < 1e-12 for v in terms.values())


@pytest.mark.parametrize("family", FAMILIES)
def test_total_recomputes_from_terms(family):
    value = quantum_value(family, 3, 4)
    assert abs(value.recompute_total() - value.total) <= 1e-12
    data = value.to_json()
    assert data["total"] == value.total and len(data["terms"]) == len(value.terms)


def test_aggregate_applies_roots_after_abs():
    assert aggregate("star_delta", 2, [-4.0, 9.0]) == 5.0
    assert aggregate("chain_I", 3, [-4.0]) == 2.0
    assert aggregate("star_c", 2, [-1.0, 2.0]) == 1.0


class _Permuted:
    def __init__(self, inner, perm):
        self.inner, self.perm = inner, perm

    def correlator(self, xs, y):
        return self.inner.correlator(tuple(xs[p] for p in self.perm), y)


def test_star_delta_invariant_under_edge_relabeling():
    provider = optimal_provider("star_delta", 3, 3)
    spec = FunctionalSpec("star_delta", 3, 3)
    base = evaluate(spec, provider).total
    for perm in itertools.permutations(range(3)):
        assert evaluate(spec, _Permuted(provider, perm)).total == pytest.approx(base, abs=1e-12)


class _Negated:
    """Negates the correlator at one star or chain input."""

    def __init__(self, inner, key):
        self.inner, self.key = inner, key

    def correlator(self, *args):
        value = self.inner.correlator(*args)
        return -value if args == self.key else value


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.booleans())
def test_star_c_linearity(j, t, shifted):
    # the pair (A_j, A_{j+1}) on edge t: flipping one correlator moves the total by twice its weighted value
    n, m = 2, 3
    provider = optimal_provider("star_c", n, m)
    spec = FunctionalSpec("star_c", n, m)
    xs = [j] * n
    weight = 1
    if shifted:
        nxt, weight = (j + 1, 1) if j < m else (1, -1)
        xs[t - 1] = nxt
    key = (tuple(xs), (j, t))
    corr = provider.correlator(*key)
    delta = evaluate(spec, provider).total - evaluate(spec, _Negated(provider, key)).total
    assert delta == pytest.approx(2 * weight * corr, abs=1e-12)


def test_chain_T_linearity():
    provider = optimal_provider("chain_T", 3, 3)
    spec = FunctionalSpec("chain_T", 3, 3)
    key = (3, ((3, 2),) * 2, 1)  # l_{3,2} uses -C_1 via the wrap
    corr = provider.correlator(*key)
    delta = evaluate(spec, provider).total - evaluate(spec, _Negated(provider, key)).total
    assert delta == pytest.approx(-2 * corr, abs=1e-12)


def test_deterministic_providers_stay_below_local_bounds():
    star = StarScenario(2, 2)
    a = DeterministicStrategy.from_signs([1, 2], [1, -1])
    b = DeterministicStrategy.from_signs([1, 2], [1, 1])
    provider = hybrid_provider(star, {1: (a, b), 2: (a, DeterministicStrategy.constant([1, 2]))}, {})
    assert evaluate(FunctionalSpec("star_delta", 2, 2), provider).total <= 2 + 1e-12

    chain = ChainScenario(2, 3)
    labels = central_labels("chain_T", 2, 3)
    one = DeterministicStrategy.constant(labels)
    v = DeterministicStrategy.constant([1, 2, 3])
    provider = hybrid_provider(chain, {1: LocalSource.deterministic(v, one), 2: (v, one)}, {})
    assert evaluate(FunctionalSpec("chain_T", 2, 3), provider).total <= 8


def test_spec_validation_and_guard():
    with pytest.raises(ValueError):
        FunctionalSpec("nope", 2, 2)
    with pytest.raises(ValueError):
        FunctionalSpec("star_c", 1, 2)
    with pytest.raises(GuardError) as info:
        evaluate(FunctionalSpec("star_delta", 9, 9), optimal_provider("star_delta", 2, 2))
    assert info.value.module == "functionals"
