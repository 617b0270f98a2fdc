import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from covfail.complex import remove_vertices
from covfail.deathsets import cake_or_death
from covfail.errors import BudgetExceeded, TooLarge, UnknownVertex
from covfail.fixtures import twin_graph
from covfail.probability import (
    Exponential,
    FailureModel,
    Fixed,
    Weibull,
    cdf,
    parse_failure_spec,
    prob_failure_bruteforce,
    prob_failure_exact,
    prob_failure_mc,
)
from oracles import abstract_complexes, criterion_dense


def fixed_model(K, p):
    return FailureModel.uniform([K.labels[v] for v in K.interior], Fixed(p))


def test_cdf_closed_forms():
    m = FailureModel({"x": Exponential(math.log(2)), "y": Weibull(2.0, 3.0), "z": Fixed(0.4)})
    assert cdf(m, "x", 1.0) == pytest.approx(0.5, abs=1e-15)
    assert cdf(m, "x", 0.0) == 0.0 and cdf(m, "y", 0.0) == 0.0 and cdf(m, "z", 0.0) == 0.4
    assert cdf(m, "y", 3.0) == pytest.approx(1 - math.exp(-1))
    with pytest.raises(UnknownVertex):
        cdf(m, "w", 1.0)
    with pytest.raises(ValueError):
        cdf(m, "x", -1.0)


@given(st.floats(0.01, 20), st.floats(0, 50))
def test_weibull_shape_one_is_exponential(mu, t):
    assert Weibull(1.0, 1 / mu).cdf(t) == pytest.approx(Exponential(mu).cdf(t), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("text, want", [
    ("exp:0.5", Exponential(0.5)),
    ("weibull:1.5:2", Weibull(1.5, 2.0)),
    ("fixed:0.25", Fixed(0.25)),
])
def test_parse_spec_round_trip(text, want):
    got = parse_failure_spec(text)
    assert got == want
    assert parse_failure_spec(got.spec()) == want


@pytest.mark.parametrize("bad", ["exp", "exp:-1", "weibull:1", "fixed:1.5", "gamma:1", "exp:x"])
def test_parse_spec_rejects(bad):
    with pytest.raises(ValueError):
        parse_failure_spec(bad)


def test_model_from_graph_names_missing_node():
    g = twin_graph()
    g.node("a").fail = Fixed(0.5)
    with pytest.raises(ValueError, match="'b'"):
        FailureModel.from_graph(g)


@pytest.mark.parametrize("sets, want", [
    ([["a"], ["b"]], 0.75),
    ([["a", "b"]], 0.25),
    ([["a", "b"], ["b", "c"]], 0.375),
    ([], 0.0),
])
def test_exact_examples(sets, want):
    m = FailureModel.uniform("abc", Fixed(0.5))
    assert prob_failure_exact(sets, m, [1.0]).probabilities == [pytest.approx(want, abs=1e-15)]


def test_exact_budget():
    sets = [[f"x{i}", f"y{i}"] for i in range(21)]
    m = FailureModel.uniform([v for s in sets for v in s], Fixed(0.5))
    with pytest.raises(BudgetExceeded):
        prob_failure_exact(sets, m, [1.0])


def test_brute_force_fixtures(wheel, pair, twin):
    assert prob_failure_bruteforce(wheel, fixed_model(wheel, 0.3), 1.0) == pytest.approx(0.3, abs=1e-15)
    assert prob_failure_bruteforce(pair, fixed_model(pair, 0.5), 1.0) == pytest.approx(0.25, abs=1e-15)
    m = FailureModel.uniform(["a", "b"], Exponential(math.log(2)))
    assert prob_failure_bruteforce(twin, m, 1.0) == pytest.approx(0.75, abs=1e-15)


def test_monte_carlo_edge_cases():
    m = FailureModel.uniform("ab", Fixed(1.0))
    assert prob_failure_mc([], m, [1.0], 1000, seed=1).probabilities == [0.0]
    assert prob_failure_mc([["a", "b"]], m, [1.0], 1000, seed=1).probabilities == [1.0]
    with pytest.raises(ValueError):
        prob_failure_mc([["a"]], m, [1.0], 0, seed=1)


def test_monte_carlo_determinism_and_workers(twin):
    m = fixed_model(twin, 0.5)
    sets = [["a"], ["b"]]
    a = prob_failure_mc(sets, m, [0.0, 1.0], 70_000, seed=7)
    b = prob_failure_mc(sets, m, [0.0, 1.0], 70_000, seed=7, workers=3)
    assert a == b
    c = prob_failure_mc(sets, m, [0.0, 1.0], 70_000, seed=8)
    assert c != a


def test_monte_carlo_near_exact_twin(twin):
    m = fixed_model(twin, 0.5)
    pt = prob_failure_mc([["a"], ["b"]], m, [1.0], 1_000_000, seed=7).points[0]
    assert abs(pt.probability - 0.75) <= 3 * pt.stderr


def _random_model(K, rng):
    specs = {}
    for v in K.interior:
        kind = rng.choice("ewf")
        if kind == "e":
            specs[K.labels[v]] = Exponential(rng.uniform(0.05, 2))
        elif kind == "w":
            specs[K.labels[v]] = Weibull(rng.uniform(0.5, 3), rng.uniform(0.5, 4))
        else:
            specs[K.labels[v]] = Fixed(rng.choice([0.0, 0.25, 0.5, 1.0]))
    return FailureModel(specs)


@given(abstract_complexes(max_interior=7), st.integers(0, 2**32 - 1))
def test_exact_matches_brute_force(K, seed):
    rng = random.Random(seed)
    model = _random_model(K, rng)
    times = sorted(rng.uniform(0, 5) for _ in range(4))
    sets = cake_or_death(K).as_labels(K)
    exact = prob_failure_exact(sets, model, times).probabilities
    brute = prob_failure_bruteforce(K, model, times)
    assert exact == pytest.approx(brute, abs=1e-12)
    assert all(x <= y + 1e-12 for x, y in zip(exact, exact[1:]))


@given(abstract_complexes(max_interior=6), st.integers(0, 2**32 - 1))
def test_redundant_supersets_change_nothing(K, seed):
    """Expanding over every death set gives the same number as over the minimal ones."""
    rng = random.Random(seed)
    model = _random_model(K, rng)
    interior = sorted(K.interior)
    all_deaths = [
        [K.labels[v] for v in A]
        for r in range(len(interior) + 1)
        for A in itertools.combinations(interior, r)
        if not criterion_dense(remove_vertices(K, A))
    ]
    minimal = cake_or_death(K).as_labels(K)
    t = [rng.uniform(0, 3)]
    got = prob_failure_exact(all_deaths, model, t, max_sets=10**6).probabilities
    assert got == pytest.approx(prob_failure_exact(minimal, model, t).probabilities, abs=1e-12)


def test_bruteforce_size_limit():
    from covfail.complex import build_rips_2skeleton
    from covfail.generate import random_abstract_graph

    K = build_rips_2skeleton(random_abstract_graph(random.Random(1), 4, 15, 0.3))
    with pytest.raises(TooLarge):
        prob_failure_bruteforce(K, fixed_model(K, 0.5), 1.0)


def test_curve_serialisation(twin):
    curve = prob_failure_exact([["a"], ["b"]], fixed_model(twin, 0.5), [1.0, 2.0])
    rows = curve.to_csv().splitlines()
    assert rows[0] == "t,probability,method,stderr,terms"
    assert rows[1].startswith("1.0,0.75,ie,,")
    assert curve.to_json()[0] == {"t": 1.0, "probability": 0.75, "method": "ie", "terms": 3}
