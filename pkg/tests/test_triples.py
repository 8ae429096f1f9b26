import dataclasses
import itertools

import pytest

from gonplex.errors import NoExtension, NotCertified, StaleInput
from gonplex.gf import tower_for_order
from gonplex.pointline import PointLineBijection, trace_bijection
from gonplex.triples import (
    Triple,
    TripleSet,
    admissible,
    complete_pair,
    enumerate_triples,
    read_triples,
    rotation_closed,
    verify_crucial_lemma,
    write_triples,
)

from conftest import basic_bijection, pg2, triple_set


def brute_force(plane, T):
    """All (i, j, k) with x_i on y_k, x_j on y_i, x_j on y_k, by scanning."""
    lines = [set(pts) for pts in plane.incidence]
    n = plane.num_points
    return sorted(
        Triple(i, j, k)
        for i, j, k in itertools.product(range(n), repeat=3)
        if i in lines[T.map[k]] and j in lines[T.map[i]] and j in lines[T.map[k]]
    )


@pytest.mark.parametrize("q", [2, 3, 4])
def test_enumeration_matches_brute_force(q):
    ts = triple_set(q)
    assert list(ts.triples) == brute_force(pg2(q), basic_bijection(q))
    assert len(ts) == (q + 1) * (q * q + q + 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_crucial_lemma_holds(q):
    report = verify_crucial_lemma(triple_set(q))
    assert report.ok, str(report)


@pytest.mark.parametrize("q", [2, 3])
def test_complete_pair_agrees_with_enumeration(q):
    ts = triple_set(q)
    plane, T = pg2(q), basic_bijection(q)
    proj = {"ik": lambda t: (t.i, t.k), "ij": lambda t: (t.i, t.j), "jk": lambda t: (t.j, t.k)}
    for kind, f in proj.items():
        index = {f(t): t for t in ts}
        for a, b in itertools.product(range(plane.num_points), repeat=2):
            if admissible(plane, T, kind, a, b):
                assert complete_pair(ts, kind, a, b) == index[a, b]
            else:
                assert (a, b) not in index
                with pytest.raises(NoExtension):
                    complete_pair(ts, kind, a, b)


def test_corrupted_set_fails_lemma():
    ts = triple_set(2)
    t0 = ts.triples[0]
    dropped = dataclasses.replace(ts, triples=ts.triples[1:])
    report = verify_crucial_lemma(dropped)
    assert not report.ok
    assert report["pair ik"].witness == (t0.i, t0.k, 0, 1)
    bogus = dataclasses.replace(ts, triples=ts.triples + (Triple(0, 0, 0),))
    assert not verify_crucial_lemma(bogus)["triple conditions"].ok


def test_triple_set_is_not_rotation_closed():
    for q in (2, 3, 4):
        assert not rotation_closed(triple_set(q))


def test_uncertified_bijection_is_refused():
    T = trace_bijection(tower_for_order(5), pg2(5))
    with pytest.raises(NotCertified):
        enumerate_triples(pg2(5), T)


@pytest.mark.parametrize("q", [2, 3])
def test_round_trip_and_staleness(q):
    ts = triple_set(q)
    text = write_triples(ts)
    again = read_triples(text, pg2(q), basic_bijection(q))
    assert again.triples == ts.triples
    assert write_triples(again) == text
    other = PointLineBijection(pg2(q), tuple(reversed(basic_bijection(q).map)))
    with pytest.raises(StaleInput):
        read_triples(text, pg2(q), other)
    with pytest.raises(StaleInput):
        ts.check_fresh(pg2(q), other)
    assert isinstance(ts, TripleSet)
