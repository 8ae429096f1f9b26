import itertools

import pytest

from gonplex.errors import (
    BudgetExceeded,
    CharacteristicThree,
    NotBijective,
    NotCertified,
    PlaneFormatError,
    PlaneMismatch,
    SearchExhausted,
)
from gonplex.gf import trace, tower_for_order
from gonplex.plane import make_plane, projective_representatives, read_plane
from gonplex.pointline import (
    FAIL,
    PASS,
    PointLineBijection,
    coset_permutation,
    induced_permutation,
    read_bijection,
    search_bijection,
    trace_bijection,
    verify_properties,
    verify_trace_uniqueness,
    write_bijection,
)

from conftest import FANO_TEXT, basic_bijection, pg2


def oracle_ok(plane, mapping):
    """Set-based P1/P2 check, independent of the plane's join/meet caches."""
    lines = [set(pts) for pts in plane.incidence]
    n = plane.num_points
    if any(x in lines[mapping[x]] for x in range(n)):
        return False
    for x1, x2 in itertools.combinations(range(n), 2):
        (z,) = lines[mapping[x1]] & lines[mapping[x2]]
        (join,) = [pts for pts in lines if x1 in pts and x2 in pts]
        if z in join:
            return False
    return True


@pytest.mark.parametrize("q", [2, 4, 8])
def test_trace_bijection_certifies_in_characteristic_two(q):
    T = trace_bijection(tower_for_order(q), pg2(q))
    assert T.certified and T.certification.status == PASS
    assert oracle_ok(pg2(q), T.map)


def test_trace_bijection_is_identity_on_labels():
    T = basic_bijection(2)
    assert T.map == tuple(range(7))


@pytest.mark.parametrize("q,witness", [(5, (0, 3, 4)), (7, (0, 12, 34))])
def test_trace_bijection_fails_p2_in_odd_characteristic(q, witness):
    T = trace_bijection(tower_for_order(q), pg2(q))
    assert not T.certified
    assert T.certification.status == FAIL
    assert T.certification.violated == "P2"
    assert T.certification.witness == witness
    x1, x2, z = witness
    plane = pg2(q)
    assert z in set(plane.incidence[T.map[x1]]) & set(plane.incidence[T.map[x2]])
    assert any(x1 in pts and x2 in pts and z in pts for pts in plane.incidence)


def test_p2_failure_matches_field_arithmetic():
    # In K: x1 = gF, x2 = hF, T(x) is x * ker(Tr).  The line x1 x2 is the
    # F-span of g and h; z is the common point of gE and hE.
    q = 5
    tower = tower_for_order(q)
    reps = projective_representatives(tower)
    x1, x2, z = trace_bijection(tower, pg2(q)).certification.witness
    g, h, w = reps[x1], reps[x2], reps[z]
    assert not trace(w / g) and not trace(w / h)
    scalars = [tower.scalar(c) for c in range(q)]
    span = {(a * g + b * h).coeffs for a in scalars for b in scalars}
    assert w.coeffs in span


def test_characteristic_three_is_refused_unless_forced():
    tower = tower_for_order(3)
    with pytest.raises(CharacteristicThree):
        trace_bijection(tower, pg2(3))
    T = trace_bijection(tower, pg2(3), allow_char3=True)
    assert T.certification.violated == "P1"
    assert T.certification.witness == (0,)
    # every point lies on its own image line, the point F = (1, 0, 0) included
    reps = projective_representatives(tower)
    f = next(i for i, g in enumerate(reps) if g.coeffs == (1, 0, 0))
    assert all(pg2(3).incident(x, T.map[x]) for x in range(13))
    assert pg2(3).incident(f, T.map[f])


def test_plane_mismatch():
    with pytest.raises(PlaneMismatch):
        trace_bijection(tower_for_order(4), pg2(2))


def test_p1_failure_and_not_bijective():
    plane = pg2(2)
    # map each point to the first line through it
    T = PointLineBijection(plane, tuple(plane.point_lines[x][0] for x in range(7)))
    with pytest.raises(NotBijective):
        verify_properties(plane, T)
    hits = PointLineBijection(plane, tuple(range(7)))
    # an incident perfect matching exists in any plane: find one and check P1
    for perm in itertools.permutations(range(7)):
        if all(plane.incident(x, perm[x]) for x in range(7)):
            break
    cert = verify_properties(plane, PointLineBijection(plane, perm))
    assert cert.violated == "P1" and cert.witness == (0,)
    assert verify_properties(plane, hits).passed
    with pytest.raises(NotBijective):
        verify_properties(plane, PointLineBijection(plane, (0, 1, 2)))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_induced_permutations_are_derangements(q):
    plane, T = pg2(q), basic_bijection(q)
    for y in range(plane.num_lines):
        ip = induced_permutation(plane, T, y)
        assert ip.is_fixed_point_free()
        assert sorted(ip.perm) == sorted(ip.perm.values()) == list(plane.incidence[y])
        assert sum(ip.cycle_type()) == q + 1
    if q == 2:
        assert {induced_permutation(plane, T, y).cycle_type() for y in range(7)} == {(3,)}
    if q == 4:
        assert {len(induced_permutation(plane, T, y).perm) for y in range(21)} == {5}


def test_induced_permutation_needs_certified_map():
    T = trace_bijection(tower_for_order(5), pg2(5))
    with pytest.raises(NotCertified):
        induced_permutation(pg2(5), T, 0)


@pytest.mark.parametrize("q", [2, 4])
def test_multiplication_is_an_automorphism_commuting_with_trace_map(q):
    tower = tower_for_order(q)
    plane, T = pg2(q), basic_bijection(q)
    for c in list(tower.nonzero_elements())[1:6]:
        sigma = coset_permutation(tower, c)
        assert sorted(sigma) == list(range(plane.num_points))
        for l, pts in enumerate(plane.incidence):
            assert sorted(sigma[x] for x in pts) == list(plane.incidence[sigma[l]])
        assert all(T.map[sigma[x]] == sigma[T.map[x]] for x in range(plane.num_points))


def test_search_matches_brute_force_on_fano():
    plane = pg2(2)
    first = next(p for p in itertools.permutations(range(7)) if oracle_ok(plane, p))
    T = search_bijection(plane)
    assert T.certified and T.map == first


def test_search_on_pg23():
    plane = pg2(3)
    T = search_bijection(plane)
    assert T.certified and oracle_ok(plane, T.map)
    assert T.map == (2, 0, 3, 4, 5, 10, 11, 1, 12, 7, 9, 8, 6)
    assert search_bijection(plane, jobs=4).map == T.map


def test_search_budget_and_exhaustion():
    with pytest.raises(BudgetExceeded) as exc:
        search_bijection(pg2(3), budget=2)
    assert exc.value.nodes >= 2
    with pytest.raises(BudgetExceeded):
        search_bijection(pg2(3), budget=2, jobs=2)
    # a triangle: three points, three lines of two points each
    tri = make_plane("triangle", [(0, 1), (1, 2), (0, 2)], num_points=3)
    brute = [p for p in itertools.permutations(range(3)) if oracle_ok(tri, p)]
    if brute:
        assert search_bijection(tri).map == brute[0]
    else:
        with pytest.raises(SearchExhausted):
            search_bijection(tri)


def test_broken_plane_gives_axiom_witness():
    plane = read_plane(FANO_TEXT)
    broken = make_plane("broken", plane.incidence[1:] + ((0, 1, 4),), num_points=7)
    cert = verify_properties(broken, PointLineBijection(broken, (6, 5, 4, 3, 2, 1, 0)))
    assert not cert.passed
    assert oracle_ok(plane, search_bijection(plane).map)


def test_verify_trace_uniqueness():
    for q in (2, 4, 8):
        res = verify_trace_uniqueness(tower_for_order(q))
        assert res.ok and res.normalized_ok and res.trace_of_one == 1
    res = verify_trace_uniqueness(tower_for_order(5))
    assert res.solutions == () and not res.ok
    assert res.trace_of_one == 3
    assert len(res.normalized) == 7
    with pytest.raises(CharacteristicThree):
        verify_trace_uniqueness(tower_for_order(3))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_bijection_round_trip(q):
    T = basic_bijection(q)
    text = write_bijection(T)
    again = read_bijection(text, pg2(q))
    assert again == T and again.certified
    assert write_bijection(again) == text
    assert again.content_hash() == T.content_hash()


def test_bijection_file_errors():
    text = write_bijection(basic_bijection(2))
    with pytest.raises(PlaneMismatch):
        read_bijection(text, pg2(3))
    with pytest.raises(PlaneFormatError):
        read_bijection("\n".join(text.splitlines()[:-1]), pg2(2))
    with pytest.raises(NotBijective):
        read_bijection(text.replace("p1 -> L1", "p1 -> L0"), pg2(2))
