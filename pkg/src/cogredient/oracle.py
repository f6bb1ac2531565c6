"""Brute-force congruence orbits of symmetric invertible matrices over tiny rings.

Orbits are computed by breadth-first closure under elementary congruences
``S -> E S E^T`` (unit scalings of one row/column, transpositions, and
transvections adding one row/column into another).  Over a local ring these
elementary matrices generate the whole general linear group, so the closure
is the full congruence orbit.  Nothing here depends on the reduction
pipeline except the final cross-checks in :func:`verify_classification`.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .localring import RingContext
from .matrix import Matrix, _berkowitz
from .reduction import candidate_forms, classify, reduce, standard_matrix

DEFAULT_BUDGET = 10**7


class BudgetExceededError(RuntimeError):
    pass


@dataclass
class OrbitReport:
    ring: str
    n: int
    total: int
    orbit_count: int
    orbit_sizes: List[int]
    representatives: List[list]
    canonical_forms: List[Optional[dict]] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "ring": self.ring,
            "n": self.n,
            "total": self.total,
            "orbit_count": self.orbit_count,
            "orbit_sizes": self.orbit_sizes,
            "representatives": self.representatives,
            "canonical_forms": self.canonical_forms,
            "checks": self.checks,
            "passed": self.passed,
            "counterexample": self.counterexample,
        }


# states are the upper triangles of symmetric matrices, row by row


def _upper_index(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _to_full(state, n):
    M = [[None] * n for _ in range(n)]
    for (i, j), x in zip(_upper_index(n), state):
        M[i][j] = M[j][i] = x
    return M


def _to_state(M, n):
    return tuple(M[i][j] for i in range(n) for j in range(i, n))


def check_budget(ring: RingContext, n: int, budget: int = DEFAULT_BUDGET) -> int:
    states = ring.card_R ** (n * (n + 1) // 2)
    if states > budget:
        raise BudgetExceededError(
            f"{ring.spec}, n={n}: {ring.card_R}^{n * (n + 1) // 2} = {states} "
            f"symmetric matrices exceeds the budget of {budget}"
        )
    return states


def _symmetric_invertible_states(ring: RingContext, n: int, budget: int) -> Iterator[tuple]:
    check_budget(ring, n, budget)
    idx = _upper_index(n)
    for state in itertools.product(list(ring.elements()), repeat=len(idx)):
        if ring.is_unit(_berkowitz(ring, _to_full(state, n))):
            yield state


def enumerate_symmetric_invertible(
    ring: RingContext, n: int, budget: int = DEFAULT_BUDGET
) -> Iterator[Matrix]:
    """Every symmetric ``n x n`` matrix with unit determinant, once each, in canonical order."""
    for state in _symmetric_invertible_states(ring, n, budget):
        yield Matrix(ring, tuple(map(tuple, _to_full(state, n))))


def _generators(ring: RingContext, n: int):
    R = ring
    units = list(R.units())
    gens = []

    def scale(i, c):
        def g(M):
            M = [row[:] for row in M]
            M[i] = [R.mul(c, x) for x in M[i]]
            for row in M:
                row[i] = R.mul(c, row[i])
            return M

        return g

    def swap(i, j):
        def g(M):
            M = [row[:] for row in M]
            M[i], M[j] = M[j], M[i]
            for row in M:
                row[i], row[j] = row[j], row[i]
            return M

        return g

    def transvect(i, j):
        def g(M):
            M = [row[:] for row in M]
            M[i] = [R.add(x, y) for x, y in zip(M[i], M[j])]
            for row in M:
                row[i] = R.add(row[i], row[j])
            return M

        return g

    for i in range(n):
        gens.extend(scale(i, c) for c in units if c != R.one)
    for i, j in itertools.combinations(range(n), 2):
        gens.append(swap(i, j))
    for i, j in itertools.permutations(range(n), 2):
        gens.append(transvect(i, j))
    return gens


def _orbits(ring: RingContext, n: int, budget: int) -> Tuple[List[tuple], Dict[tuple, int], List[int]]:
    """Return ``(states, orbit_of, seeds)``; orbit ids follow the order of their smallest member."""
    states = list(_symmetric_invertible_states(ring, n, budget))
    universe = set(states)
    gens = _generators(ring, n)
    orbit_of: Dict[tuple, int] = {}
    seeds: List[tuple] = []
    for seed in states:
        if seed in orbit_of:
            continue
        oid = len(seeds)
        seeds.append(seed)
        orbit_of[seed] = oid
        queue = deque([seed])
        while queue:
            M = _to_full(queue.popleft(), n)
            for g in gens:
                image = _to_state(g(M), n)
                if image not in universe:
                    raise AssertionError(f"generator left the symmetric invertible set: {image}")
                if image not in orbit_of:
                    orbit_of[image] = oid
                    queue.append(image)
                elif orbit_of[image] != oid:
                    raise AssertionError("orbits are not closed under congruence")
    return states, orbit_of, seeds


def _report(ring, n, states, orbit_of, seeds, spec) -> OrbitReport:
    sizes = [0] * len(seeds)
    for s in states:
        sizes[orbit_of[s]] += 1
    return OrbitReport(
        ring=spec or ring.spec,
        n=n,
        total=len(states),
        orbit_count=len(seeds),
        orbit_sizes=sizes,
        representatives=[_encode(ring, s, n) for s in seeds],
        canonical_forms=[None] * len(seeds),
    )


def congruence_orbits(
    ring: RingContext, n: int, budget: int = DEFAULT_BUDGET, spec: Optional[str] = None
) -> OrbitReport:
    """Partition the symmetric invertible ``n x n`` matrices into congruence orbits."""
    return _report(ring, n, *_orbits(ring, n, budget), spec)


def _encode(ring, state, n):
    return [[ring.encode(x) for x in row] for row in _to_full(state, n)]


def verify_classification(
    ring: RingContext,
    n: int,
    budget: int = DEFAULT_BUDGET,
    sample: Optional[int] = None,
    seed: int = 0,
    spec: Optional[str] = None,
) -> OrbitReport:
    """Compare the orbit partition with the two-class theorem and the reduction pipeline.

    ``classify`` is checked on every matrix.  ``reduce`` (which builds a
    witness) runs on every matrix, or on ``sample`` of them chosen with a
    seeded RNG when ``sample`` is given.
    """
    R = ring
    states, orbit_of, seeds = _orbits(R, n, budget)
    report = _report(R, n, states, orbit_of, seeds, spec)
    checks = report.checks

    def fail(name, state, why):
        checks[name] = False
        if report.counterexample is None:
            report.counterexample = {"check": name, "matrix": _encode(R, state, n), "reason": why}

    checks["two_orbits"] = len(seeds) == 2

    forms = candidate_forms(R, n)
    form_of_orbit = {}
    canon_ok = True
    for form in forms:
        st = _to_state(standard_matrix(form).rows, n)
        if st not in orbit_of:
            canon_ok = False
            continue
        oid = orbit_of[st]
        if oid in form_of_orbit:
            canon_ok = False
        form_of_orbit[oid] = form
        report.canonical_forms[oid] = form.to_dict()
    checks["one_canonical_per_orbit"] = canon_ok and len(form_of_orbit) == len(seeds)

    # determinant square class: constant on orbits, different across them
    klass: Dict[int, set] = {}
    for s in states:
        d = _berkowitz(R, _to_full(s, n))
        klass.setdefault(orbit_of[s], set()).add(R.is_square_unit(d))
    checks["det_class_separates"] = all(len(v) == 1 for v in klass.values()) and len(
        {next(iter(v)) for v in klass.values()}
    ) == len(klass)

    checks["classify_matches_orbit"] = True
    for s in states:
        S = Matrix(R, tuple(map(tuple, _to_full(s, n))))
        if classify(S) != form_of_orbit.get(orbit_of[s]):
            fail("classify_matches_orbit", s, "classify disagrees with the orbit's canonical form")

    checks["reduce_witness_valid"] = True
    picks = states
    if sample is not None and sample < len(states):
        picks = random.Random(seed).sample(states, sample)
    for s in picks:
        S = Matrix(R, tuple(map(tuple, _to_full(s, n))))
        w = reduce(S)
        if not w.verify(S):
            fail("reduce_witness_valid", s, "P S P^T != target or P singular")
        elif form_of_orbit.get(orbit_of[s]) != w.form:
            fail("reduce_witness_valid", s, "reduce landed outside the orbit")
    return report
