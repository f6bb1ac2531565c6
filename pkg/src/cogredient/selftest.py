"""Built-in invariant checks run by ``cogredient selftest``."""

from __future__ import annotations

import random
from typing import Callable, List, Tuple

from .localring import RingElement, decompose_nonsquare, make_ring, scale_to
from .matrix import (
    Matrix,
    congruence_apply,
    det,
    inverse,
    is_invertible,
    mat_mul,
    random_invertible,
    random_symmetric_invertible,
)
from .oracle import verify_classification
from .reduction import (
    TypeKind,
    classify,
    collapse_z_pairs,
    hyperbolic,
    lemma_hyperbolic,
    reduce,
    swap_block,
    to_type_form,
    zi_block,
)

RINGS = ["zmod:3", "zmod:3^2", "zmod:5", "zmod:7", "gr:3^2:2", "trunc:3:1:2"]
SIZES = [1, 2, 3, 4]
ORACLE_CASES = [("zmod:3", 2), ("zmod:3", 3), ("zmod:5", 2)]


def _unit_group(spec):
    R = make_ring(spec)
    units = list(R.units())
    squares = {R.mul(u, u) for u in units}
    ok = 2 * len(squares) == len(units)
    ok &= all(R.is_square_unit(u) == (u in squares) for u in units)
    ok &= sum(R.mul(u, u) == R.one for u in units) == 2
    ok &= all(R.mul(R.sqrt(s), R.sqrt(s)) == s for s in squares)
    for u in units:
        for a in R.elements():
            if not R.is_unit(a):
                c = scale_to(RingElement(R, u), RingElement(R, a))
                ok &= c * c * (RingElement(R, u) + RingElement(R, a)) == RingElement(R, u)
    if not R.minus_one_is_square:
        x, y = decompose_nonsquare(RingElement(R, R.z))
        ok &= (1 + x * x) * y * y == RingElement(R, R.z)
    return ok


def _lemmas(spec):
    R = make_ring(spec)
    P = zi_block(R)
    ok = mat_mul(P, P.T) == Matrix.scalar(R, R.z, 2)
    for nu in (1, 2, 3):
        H, A = lemma_hyperbolic(R, nu)
        ok &= congruence_apply(H, A) == hyperbolic(R, nu)
        W = collapse_z_pairs(R, 2 * nu)
        ok &= congruence_apply(W, Matrix.scalar(R, R.z, 2 * nu)) == Matrix.identity(R, 2 * nu)
    S, A, B = swap_block(R)
    ok &= congruence_apply(S, A) == B
    return ok


def _pipeline(spec, n, count=20, seed=0):
    R = make_ring(spec)
    rng = random.Random(seed)
    ok = True
    for _ in range(count):
        S = random_symmetric_invertible(R, n, rng)
        w = reduce(S)
        ok &= w.verify(S)
        f = classify(S)
        ok &= f == w.form
        E = random_invertible(R, n, rng)
        ok &= classify(congruence_apply(E, S)) == f
        ok &= mat_mul(E, inverse(E)) == Matrix.identity(R, n)
        ok &= det(mat_mul(E, S)) == det(E) * det(S)
        P, T = to_type_form(S)
        ok &= (T.kind is TypeKind.IDENTITY) == R.is_square_unit(det(S).value)
        ok &= congruence_apply(P, S) == T.matrix(R) and is_invertible(P)
    return ok


def checks() -> List[Tuple[str, Callable[[], bool]]]:
    out = []
    for spec in RINGS:
        out.append((f"unit group {spec}", lambda s=spec: _unit_group(s)))
        out.append((f"lemma identities {spec}", lambda s=spec: _lemmas(s)))
        for n in SIZES:
            out.append((f"reduce/classify {spec} n={n}", lambda s=spec, n=n: _pipeline(s, n)))
    for spec, n in ORACLE_CASES:
        out.append((f"oracle {spec} n={n}", lambda s=spec, n=n: verify_classification(make_ring(s), n).passed))
    return out


def run_selftest(verbose: bool = False) -> bool:
    failures = 0
    for name, check in checks():
        try:
            ok = bool(check())
        except Exception as exc:  # report, keep going
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        failures += not ok
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
    if verbose:
        print(f"{'all checks passed' if not failures else f'{failures} check(s) failed'}")
    return failures == 0
