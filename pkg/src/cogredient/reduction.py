"""Reduction of a nondegenerate symmetric matrix to its cogredient standard form.

Pipeline, with an exact witness carried at every stage::

    S --diagonalize--> diag(u_1..u_n) --normalize_diagonal--> I_r (+) z I_(n-r)
      --collapse_z_pairs--> I_n or I_(n-1) (+) (z)          (the type form)
      --hyperbolize--> H_2nu (+) Delta                       (the standard form)

``H_2nu`` is the hyperbolic block with identity blocks on the anti-diagonal
and ``Delta`` is empty, ``(1)``, ``(z)`` or ``diag(1, -z)``, with ``z`` the
ring's canonical non-square unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Tuple

from .localring import RingContext, RingElement
from .matrix import Matrix, block_diag, congruence_apply, det, direct_sum, mat_mul, permutation


class DeltaKind(str, Enum):
    NONE = "NONE"
    ONE = "ONE"
    Z = "Z"
    DIAG_1_NEG_Z = "DIAG_1_NEG_Z"


class TypeKind(str, Enum):
    IDENTITY = "IDENTITY"
    IDENTITY_Z = "IDENTITY_Z"


_DELTA_SIZE = {DeltaKind.NONE: 0, DeltaKind.ONE: 1, DeltaKind.Z: 1, DeltaKind.DIAG_1_NEG_Z: 2}


class DegenerateFormError(ValueError):
    """The Gram matrix is not invertible."""


class NotSymmetricError(ValueError):
    pass


@dataclass(frozen=True)
class StandardForm:
    """The invariants ``(nu, delta, Delta)`` naming ``H_2nu (+) Delta``."""

    ring: RingContext
    nu: int
    delta: int
    delta_kind: DeltaKind

    def __post_init__(self):
        object.__setattr__(self, "delta_kind", DeltaKind(self.delta_kind))
        if self.nu < 0:
            raise ValueError("nu must be >= 0")
        if _DELTA_SIZE[self.delta_kind] != self.delta:
            raise ValueError(f"delta={self.delta} does not match {self.delta_kind.value}")
        if self.n == 0:
            raise ValueError("empty form")

    @property
    def n(self) -> int:
        return 2 * self.nu + self.delta

    @property
    def z(self) -> RingElement:
        return RingElement(self.ring, self.ring.z)

    def matrix(self) -> Matrix:
        return standard_matrix(self)

    def to_dict(self) -> dict:
        return {
            "nu": self.nu,
            "delta": self.delta,
            "delta_kind": self.delta_kind.value,
            "z": self.ring.encode(self.ring.z),
        }


@dataclass(frozen=True)
class TypeForm:
    kind: TypeKind
    n: int

    def matrix(self, ring: RingContext) -> Matrix:
        diag = [ring.one] * self.n
        if self.kind is TypeKind.IDENTITY_Z:
            diag[-1] = ring.z
        return Matrix.diagonal(ring, diag)


@dataclass(frozen=True)
class ReductionWitness:
    form: StandardForm
    P: Matrix
    target: Matrix

    def verify(self, S: Matrix) -> bool:
        return congruence_apply(self.P, S) == self.target and _unit_det(self.P)


class SquareSplit(NamedTuple):
    squares: int
    nonsquares: int


def _unit_det(A: Matrix) -> bool:
    return A.ring.is_unit(det(A).value)


def _check_form(S: Matrix):
    if not S.is_symmetric():
        raise NotSymmetricError("matrix is not symmetric")
    if S.n_rows == 0:
        raise ValueError("empty matrix")
    if not _unit_det(S):
        raise DegenerateFormError("determinant is not a unit; the form is degenerate")


# --- congruence bookkeeping --------------------------------------------------


class _Congruence:
    """Elementary congruence moves applied simultaneously to ``S`` and a witness ``P``.

    Invariant: ``self.S == P0 S0 P0^T`` where ``P0`` is ``self.P``.
    """

    def __init__(self, S: Matrix):
        R = S.ring
        self.R = R
        n = S.n_rows
        self.n = n
        self.S = [list(row) for row in S.rows]
        self.P = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]

    def swap(self, i, j):
        if i == j:
            return
        S, P = self.S, self.P
        P[i], P[j] = P[j], P[i]
        S[i], S[j] = S[j], S[i]
        for row in S:
            row[i], row[j] = row[j], row[i]

    def scale(self, i, c):
        R, S, P = self.R, self.S, self.P
        P[i] = [R.mul(c, x) for x in P[i]]
        S[i] = [R.mul(c, x) for x in S[i]]
        for row in S:
            row[i] = R.mul(c, row[i])

    def add(self, i, j, c):
        """row_i += c row_j, col_i += c col_j."""
        R, S, P = self.R, self.S, self.P
        P[i] = [R.add(x, R.mul(c, y)) for x, y in zip(P[i], P[j])]
        S[i] = [R.add(x, R.mul(c, y)) for x, y in zip(S[i], S[j])]
        for row in S:
            row[i] = R.add(row[i], R.mul(c, row[j]))

    def block(self, idx: List[int], B):
        """Replace rows ``idx`` by ``B`` times those rows (and likewise the columns of S)."""
        R = self.R

        def combine(vectors):
            out = []
            for brow in B:
                acc = [R.zero] * len(vectors[0])
                for coef, vec in zip(brow, vectors):
                    if coef != R.zero:
                        acc = [R.add(a, R.mul(coef, v)) for a, v in zip(acc, vec)]
                out.append(acc)
            return out

        for M in (self.P, self.S):
            new = combine([M[i] for i in idx])
            for i, row in zip(idx, new):
                M[i] = row
        for row in self.S:
            new = combine([[row[i]] for i in idx])
            for i, v in zip(idx, new):
                row[i] = v[0]

    def diagonal(self):
        return [self.S[i][i] for i in range(self.n)]

    def result(self) -> Tuple[Matrix, Matrix]:
        R = self.R
        return Matrix(R, tuple(map(tuple, self.P))), Matrix(R, tuple(map(tuple, self.S)))


# --- standard forms ----------------------------------------------------------


def hyperbolic(ring: RingContext, nu: int) -> Matrix:
    """``H_2nu = [[0, I], [I, 0]]``."""
    one, zero = ring.one, ring.zero
    n = 2 * nu
    return Matrix(
        ring, tuple(tuple(one if abs(i - j) == nu else zero for j in range(n)) for i in range(n))
    )


def delta_matrix(ring: RingContext, kind: DeltaKind) -> Matrix:
    kind = DeltaKind(kind)
    if kind is DeltaKind.NONE:
        return Matrix(ring, ())
    if kind is DeltaKind.ONE:
        return Matrix.diagonal(ring, [ring.one])
    if kind is DeltaKind.Z:
        return Matrix.diagonal(ring, [ring.z])
    return Matrix.diagonal(ring, [ring.one, ring.neg(ring.z)])


def standard_matrix(form: StandardForm) -> Matrix:
    return direct_sum(hyperbolic(form.ring, form.nu), delta_matrix(form.ring, form.delta_kind))


def candidate_forms(ring: RingContext, n: int) -> List[StandardForm]:
    """The two standard forms of rank ``n``, identity class first."""
    return [_form_for_type(ring, kind, n) for kind in TypeKind]


def _form_for_type(ring: RingContext, kind: TypeKind, n: int) -> StandardForm:
    """Standard form cogredient to ``I_n`` (IDENTITY) or ``I_(n-1) (+) (z)``.

    Writing ``k = n // 2``, ``H_2k`` has determinant ``(-1)**k``, which is a
    square when -1 is a square (case 1) or when ``k`` is even (case 2).  In
    both of those cases ``I_n`` goes to the purely hyperbolic form (with
    ``(1)`` appended for odd ``n``).  When -1 is a non-square and ``k`` is odd
    (case 3) the roles of the two classes are exchanged.
    """
    k = n // 2
    sign_is_square = ring.minus_one_is_square or k % 2 == 0
    plain = (kind is TypeKind.IDENTITY) == sign_is_square
    if n % 2:
        return StandardForm(ring, k, 1, DeltaKind.ONE if plain else DeltaKind.Z)
    if plain:
        return StandardForm(ring, k, 0, DeltaKind.NONE)
    return StandardForm(ring, k - 1, 2, DeltaKind.DIAG_1_NEG_Z)


# --- building blocks ---------------------------------------------------------


def _sqrt_minus_one(R: RingContext):
    return R.sqrt(R.neg(R.one))


def zi_block_square_branch(ring: RingContext) -> Matrix:
    """``P`` with ``P P^T = z I_2`` when -1 = u^2: ``P = 2^-1 [[1+z, (1-z)/u], [u(1-z), 1+z]]``."""
    R = ring
    if not R.minus_one_is_square:
        raise ValueError(f"-1 is not a square in {R.spec}")
    u = _sqrt_minus_one(R)
    z = R.z
    half = R.inv(R.from_int(2))
    a = R.mul(half, R.add(R.one, z))
    b = R.mul(half, R.sub(R.one, z))
    return Matrix(R, ((a, R.mul(R.inv(u), b)), (R.mul(u, b), a)))


def zi_block_nonsquare_branch(ring: RingContext) -> Matrix:
    """``Q = [[xy, y], [-y, xy]]`` with ``z = (1 + x^2) y^2``, so ``Q Q^T = z I_2``."""
    from .localring import decompose_nonsquare

    R = ring
    x, y = decompose_nonsquare(RingElement(R, R.z))
    xy = R.mul(x.value, y.value)
    return Matrix(R, ((xy, y.value), (R.neg(y.value), xy)))


def zi_block(ring: RingContext) -> Matrix:
    """2x2 ``P`` with ``P P^T = z I_2``, choosing the construction by whether -1 is a square."""
    if ring.minus_one_is_square:
        return zi_block_square_branch(ring)
    return zi_block_nonsquare_branch(ring)


def collapse_z_pairs(ring: RingContext, count: int) -> Matrix:
    """Witness ``W`` with ``W (z I_count) W^T = I_count``; ``count`` must be even."""
    if count % 2:
        raise ValueError(f"count must be even, got {count}")
    # z^-1 P sends z I_2 to z^-1 P P^T = I_2
    W = zi_block(ring).scale(RingElement(ring, ring.inv(ring.z)))
    return block_diag(ring, [W] * (count // 2))


def hyperbolic_block(ring: RingContext, nu: int) -> Matrix:
    """``P = 2^-1 [[I, -I], [I, I]]``; satisfies ``P L P^T = H_2nu`` for ``L = 2 diag(I, -I)``."""
    R = ring
    half = R.inv(R.from_int(2))
    mhalf = R.neg(half)
    n = 2 * nu
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(half)
            elif j == i + nu:
                row.append(mhalf)
            elif i == j + nu:
                row.append(half)
            else:
                row.append(R.zero)
        rows.append(tuple(row))
    return Matrix(R, tuple(rows))


def absorb_two_block(ring: RingContext, nu: int) -> Matrix:
    """``X = 2^-1 [[3I, I], [I, 3I]]``; satisfies ``X diag(I, -I) X^T = 2 diag(I, -I)``.

    Valid in every odd characteristic, so no case split on whether 2 or -2 is
    a square is needed.
    """
    R = ring
    half = R.inv(R.from_int(2))
    three_half = R.mul(R.from_int(3), half)
    n = 2 * nu
    rows = []
    for i in range(n):
        rows.append(
            tuple(
                three_half if i == j else half if abs(i - j) == nu else R.zero for j in range(n)
            )
        )
    return Matrix(R, tuple(rows))


def split_hyperbolic_witness(ring: RingContext, nu: int) -> Matrix:
    """``B`` with ``B diag(I_nu, -I_nu) B^T = H_2nu``; ``B = [[I/2, -I/2], [I, I]]``."""
    return mat_mul(hyperbolic_block(ring, nu), absorb_two_block(ring, nu))


def lemma_hyperbolic(ring: RingContext, nu: int) -> Tuple[Matrix, Matrix]:
    """Return ``(P, A)`` with ``P A P^T = H_2nu``.

    ``A`` is ``I_2nu`` when -1 is a square and ``I_nu (+) z I_nu`` otherwise.
    """
    R = ring
    one = R.one
    if R.minus_one_is_square:
        s = _sqrt_minus_one(R)
        A = Matrix.identity(R, 2 * nu)
    else:
        # -1 = z c^2
        s = R.sqrt(R.neg(R.inv(R.z)))
        A = Matrix.diagonal(R, [one] * nu + [R.z] * nu)
    D = Matrix.diagonal(R, [one] * nu + [s] * nu)
    return mat_mul(split_hyperbolic_witness(R, nu), D), A


def swap_block(ring: RingContext) -> Tuple[Matrix, Matrix, Matrix]:
    """Return ``(P, A, B)`` with ``P A P^T = B`` for the 2x2 diagonal exchanges.

    -1 square:     ``(1, z) -> (1, -z)`` with ``P = diag(1, u)``, ``u^2 = -1``.
    -1 non-square: ``(1, -z) -> I_2``    with ``P = diag(1, c)``, ``-1 = z c^2``.
    """
    R = ring
    mz = R.neg(R.z)
    if R.minus_one_is_square:
        P = Matrix.diagonal(R, [R.one, _sqrt_minus_one(R)])
        return P, Matrix.diagonal(R, [R.one, R.z]), Matrix.diagonal(R, [R.one, mz])
    c = R.sqrt(R.neg(R.inv(R.z)))
    P = Matrix.diagonal(R, [R.one, c])
    return P, Matrix.diagonal(R, [R.one, mz]), Matrix.identity(R, 2)


# --- pipeline ----------------------------------------------------------------


def diagonalize(S: Matrix) -> Tuple[Matrix, Matrix]:
    """Return ``(P, D)`` with ``D = P S P^T`` diagonal with unit entries.

    Pivot policy: the first unit on the remaining diagonal; failing that, the
    first unit off-diagonal entry ``S[j, k]`` (``j < k``), after which adding
    row/column ``k`` into ``j`` leaves ``S[j, j] + 2 S[j, k] + S[k, k]``, a unit.
    """
    _check_form(S)
    R = S.ring
    acc = _Congruence(S)
    n = acc.n
    for i in range(n):
        M = acc.S
        j = next((j for j in range(i, n) if R.is_unit(M[j][j])), None)
        if j is None:
            jk = next(
                ((j, k) for j in range(i, n) for k in range(j + 1, n) if R.is_unit(M[j][k])), None
            )
            if jk is None:
                raise DegenerateFormError("no unit pivot; the form is degenerate")
            j, k = jk
            acc.add(j, k, R.one)
        acc.swap(i, j)
        dinv = R.inv(acc.S[i][i])
        for l in range(i + 1, n):
            x = acc.S[l][i]
            if x != R.zero:
                acc.add(l, i, R.neg(R.mul(x, dinv)))
    return acc.result()


def normalize_diagonal(D: Matrix) -> Tuple[Matrix, SquareSplit]:
    """Scale a unit diagonal to ``I_r (+) z I_(n-r)``; squares are moved first (stably)."""
    if not D.is_diagonal():
        raise ValueError("matrix is not diagonal")
    R = D.ring
    diag = D.diagonal_entries()
    if not all(R.is_unit(u) for u in diag):
        raise ValueError("diagonal has non-unit entries")
    zinv = R.inv(R.z)
    scales, squares, nonsquares = [], [], []
    for i, u in enumerate(diag):
        if R.is_square_unit(u):
            w = R.sqrt(u)
            squares.append(i)
        else:
            w = R.sqrt(R.mul(u, zinv))
            nonsquares.append(i)
        scales.append(R.inv(w))
    P = mat_mul(permutation(R, squares + nonsquares), Matrix.diagonal(R, scales))
    return P, SquareSplit(len(squares), len(nonsquares))


def to_type_form(S: Matrix) -> Tuple[Matrix, TypeForm]:
    """Witness ``P`` with ``P S P^T`` equal to ``I_n`` or ``I_(n-1) (+) (z)``."""
    R = S.ring
    P1, D = diagonalize(S)
    P2, (r, k) = normalize_diagonal(D)
    even = k - k % 2
    W = block_diag(R, [Matrix.identity(R, r), collapse_z_pairs(R, even), Matrix.identity(R, k % 2)])
    kind = TypeKind.IDENTITY_Z if k % 2 else TypeKind.IDENTITY
    return mat_mul(W, mat_mul(P2, P1)), TypeForm(kind, S.n_rows)


def hyperbolize(ring: RingContext, T: TypeForm) -> Tuple[Matrix, StandardForm]:
    """Witness from a type form to its standard form.

    The diagonal is first rearranged into ``I_nu (+) E I_nu (+) Delta'`` where
    ``E`` is 1 when -1 is a square and ``z`` otherwise; pairs of entries are
    traded ``(1, 1) <-> (z, z)`` with the 2x2 blocks of ``zi_block`` and the
    rest is a permutation.  Scaling the middle block to ``-I_nu`` and finishing
    ``Delta'`` (``(1, z) -> (1, -z)`` or ``(1, 1) -> (1, -z)``) leaves
    ``diag(I, -I) (+) Delta``, and ``split_hyperbolic_witness`` turns the
    first part into ``H_2nu``.
    """
    R = ring
    form = _form_for_type(R, T.kind, T.n)
    nu, kind = form.nu, form.delta_kind
    one, z = R.one, R.z
    sq = R.minus_one_is_square
    tail = {
        DeltaKind.NONE: [],
        DeltaKind.ONE: [one],
        DeltaKind.Z: [z],
        DeltaKind.DIAG_1_NEG_Z: [one, z] if sq else [one, one],
    }[kind]
    want = [one] * nu + [one if sq else z] * nu + tail

    acc = _Congruence(T.matrix(R))
    n = acc.n
    cur = acc.diagonal()
    surplus = sum(v == z for v in want) - sum(v == z for v in cur)
    # surplus is even: both sides lie in the same square class
    if surplus:
        src, dst = (one, z) if surplus > 0 else (z, one)
        block = zi_block(R)
        if surplus < 0:
            block = block.scale(RingElement(R, R.inv(z)))
        picks = [i for i in range(n) if cur[i] == src and want[i] == dst]
        picks += [i for i in range(n) if cur[i] == src and want[i] == src]
        picks = picks[: abs(surplus)]
        for a, b in zip(picks[::2], picks[1::2]):
            acc.block([a, b], block.rows)
        cur = acc.diagonal()
    for i in range(n):
        if cur[i] != want[i]:
            j = next(j for j in range(i + 1, n) if cur[j] == want[i] and cur[j] != want[j])
            acc.swap(i, j)
            cur[i], cur[j] = cur[j], cur[i]

    if nu:
        s = _sqrt_minus_one(R) if sq else R.sqrt(R.neg(R.inv(z)))
        for i in range(nu, 2 * nu):
            acc.scale(i, s)
    if kind is DeltaKind.DIAG_1_NEG_Z:
        # (1, z) -> (1, -z) via u, or (1, 1) -> (1, -z) via sqrt(-z)
        s = _sqrt_minus_one(R) if sq else R.sqrt(R.neg(z))
        acc.scale(n - 1, s)
    if nu:
        acc.block(list(range(2 * nu)), split_hyperbolic_witness(R, nu).rows)

    P, result = acc.result()
    if result != standard_matrix(form):
        raise AssertionError("hyperbolize produced a wrong target")  # internal bug guard
    return P, form


def reduce(S: Matrix) -> ReductionWitness:
    """Canonical form of ``S`` with an invertible witness ``P``: ``P S P^T = H_2nu (+) Delta``.

    A matrix already in standard form gets the identity witness.
    """
    form = classify(S)
    target = standard_matrix(form)
    if S == target:
        return ReductionWitness(form, Matrix.identity(S.ring, S.n_rows), target)
    P1, T = to_type_form(S)
    P2, form = hyperbolize(S.ring, T)
    return ReductionWitness(form, mat_mul(P2, P1), standard_matrix(form))


def classify(S: Matrix) -> StandardForm:
    """Standard form of ``S`` without building a witness.

    ``S`` is cogredient to ``I_n`` exactly when ``det S`` is a square, since
    congruence multiplies the determinant by the square ``det(P)**2``.
    """
    _check_form(S)
    R = S.ring
    kind = TypeKind.IDENTITY if R.is_square_unit(det(S).value) else TypeKind.IDENTITY_Z
    return _form_for_type(R, kind, S.n_rows)
