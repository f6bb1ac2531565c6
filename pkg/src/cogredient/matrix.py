"""Dense exact matrices over a finite local ring.

Entries are kept as raw ring values (see :mod:`cogredient.localring`);
indexing a matrix returns :class:`RingElement` wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .localring import RingContext, RingElement, RingMismatchError, _same


class DimensionError(ValueError):
    pass


class NotInvertibleError(ArithmeticError):
    """The matrix has a non-unit determinant."""


@dataclass(frozen=True)
class Matrix:
    ring: RingContext
    rows: Tuple[tuple, ...]

    def __post_init__(self):
        if self.rows:
            ncols = len(self.rows[0])
            if any(len(row) != ncols for row in self.rows):
                raise DimensionError("ragged rows")

    # construction

    @classmethod
    def from_rows(cls, ring: RingContext, rows: Iterable[Iterable]) -> "Matrix":
        """Build from encodings, ints or RingElements; every entry is validated."""
        data = []
        for row in rows:
            data.append(tuple(_entry(ring, x) for x in row))
        return cls(ring, tuple(data))

    @classmethod
    def identity(cls, ring: RingContext, n: int) -> "Matrix":
        return cls.scalar(ring, ring.one, n)

    @classmethod
    def zeros(cls, ring: RingContext, n_rows: int, n_cols: int | None = None) -> "Matrix":
        n_cols = n_rows if n_cols is None else n_cols
        return cls(ring, tuple((ring.zero,) * n_cols for _ in range(n_rows)))

    @classmethod
    def scalar(cls, ring: RingContext, c, n: int) -> "Matrix":
        return cls.diagonal(ring, [c] * n)

    @classmethod
    def diagonal(cls, ring: RingContext, diag: Sequence) -> "Matrix":
        vals = [_entry(ring, d) for d in diag]
        n = len(vals)
        return cls(
            ring,
            tuple(tuple(vals[i] if i == j else ring.zero for j in range(n)) for i in range(n)),
        )

    # shape and access

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.n_rows, self.n_cols

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __getitem__(self, ij) -> RingElement:
        i, j = ij
        return RingElement(self.ring, self.rows[i][j])

    def encode(self) -> List[list]:
        enc = self.ring.encode
        return [[enc(x) for x in row] for row in self.rows]

    def is_symmetric(self) -> bool:
        if not self.is_square:
            return False
        n = self.n_rows
        rows = self.rows
        return all(rows[i][j] == rows[j][i] for i in range(n) for j in range(i + 1, n))

    def is_diagonal(self) -> bool:
        zero = self.ring.zero
        return self.is_square and all(
            x == zero for i, row in enumerate(self.rows) for j, x in enumerate(row) if i != j
        )

    def diagonal_entries(self) -> list:
        return [self.rows[i][i] for i in range(min(self.shape))]

    def scale(self, c) -> "Matrix":
        R = self.ring
        c = _entry(R, c)
        return Matrix(R, tuple(tuple(R.mul(c, x) for x in row) for row in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return mat_mul(self, other)

    @property
    def T(self) -> "Matrix":
        return transpose(self)

    def __str__(self):
        return "\n".join(" ".join(str(self.ring.encode(x)) for x in row) for row in self.rows)


def _entry(ring: RingContext, x):
    # plain ints are embedded through Z -> R; anything else must be a valid encoding
    if isinstance(x, int) and not isinstance(x, bool):
        return ring.from_int(x)
    return ring.coerce(x)


def _check_ring(A: Matrix, B: Matrix):
    if A.ring is not B.ring and A.ring != B.ring:
        raise RingMismatchError(f"{A.ring.spec} vs {B.ring.spec}")


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    _check_ring(A, B)
    if A.n_cols != B.n_rows:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    R = A.ring
    add, mul, zero = R.add, R.mul, R.zero
    cols = list(zip(*B.rows))
    if not cols:
        return Matrix(R, tuple(() for _ in A.rows))
    out = []
    for row in A.rows:
        new = []
        for col in cols:
            acc = zero
            for a, b in zip(row, col):
                if a != zero and b != zero:
                    acc = add(acc, mul(a, b))
            new.append(acc)
        out.append(tuple(new))
    return Matrix(R, tuple(out))


def transpose(A: Matrix) -> Matrix:
    return Matrix(A.ring, tuple(zip(*A.rows)) if A.rows else ())


def det(A: Matrix) -> RingElement:
    """Determinant by Berkowitz's division-free algorithm.

    No divisions are performed, so this is exact even when entries are zero
    divisors.
    """
    if not A.is_square:
        raise DimensionError(f"determinant of non-square {A.shape} matrix")
    R = A.ring
    return RingElement(R, _berkowitz(R, A.rows))


def _berkowitz(R: RingContext, a) -> object:
    n = len(a)
    if n == 0:
        return R.one
    add, mul, neg, zero = R.add, R.mul, R.neg, R.zero

    def dot(u, v):
        acc = zero
        for x, y in zip(u, v):
            acc = add(acc, mul(x, y))
        return acc

    # coefficients of the characteristic polynomial of the leading k x k block
    poly = [R.one, neg(a[0][0])]
    for k in range(1, n):
        row = a[k][:k]
        col = [a[i][k] for i in range(k)]
        sub = [a[i][:k] for i in range(k)]
        # toeplitz column: 1, -a_kk, -R C, -R A C, ..., -R A^(k-1) C
        t = [R.one, neg(a[k][k])]
        v = col
        for _ in range(k):
            t.append(neg(dot(row, v)))
            v = [dot(sub[i], v) for i in range(k)]
        new = []
        for i in range(k + 2):
            acc = zero
            for j in range(min(i, k) + 1):
                acc = add(acc, mul(t[i - j], poly[j]))
            new.append(acc)
        poly = new
    return poly[n] if n % 2 == 0 else neg(poly[n])


def is_invertible(A: Matrix) -> bool:
    return A.is_square and A.ring.is_unit(det(A).value)


def inverse(A: Matrix) -> Matrix:
    """Gauss-Jordan elimination with unit pivots.

    Over a local ring an invertible matrix always has a unit in each pivot
    column (its image over the residue field is invertible), so the search
    for a unit pivot fails exactly when ``A`` is singular.
    """
    if not A.is_square:
        raise DimensionError(f"inverse of non-square {A.shape} matrix")
    R = A.ring
    n = A.n_rows
    one, zero = R.one, R.zero
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A.rows)]
    for c in range(n):
        piv = next((i for i in range(c, n) if R.is_unit(aug[i][c])), None)
        if piv is None:
            raise NotInvertibleError("matrix is not invertible over " + R.spec)
        aug[c], aug[piv] = aug[piv], aug[c]
        pinv = R.inv(aug[c][c])
        aug[c] = [R.mul(pinv, x) for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != zero:
                f = aug[i][c]
                aug[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(aug[i], aug[c])]
    return Matrix(R, tuple(tuple(row[n:]) for row in aug))


def direct_sum(A: Matrix, B: Matrix) -> Matrix:
    """Block-diagonal ``A (+) B``."""
    _check_ring(A, B)
    R = A.ring
    za = (R.zero,) * B.n_cols
    zb = (R.zero,) * A.n_cols
    rows = tuple(row + za for row in A.rows) + tuple(zb + row for row in B.rows)
    return Matrix(R, rows)


def block_diag(ring: RingContext, blocks: Sequence[Matrix]) -> Matrix:
    out = Matrix(ring, ())
    for b in blocks:
        out = direct_sum(out, b)
    return out


def congruence_apply(P: Matrix, S: Matrix) -> Matrix:
    """``P S P^T``."""
    if not (P.is_square and S.is_square and P.n_rows == S.n_rows):
        raise DimensionError(f"congruence of {S.shape} by {P.shape}")
    return mat_mul(mat_mul(P, S), transpose(P))


def permutation(ring: RingContext, order: Sequence[int]) -> Matrix:
    """Matrix whose row ``k`` is the unit vector ``e_{order[k]}``: ``(P S P^T)[k, l] = S[order[k], order[l]]``."""
    n = len(order)
    one, zero = ring.one, ring.zero
    return Matrix(ring, tuple(tuple(one if j == order[k] else zero for j in range(n)) for k in range(n)))


def random_invertible(ring: RingContext, n: int, rng, steps: int | None = None) -> Matrix:
    """Product of random elementary matrices (transvections, swaps, unit scalings)."""
    R = ring
    elements = list(R.elements())
    units = [u for u in elements if R.is_unit(u)]
    E = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]
    for _ in range(steps if steps is not None else 2 * n * n + 2):
        kind = rng.randrange(3)
        if kind == 0 and n > 1:
            i, j = rng.sample(range(n), 2)
            c = rng.choice(elements)
            E[i] = [R.add(x, R.mul(c, y)) for x, y in zip(E[i], E[j])]
        elif kind == 1 and n > 1:
            i, j = rng.sample(range(n), 2)
            E[i], E[j] = E[j], E[i]
        else:
            i = rng.randrange(n)
            c = rng.choice(units)
            E[i] = [R.mul(c, x) for x in E[i]]
    return Matrix(R, tuple(map(tuple, E)))


def random_symmetric_invertible(ring: RingContext, n: int, rng) -> Matrix:
    """``E D E^T`` with ``D`` a random unit diagonal and ``E`` a random elementary product."""
    units = [u for u in ring.elements() if ring.is_unit(u)]
    D = Matrix.diagonal(ring, [rng.choice(units) for _ in range(n)])
    return congruence_apply(random_invertible(ring, n, rng), D)
