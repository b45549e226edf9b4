"""Exact integer lattices: Smith/Hermite normal forms, q-ary bases, coset indexing.

Bases are square integer matrices whose *columns* generate the lattice.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

import numpy as np

from .bits import bits_for
from .builder import Builder, msb_first
from .circuit import Circuit
from .errors import MalformedError, ShapeError, SingularMatrixError
from .zqlin import ZqMatrix

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if len({len(r) for r in m}) > 1:
        raise ShapeError("ragged matrix")
    return m


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * int(y) for x, y in zip(r, v)) for r in a)


def transpose(a: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(zip(*a)) if a else ()


def det_exact(m: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ShapeError("determinant needs a square matrix")
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_fraction(m: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [r[n:] for r in a]


def adjugate(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, int]:
    """Integer matrix ``adj`` and ``det`` with ``m @ adj = det * I``."""
    det = det_exact(m)
    if det == 0:
        raise SingularMatrixError("matrix is singular")
    inv = inverse_fraction(m)
    adj = tuple(tuple(int(x * det) for x in r) for r in inv)
    return adj, det


def lattice_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...] | None:
    """Integer ``z`` with ``basis @ z = v``, or None when ``v`` is not in the lattice."""
    adj, det = adjugate(basis)
    num = matvec(adj, v)
    if any(x % det for x in num):
        return None
    return tuple(x // det for x in num)


def in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    return lattice_coordinates(basis, v) is not None


# -- Smith normal form -------------------------------------------------------


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ D @ V == M`` with ``d[i+1] | d[i]``; ``U_inverse`` is carried along."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inverse: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    def to_dict(self) -> dict:
        return {"U": [list(r) for r in self.U], "D": [list(r) for r in self.D], "V": [list(r) for r in self.V]}


class _Tracked:
    """Matrix under elementary operations, tracking ``orig = U @ M @ V``."""

    def __init__(self, m: Sequence[Sequence[int]]):
        self.m = [list(map(int, r)) for r in m]
        self.rows = len(self.m)
        self.cols = len(self.m[0]) if self.m else 0
        self.u = [list(r) for r in identity(self.rows)]
        self.uinv = [list(r) for r in identity(self.rows)]
        self.v = [list(r) for r in identity(self.cols)]

    def row_add(self, i: int, j: int, f: int) -> None:
        m, ui, u = self.m, self.uinv, self.u
        m[i] = [x + f * y for x, y in zip(m[i], m[j])]
        ui[i] = [x + f * y for x, y in zip(ui[i], ui[j])]
        for r in u:
            r[j] -= f * r[i]

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        self.m[i], self.m[j] = self.m[j], self.m[i]
        self.uinv[i], self.uinv[j] = self.uinv[j], self.uinv[i]
        for r in self.u:
            r[i], r[j] = r[j], r[i]

    def row_neg(self, i: int) -> None:
        self.m[i] = [-x for x in self.m[i]]
        self.uinv[i] = [-x for x in self.uinv[i]]
        for r in self.u:
            r[i] = -r[i]

    def col_add(self, j: int, i: int, f: int) -> None:
        for r in self.m:
            r[j] += f * r[i]
        v = self.v
        v[i] = [x - f * y for x, y in zip(v[i], v[j])]

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for r in self.m:
            r[i], r[j] = r[j], r[i]
        self.v[i], self.v[j] = self.v[j], self.v[i]


def snf(m: Sequence[Sequence[int]]) -> SnfDecomposition:
    """Smith normal form of a square integer matrix, largest invariant factor first."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ShapeError("snf expects a square matrix")
    t = _Tracked(m)
    a = t.m
    for s in range(n):
        while True:
            best = None
            for i in range(s, n):
                for j in range(s, n):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            t.row_swap(s, best[0])
            t.col_swap(s, best[1])
            p = a[s][s]
            clean = True
            for i in range(s + 1, n):
                f = a[i][s] // p
                if f:
                    t.row_add(i, s, -f)
                clean &= a[i][s] == 0
            for j in range(s + 1, n):
                f = a[s][j] // p
                if f:
                    t.col_add(j, s, -f)
                clean &= a[s][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, n) for j in range(s + 1, n) if a[i][j] % p), None
            )
            if bad is None:
                break
            t.row_add(s, bad, 1)
        if a[s][s] < 0:
            t.row_neg(s)
    rev = list(range(n - 1, -1, -1))
    D = tuple(tuple(a[rev[i]][rev[j]] for j in range(n)) for i in range(n))
    U = tuple(tuple(r[c] for c in rev) for r in t.u)
    V = tuple(tuple(t.v[r]) for r in rev)
    U_inverse = tuple(tuple(t.uinv[r]) for r in rev)
    return SnfDecomposition(U, D, V, U_inverse)


# -- Hermite normal form and kernels -------------------------------------------


def _column_echelon(m: Sequence[Sequence[int]], track: bool = False):
    """Unimodular column reduction ``m @ T = H``, H lower echelon with reduced rows.

    Returns ``(H, T, pivots)``; columns ``pivots..`` of H are zero, so the same
    columns of T span the integer kernel of ``m``.
    """
    h = [list(map(int, r)) for r in m]
    rows = len(h)
    cols = len(h[0]) if h else 0
    tm = [list(r) for r in identity(cols)] if track else None

    def col_add(j: int, i: int, f: int) -> None:
        for r in h:
            r[j] += f * r[i]
        if tm is not None:
            for r in tm:
                r[j] += f * r[i]

    def col_swap(i: int, j: int) -> None:
        if i != j:
            for r in h:
                r[i], r[j] = r[j], r[i]
            if tm is not None:
                for r in tm:
                    r[i], r[j] = r[j], r[i]

    def col_neg(i: int) -> None:
        for r in h:
            r[i] = -r[i]
        if tm is not None:
            for r in tm:
                r[i] = -r[i]

    piv = 0
    for i in range(rows):
        if piv >= cols:
            break
        while True:
            nz = [j for j in range(piv, cols) if h[i][j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(h[i][j]))
            col_swap(piv, j0)
            p = h[i][piv]
            done = True
            for j in range(piv + 1, cols):
                if h[i][j]:
                    col_add(j, piv, -(h[i][j] // p))
                    done &= h[i][j] == 0
            if done:
                break
        if h[i][piv] == 0:
            continue
        if h[i][piv] < 0:
            col_neg(piv)
        p = h[i][piv]
        for j in range(piv):
            f = h[i][j] // p
            if f:
                col_add(j, piv, -f)
        piv += 1
    return h, tm, piv


def hnf(generators: Sequence[Sequence[int]]) -> IntMatrix:
    """Canonical lower-triangular basis of the lattice spanned by the columns."""
    rows = len(generators)
    h, _, piv = _column_echelon(generators)
    if piv < rows:
        raise SingularMatrixError("generators do not span a full-rank lattice")
    return tuple(tuple(r[:rows]) for r in h)


def integer_kernel(m: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
    """Columns spanning ``{x in Z^c : m x = 0}``."""
    c = cols if cols is not None else (len(m[0]) if m else 0)
    if not m:
        return identity(c)
    _, tm, piv = _column_echelon(m, track=True)
    return tuple(tuple(r[piv:]) for r in tm)


def qary_basis(a: ZqMatrix) -> IntMatrix:
    """Basis of ``{x in Z^m : A x = 0 (mod q)}``.

    The kernel of ``[A | -q I]`` projects bijectively onto that lattice; its
    projection, together with ``q I_m``, is brought to Hermite form.
    """
    n, m, q = a.rows, a.cols, a.q
    if n == 0:
        return identity(m)
    stacked = [list(row) + [-q if i == j else 0 for j in range(n)] for i, row in enumerate(a.entries)]
    ker = integer_kernel(stacked, m + n)
    gens = [list(ker[i]) + [q if i == j else 0 for j in range(m)] for i in range(m)]
    return hnf(gens)


# -- parallelepiped and cosets ------------------------------------------------


def parallelepiped_points(basis: Sequence[Sequence[int]]) -> np.ndarray:
    """All integer points of ``basis @ [0,1)^n``, as rows."""
    n = len(basis)
    adj, det = adjugate(basis)
    lo = [sum(min(0, x) for x in r) for r in basis]
    hi = [sum(max(0, x) for x in r) for r in basis]
    grids = np.meshgrid(*[np.arange(l, h + 1, dtype=np.int64) for l, h in zip(lo, hi)], indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1) if n else np.zeros((1, 0), dtype=np.int64)
    t = pts @ np.array(adj, dtype=np.int64).T
    if det > 0:
        ok = np.all((t >= 0) & (t < det), axis=1)
    else:
        ok = np.all((t <= 0) & (t > det), axis=1)
    return pts[ok]


@dataclass(frozen=True)
class CosetIndexer:
    basis: IntMatrix
    decomposition: SnfDecomposition
    U_inverse: IntMatrix
    radices: tuple[int, ...]

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence[int]]) -> "CosetIndexer":
        b = as_matrix(basis)
        if det_exact(b) == 0:
            raise SingularMatrixError("basis is singular")
        dec = snf(b)
        return cls(b, dec, dec.U_inverse, dec.diagonal)

    @property
    def det(self) -> int:
        return prod(self.radices)

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        w = matvec(self.U_inverse, x)
        return tuple(v % d for v, d in zip(w, self.radices))

    def index(self, x: Sequence[int]) -> int:
        if len(x) != len(self.radices):
            raise ShapeError("vector dimension does not match the basis")
        idx = 0
        for c, d in zip(self.coordinates(x), self.radices):
            idx = idx * d + c
        return idx

    def index_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`index` over rows of an int64 array."""
        w = np.asarray(xs, dtype=object) @ np.array(self.U_inverse, dtype=object).T
        idx = np.zeros(len(w), dtype=object)
        for col, d in enumerate(self.radices):
            idx = idx * d + (w[:, col] % d)
        return idx.astype(np.int64)


def coset_index(ix: CosetIndexer, x: Sequence[int]) -> int:
    return ix.index(x)


def iroot(x: int, n: int) -> int:
    """``floor(x ** (1/n))`` exactly."""
    if x < 0 or n < 1:
        raise ValueError("need x >= 0 and n >= 1")
    if x < 2:
        return x
    lo, hi = 1, 1 << ((x.bit_length() + n - 1) // n)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**n <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


def iroot_many(xs: np.ndarray, n: int) -> np.ndarray:
    """Exact ``floor(x ** (1/n))`` for nonnegative int64 values with ``2^n * x < 2^62``."""
    xs = np.asarray(xs, dtype=np.int64)
    r = np.floor(np.power(xs.astype(np.float64), 1.0 / n)).astype(np.int64)
    while True:
        up = (r + 1) ** n <= xs
        down = r**n > xs
        if not (up.any() or down.any()):
            return r
        r = r + up - down


def basis_to_dict(basis: Sequence[Sequence[int]]) -> dict:
    return {"n": len(basis), "entries": [int(x) for r in basis for x in r]}


def basis_from_dict(data: dict) -> IntMatrix:
    try:
        n = int(data["n"])
        flat = [int(x) for x in data["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedError(f"malformed basis: {exc}") from exc
    if len(flat) != n * n:
        raise MalformedError("basis entry count is not n*n")
    return tuple(tuple(flat[i * n : (i + 1) * n]) for i in range(n))


# -- cube sets ---------------------------------------------------------------


def box_width(bounds: Sequence[int]) -> int:
    return max(1, max(bounds, default=0).bit_length())


def box_size(bounds: Sequence[int]) -> int:
    return prod(L + 1 for L in bounds)


def box_unrank(b: Builder, word: Sequence[int], bounds: Sequence[int], width: int) -> list[list[int]]:
    """Digits of ``word`` in the mixed radix ``(L_i + 1)``; the first coordinate is the most significant."""
    coords: list[list[int]] = [[] for _ in bounds]
    rest = list(word)
    for i in range(len(bounds) - 1, 0, -1):
        radix = bounds[i] + 1
        if radix == 1:
            coords[i] = []
            continue
        rest, digit = b.divmod_const(rest, radix)
        coords[i] = digit
    if bounds:
        coords[0] = rest if bounds[0] else []
    return [b.pad(c, width) for c in coords]


def cube_value_circuit(bounds: Sequence[int]) -> Circuit:
    """k-th point of ``[0,L_1] x ... x [0,L_n]`` in lexicographic order."""
    width = box_width(bounds)
    m = bits_for(box_size(bounds))
    b = Builder(m)
    coords = box_unrank(b, b.input_word(0, m), bounds, width)
    return b.build([w for c in coords for w in msb_first(c)])


def cube_index_circuit(bounds: Sequence[int]) -> Circuit:
    """Lexicographic rank of a point of the box."""
    width = box_width(bounds)
    out = bits_for(box_size(bounds))
    b = Builder(len(bounds) * width)
    acc: list[int] = []
    for i, L in enumerate(bounds):
        digit = b.input_word(i * width, width) if L else []
        acc = b.trim(b.add(b.mul_const(acc, L + 1), digit))[:out]
    return b.build(msb_first(b.pad(acc, out)))


def cube_characteristic_circuit(bounds: Sequence[int]) -> Circuit:
    """Single output: the point lies in the box."""
    width = box_width(bounds)
    b = Builder(len(bounds) * width)
    inside = [b.not_(b.ge_const(b.input_word(i * width, width), L + 1)) for i, L in enumerate(bounds)]
    return b.build([b.all_(inside)])


def box_points(bounds: Sequence[int]) -> list[tuple[int, ...]]:
    return list(itertools.product(*[range(L + 1) for L in bounds]))


__all__ = [
    "IntMatrix",
    "SnfDecomposition",
    "CosetIndexer",
    "snf",
    "hnf",
    "det_exact",
    "qary_basis",
    "coset_index",
    "in_lattice",
    "lattice_coordinates",
    "parallelepiped_points",
    "iroot",
    "iroot_many",
    "cube_value_circuit",
    "cube_index_circuit",
    "cube_characteristic_circuit",
]
