"""Exact linear algebra over Z_q and binary invertible (block gadget) matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bits import bc, bd, lsb_bits
from .errors import MalformedError, ModulusMismatchError, ParameterError, ShapeError

__all__ = [
    "bc",
    "bd",
    "ZqMatrix",
    "ZqVector",
    "GadgetShape",
    "BinaryInvertible",
    "gadget_vector",
    "gadget_matrix",
    "is_binary_invertible",
    "backsolve",
    "backsolve_batch",
    "binary_solutions",
    "sample_binary_invertible",
    "matvec_mod",
]


@dataclass(frozen=True)
class ZqVector:
    q: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ParameterError("modulus must be at least 2")
        object.__setattr__(self, "entries", tuple(int(e) % self.q for e in self.entries))

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ZqMatrix:
    q: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.q < 2:
            raise ParameterError("modulus must be at least 2")
        rows = tuple(tuple(int(e) % self.q for e in row) for row in self.entries)
        if len({len(r) for r in rows}) > 1:
            raise ShapeError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def zeros(cls, rows: int, cols: int, q: int) -> "ZqMatrix":
        return cls(q, tuple((0,) * cols for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.rows, self.cols)

    def hstack(self, other: "ZqMatrix") -> "ZqMatrix":
        if other.q != self.q:
            raise ModulusMismatchError(f"moduli {self.q} and {other.q} differ")
        if other.rows != self.rows:
            raise ShapeError("row counts differ")
        return ZqMatrix(self.q, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other: "ZqMatrix") -> "ZqMatrix":
        if other.q != self.q:
            raise ModulusMismatchError(f"moduli {self.q} and {other.q} differ")
        if self.cols != other.rows:
            raise ShapeError("inner dimensions differ")
        cols = list(zip(*other.entries))
        return ZqMatrix(
            self.q, tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries)
        )

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [e for row in self.entries for e in row],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ZqMatrix":
        try:
            q, rows, cols = int(data["q"]), int(data["rows"]), int(data["cols"])
            flat = [int(e) for e in data["entries"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed matrix: {exc}") from exc
        if len(flat) != rows * cols:
            raise MalformedError("entry count does not match shape")
        if any(not 0 <= e < q for e in flat):
            raise MalformedError("entries must be reduced mod q")
        return cls(q, tuple(tuple(flat[i * cols : (i + 1) * cols]) for i in range(rows)))


def matvec_mod(m: ZqMatrix, v: Sequence[int] | ZqVector) -> tuple[int, ...]:
    """``m @ v mod q``."""
    if isinstance(v, ZqVector):
        if v.q != m.q:
            raise ModulusMismatchError(f"moduli {m.q} and {v.q} differ")
        v = v.entries
    if m.entries and len(v) != m.cols:
        raise ShapeError(f"vector length {len(v)} != {m.cols} columns")
    return tuple(sum(a * int(x) for a, x in zip(row, v)) % m.q for row in m.entries)


@dataclass(frozen=True)
class GadgetShape:
    d: int
    ell: int
    k: int

    def __post_init__(self) -> None:
        if self.ell < 1 or self.d < 0 or self.k < 0:
            raise ParameterError(f"invalid gadget shape {self}")

    @property
    def cols(self) -> int:
        return self.d * self.ell + self.k


def gadget_vector(ell: int, q: int | None = None) -> tuple[int, ...]:
    g = tuple(1 << j for j in range(ell))
    return g if q is None else tuple(x % q for x in g)


def is_binary_invertible(m: ZqMatrix, shape: GadgetShape) -> bool:
    """Structural test: gadget blocks on the diagonal, nothing left of them."""
    if m.rows != shape.d or (m.rows and m.cols != shape.cols):
        raise ShapeError(f"{m.rows}x{m.cols} matrix does not match {shape}")
    ell = shape.ell
    if m.q > 1 << ell:
        return False
    gamma = gadget_vector(ell, m.q)
    for t, row in enumerate(m.entries):
        start = t * ell
        if any(row[:start]):
            return False
        if tuple(row[start : start + ell]) != gamma:
            return False
    return True


@dataclass(frozen=True)
class BinaryInvertible:
    matrix: ZqMatrix
    shape: GadgetShape

    def __post_init__(self) -> None:
        if not is_binary_invertible(self.matrix, self.shape):
            raise ParameterError("matrix is not binary invertible for the given shape")

    @property
    def q(self) -> int:
        return self.matrix.q

    def to_dict(self) -> dict:
        out = self.matrix.to_dict()
        out.update(d=self.shape.d, ell=self.shape.ell, k=self.shape.k)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BinaryInvertible":
        m = ZqMatrix.from_dict(data)
        try:
            shape = GadgetShape(int(data["d"]), int(data["ell"]), int(data["k"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed gadget shape: {exc}") from exc
        if m.rows == 0 and shape.d == 0:
            m = ZqMatrix(m.q, ())
        try:
            return cls(m, shape)
        except (ParameterError, ShapeError) as exc:
            raise MalformedError(str(exc)) from exc


def gadget_matrix(d: int, ell: int, q: int) -> BinaryInvertible:
    """``I_d (x) gamma_ell^T``."""
    gamma = gadget_vector(ell, q)
    rows = []
    for t in range(d):
        row = [0] * (d * ell)
        row[t * ell : (t + 1) * ell] = gamma
        rows.append(tuple(row))
    return BinaryInvertible(ZqMatrix(q, tuple(rows)), GadgetShape(d, ell, 0))


def backsolve(g: BinaryInvertible, r_free: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Binary ``r`` with ``G [r; r_free] = b (mod q)``, solved from the last block up."""
    d, ell, k = g.shape.d, g.shape.ell, g.shape.k
    if len(r_free) != k or len(b) != d:
        raise ShapeError("r_free or b has the wrong length")
    q = g.q
    top = d * ell
    r = [0] * top
    rows = g.matrix.entries
    for t in range(d - 1, -1, -1):
        row = rows[t]
        s = sum(row[j] * r[j] for j in range((t + 1) * ell, top))
        s += sum(row[top + j] * int(x) for j, x in enumerate(r_free))
        r[t * ell : (t + 1) * ell] = lsb_bits((int(b[t]) - s) % q, ell)
    return tuple(r)


def _rows(a, width: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    return a if a.ndim == 2 else a.reshape(-1, width) if width else a.reshape(1, 0)


def backsolve_batch(g: BinaryInvertible, r_free: np.ndarray, b: Sequence[int]) -> np.ndarray:
    """Row-wise :func:`backsolve` over an (N, k) array; returns (N, d*ell) bits."""
    d, ell = g.shape.d, g.shape.ell
    q = g.q
    top = d * ell
    gm = g.matrix.to_numpy()
    r_free = _rows(r_free, g.shape.k)
    n = r_free.shape[0]
    r = np.zeros((n, top), dtype=np.int64)
    base = r_free @ gm[:, top:].T if d else np.zeros((n, 0), dtype=np.int64)
    shifts = np.arange(ell, dtype=np.int64)
    for t in range(d - 1, -1, -1):
        s = base[:, t] + r[:, (t + 1) * ell : top] @ gm[t, (t + 1) * ell : top]
        val = (int(b[t]) - s) % q
        r[:, t * ell : (t + 1) * ell] = (val[:, None] >> shifts) & 1
    return r


def binary_solutions(g: BinaryInvertible, b: Sequence[int], r_free: np.ndarray) -> np.ndarray:
    """Every binary ``[r; r_free]`` with ``G x = b`` for the given free rows.

    When ``q = 2**ell`` each free row has exactly one completion; for smaller q
    a block may admit several bit patterns congruent to the same residue, and
    all of them are produced. Rows are ordered by free row, then by the
    residue representatives chosen from the last block upward.
    """
    d, ell, k = g.shape.d, g.shape.ell, g.shape.k
    q = g.q
    top = d * ell
    gm = g.matrix.to_numpy()
    free = _rows(r_free, k)
    if q == 1 << ell:
        return np.concatenate([backsolve_batch(g, free, b), free], axis=1)
    x = np.concatenate([np.zeros((free.shape[0], top), dtype=np.int64), free], axis=1)
    order = np.arange(free.shape[0], dtype=np.int64)[:, None]
    shifts = np.arange(ell, dtype=np.int64)
    for t in range(d - 1, -1, -1):
        s = x[:, (t + 1) * ell :] @ gm[t, (t + 1) * ell :]
        val = (int(b[t]) - s) % q
        parts, keys = [], []
        for j in range(((1 << ell) - 1) // q + 1):
            rep = val + j * q
            ok = rep < (1 << ell)
            if not ok.any():
                continue
            block = x[ok].copy()
            block[:, t * ell : (t + 1) * ell] = (rep[ok][:, None] >> shifts) & 1
            parts.append(block)
            keys.append(np.concatenate([order[ok], np.full((int(ok.sum()), 1), j)], axis=1))
        x = np.concatenate(parts, axis=0)
        key = np.concatenate(keys, axis=0)
        perm = np.lexsort(key.T[::-1])
        x, order = x[perm], key[perm]
    return x


def sample_binary_invertible(shape: GadgetShape, q: int, rng: np.random.Generator) -> BinaryInvertible:
    """Uniform free entries right of each gadget block; uniform V part."""
    if q > 1 << shape.ell:
        raise ParameterError(f"q = {q} exceeds 2^{shape.ell}")
    gamma = gadget_vector(shape.ell, q)
    rows = []
    for t in range(shape.d):
        row = [0] * shape.cols
        start = t * shape.ell
        row[start : start + shape.ell] = gamma
        tail = start + shape.ell
        row[tail:] = [int(v) for v in rng.integers(0, q, size=shape.cols - tail)]
        rows.append(tuple(row))
    return BinaryInvertible(ZqMatrix(q, tuple(rows)), shape)


def solution_count_bound(g: BinaryInvertible) -> int:
    """Upper bound on completions per free vector."""
    per_block = ((1 << g.shape.ell) - 1) // g.q + 1
    return per_block ** g.shape.d
