"""Shrinking hash family keyed by a uniform matrix A and a binary invertible G.

For input ``x`` the key completes ``x`` to ``[u; x]`` with ``G [u; x] = 0 (mod q)``
(the completion is unique when ``q = 2**ell``) and outputs the bits of
``A [u; x] mod q``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bits import bd
from .errors import InputArityError, MalformedError, NotACollisionError, OracleTooLargeError, ParameterError
from .zqlin import (
    BinaryInvertible,
    GadgetShape,
    ZqMatrix,
    backsolve,
    backsolve_batch,
    matvec_mod,
    sample_binary_invertible,
)


@dataclass(frozen=True)
class HashParams:
    k: int
    ell: int
    d: int
    r: int

    def __post_init__(self) -> None:
        if self.ell < 2:
            raise ParameterError("ell must be at least 2")
        if min(self.k, self.d, self.r) < 1:
            raise ParameterError("k, d and r must be positive")
        if self.r * self.ell >= self.k:
            raise ParameterError(f"output width {self.r * self.ell} does not shrink input width {self.k}")

    @property
    def q(self) -> int:
        return 1 << self.ell

    @property
    def columns(self) -> int:
        return self.k + self.ell * self.d

    @property
    def output_bits(self) -> int:
        return self.r * self.ell

    def to_dict(self) -> dict:
        return {"k": self.k, "ell": self.ell, "d": self.d, "r": self.r}


@dataclass(frozen=True)
class HashKey:
    params: HashParams
    A: ZqMatrix
    G: BinaryInvertible

    def __post_init__(self) -> None:
        p = self.params
        if self.A.q != p.q or self.G.q != p.q:
            raise ParameterError("key matrices must be over Z_{2^ell}")
        if (self.A.rows, self.A.cols) != (p.r, p.columns):
            raise ParameterError("A has the wrong shape")
        if self.G.shape != GadgetShape(p.d, p.ell, p.k):
            raise ParameterError("G has the wrong gadget shape")

    @property
    def input_bits(self) -> int:
        return self.params.k

    @property
    def output_bits(self) -> int:
        return self.params.output_bits

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return evaluate(self, x)

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "A": self.A.to_dict(), "G": self.G.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "HashKey":
        try:
            p = data["params"]
            params = HashParams(int(p["k"]), int(p["ell"]), int(p["d"]), int(p["r"]))
            return cls(params, ZqMatrix.from_dict(data["A"]), BinaryInvertible.from_dict(data["G"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedError(f"malformed hash key: {exc}") from exc


@dataclass(frozen=True)
class SisWitness:
    z: tuple[int, ...]


def keygen(params: HashParams, seed: int) -> HashKey:
    rng = np.random.default_rng(seed)
    q = params.q
    a = rng.integers(0, q, size=(params.r, params.columns))
    A = ZqMatrix(q, tuple(tuple(int(v) for v in row) for row in a))
    G = sample_binary_invertible(GadgetShape(params.d, params.ell, params.k), q, rng)
    return HashKey(params, A, G)


def completion(key: HashKey, x: Sequence[int]) -> tuple[int, ...]:
    """The binary ``u`` with ``G [u; x] = 0``."""
    if len(x) != key.params.k:
        raise InputArityError(f"expected {key.params.k} input bits, got {len(x)}")
    if any(b not in (0, 1) for b in x):
        raise InputArityError("hash inputs must be bits")
    return backsolve(key.G, tuple(x), (0,) * key.params.d)


def evaluate(key: HashKey, x: Sequence[int]) -> tuple[int, ...]:
    u = completion(key, x)
    y = matvec_mod(key.A, u + tuple(x))
    ell = key.params.ell
    return tuple(b for v in y for b in bd(v, ell))


def evaluate_batch(key: HashKey, xs: np.ndarray) -> np.ndarray:
    """Digests ``bc(H(x))`` for every row of an (N, k) bit array."""
    xs = np.asarray(xs, dtype=np.int64).reshape(-1, key.params.k)
    u = backsolve_batch(key.G, xs, (0,) * key.params.d)
    full = np.concatenate([u, xs], axis=1)
    y = (full @ key.A.to_numpy().T) % key.params.q
    out = np.zeros(len(xs), dtype=np.int64)
    for col in range(y.shape[1]):
        out = (out << key.params.ell) | y[:, col]
    return out


def all_inputs(width: int) -> np.ndarray:
    """Every ``width``-bit vector, row ``i`` equal to ``bd(i)``."""
    idx = np.arange(1 << width, dtype=np.int64)
    return ((idx[:, None] >> np.arange(width - 1, -1, -1)) & 1).astype(np.int64)


def extract_sis_witness(key: HashKey, x1: Sequence[int], x2: Sequence[int]) -> SisWitness:
    """Difference of the two completed inputs: a short vector in both kernels."""
    x1, x2 = tuple(int(b) for b in x1), tuple(int(b) for b in x2)
    if x1 == x2:
        raise NotACollisionError("inputs are identical")
    if evaluate(key, x1) != evaluate(key, x2):
        raise NotACollisionError("inputs hash to different values")
    s1 = completion(key, x1) + x1
    s2 = completion(key, x2) + x2
    return SisWitness(tuple(a - b for a, b in zip(s1, s2)))


def check_sis_witness(key: HashKey, w: SisWitness) -> bool:
    z = w.z
    if len(z) != key.params.columns or not any(z) or any(abs(v) > 1 for v in z):
        return False
    return not any(matvec_mod(key.A, z)) and not any(matvec_mod(key.G.matrix, z))


def find_collision(key: HashKey, budget: int = 1 << 22) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """First collision in input order ``0, 1, 2, ...`` (exhaustive)."""
    k = key.params.k
    if (1 << k) > budget:
        raise OracleTooLargeError(f"2^{k} inputs exceed budget {budget}")
    xs = all_inputs(k)
    digests = evaluate_batch(key, xs)
    return _first_repeat(xs, digests)


def _first_repeat(xs: np.ndarray, digests: np.ndarray) -> tuple[tuple[int, ...], tuple[int, ...]]:
    seen: dict[int, int] = {}
    for i, h in enumerate(digests.tolist()):
        j = seen.setdefault(h, i)
        if j != i:
            return tuple(int(v) for v in xs[j]), tuple(int(v) for v in xs[i])
    raise NotACollisionError("no collision among the given inputs")


def birthday_attack(
    key: HashKey, rng: np.random.Generator, max_samples: int = 1 << 20, batch: int = 256
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Random sampling until two distinct inputs share a digest."""
    k = key.params.k
    seen: dict[int, tuple[int, ...]] = {}
    drawn = 0
    while drawn < max_samples:
        xs = rng.integers(0, 2, size=(batch, k))
        for x, h in zip(xs.tolist(), evaluate_batch(key, xs).tolist()):
            x = tuple(x)
            prev = seen.setdefault(h, x)
            if prev != x:
                return prev, x
        drawn += batch
    raise OracleTooLargeError(f"no collision within {max_samples} samples")


@dataclass(frozen=True)
class CombinedHash:
    """Concatenation of member digests over a shared input."""

    members: tuple[HashKey, ...]

    @property
    def input_bits(self) -> int:
        return self.members[0].params.k

    @property
    def output_bits(self) -> int:
        return sum(m.output_bits for m in self.members)

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(b for m in self.members for b in evaluate(m, x))

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        out = np.zeros(len(xs), dtype=np.int64)
        for m in self.members:
            out = (out << m.output_bits) | evaluate_batch(m, xs)
        return out

    def find_collision(self, budget: int = 1 << 22) -> tuple[tuple[int, ...], tuple[int, ...]]:
        k = self.input_bits
        if (1 << k) > budget:
            raise OracleTooLargeError(f"2^{k} inputs exceed budget {budget}")
        xs = all_inputs(k)
        return _first_repeat(xs, self.evaluate_batch(xs))


def combine(keys: Sequence[HashKey]) -> CombinedHash:
    if not keys:
        raise ParameterError("need at least one member")
    widths = {k.params.k for k in keys}
    if len(widths) != 1:
        raise ParameterError("members must share an input width")
    c = CombinedHash(tuple(keys))
    if c.output_bits >= c.input_bits:
        raise ParameterError(f"combined output {c.output_bits} bits does not shrink {c.input_bits}")
    return c


def md_hash(key: HashKey, message: Sequence[int]) -> tuple[int, ...]:
    """Merkle-Damgard chaining with length padding; not used by the reductions."""
    out_bits, k = key.output_bits, key.params.k
    block = k - out_bits
    length = bd(len(message) % (1 << 32), 32)
    padded = list(message) + [1]
    padded += [0] * (-(len(padded) + 32) % block) + list(length)
    state: tuple[int, ...] = (0,) * out_bits
    for i in range(0, len(padded), block):
        state = evaluate(key, state + tuple(padded[i : i + block]))
    return state


def example_key() -> HashKey:
    """A tiny hand-checkable key: ell=2, d=1, r=1, k=3."""
    params = HashParams(k=3, ell=2, d=1, r=1)
    G = BinaryInvertible(ZqMatrix(4, ((1, 2, 0, 1, 2),)), GadgetShape(1, 2, 3))
    return HashKey(params, ZqMatrix(4, ((1, 3, 2, 0, 1),)), G)
