"""Sparse multivariate polynomials over F_p and polynomial maps.

Terms are stored as a dict mapping exponent tuples to nonzero coefficients.
The canonical term order everywhere (iteration, serialization, solver column
order) is graded lexicographic: total degree ascending, then lexicographic on
exponent vectors with the first variable largest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .field import PrimeField

# Degree of the zero polynomial. A sentinel strictly below every integer, so
# degree-bound assertions like deg(q) <= D hold vacuously for zero.
NEG_INF = float("-inf")

# Pairwise term products above this count take the packed numpy path.
_NUMPY_MUL_THRESHOLD = 50_000


def grlex_key(exponents: Sequence[int]):
    """Sort key realizing graded lex order (x1 > x2 > ...)."""
    return (sum(exponents), tuple(-e for e in exponents))


class MultiPoly:
    """Immutable sparse polynomial in ``nvars`` variables over a prime field."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: PrimeField, nvars: int, terms: Mapping[tuple, int] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        clean: dict[tuple, int] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"exponent vector {exps} has length != nvars={nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = coeff % field.p
            if c:
                clean[exps] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: PrimeField, nvars: int) -> "MultiPoly":
        return cls(field, nvars, {})

    @classmethod
    def constant(cls, field: PrimeField, nvars: int, c: int) -> "MultiPoly":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field: PrimeField, nvars: int, index: int) -> "MultiPoly":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        e = [0] * nvars
        e[index] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, field: PrimeField, exponents: Sequence[int], coeff: int = 1) -> "MultiPoly":
        return cls(field, len(exponents), {tuple(exponents): coeff})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree; NEG_INF for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return [(e, self.terms[e]) for e in sorted(self.terms, key=grlex_key)]

    def __eq__(self, other):
        return (
            isinstance(other, MultiPoly)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "MultiPoly"):
        if self.field != other.field:
            raise ValueError("mixed fields")
        if self.nvars != other.nvars:
            raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if isinstance(other, int):
            other = MultiPoly.constant(self.field, self.nvars, other)
        self._check_compatible(other)
        p = self.field.p
        big, small = (self.terms, other.terms) if len(self.terms) >= len(other.terms) else (other.terms, self.terms)
        out = dict(big)
        for e, c in small.items():
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return MultiPoly(self.field, self.nvars, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -other)

    def __mul__(self, other):
        if isinstance(other, int):
            c = other % self.field.p
            if c == 0:
                return MultiPoly.zero(self.field, self.nvars)
            p = self.field.p
            return MultiPoly(self.field, self.nvars, {e: v * c % p for e, v in self.terms.items()})
        self._check_compatible(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.field, self.nvars)
        if len(self.terms) * len(other.terms) >= _NUMPY_MUL_THRESHOLD:
            packed = _mul_packed(self, other)
            if packed is not None:
                return packed
        p = self.field.p
        out: dict[tuple, int] = {}
        a_items = list(self.terms.items())
        b_items = list(other.terms.items())
        for ea, ca in a_items:
            for eb, cb in b_items:
                e = tuple(x + y for x, y in zip(ea, eb))
                s = (out.get(e, 0) + ca * cb) % p
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.field, self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    # -- evaluation and substitution ---------------------------------------

    def evaluate(self, point: Sequence[int]) -> int:
        """Exact evaluation at a point of F_p^nvars."""
        if len(point) != self.nvars:
            raise ValueError(f"arity mismatch: point of length {len(point)}, nvars={self.nvars}")
        p = self.field.p
        point = [v % p for v in point]
        # per-variable power cache up to the max exponent seen
        max_exp = [0] * self.nvars
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei > max_exp[i]:
                    max_exp[i] = ei
        pows = []
        for i in range(self.nvars):
            row = [1] * (max_exp[i] + 1)
            for j in range(1, max_exp[i] + 1):
                row[j] = row[j - 1] * point[i] % p
            pows.append(row)
        total = 0
        for e, c in self.terms.items():
            v = c
            for i, ei in enumerate(e):
                if ei:
                    v = v * pows[i][ei] % p
            total = (total + v) % p
        return total

    def substitute(self, index: int, value: int) -> "MultiPoly":
        """Fix one variable to a field element; arity is preserved."""
        if not 0 <= index < self.nvars:
            raise ValueError("variable index out of range")
        p = self.field.p
        value %= p
        out: dict[tuple, int] = {}
        for e, c in self.terms.items():
            ei = e[index]
            if ei:
                c = c * pow(value, ei, p) % p
                if not c:
                    continue
                e = e[:index] + (0,) + e[index + 1 :]
            s = (out.get(e, 0) + c) % p
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly(self.field, self.nvars, out)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "p": self.field.p,
            "nvars": self.nvars,
            "terms": [{"e": list(e), "c": c} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "MultiPoly":
        field = PrimeField(doc["p"])
        return cls(field, doc["nvars"], {tuple(t["e"]): t["c"] for t in doc["terms"]})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [f"x{i + 1}^{ei}" if ei > 1 else f"x{i + 1}" for i, ei in enumerate(e) if ei]
            parts.append("*".join([str(c)] + factors) if factors else str(c))
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.field}, nvars={self.nvars}, {len(self.terms)} terms)"


def _mul_packed(a: MultiPoly, b: MultiPoly) -> MultiPoly | None:
    """Large-product fast path: pack exponent vectors into uint64 keys.

    Returns None when the packing does not fit (caller falls back to dicts).
    Arithmetic stays exact: coefficients are int64 residues and accumulated
    sums are bounded by len(a)*len(b)*p^2 checks below.
    """
    nvars = a.nvars
    p = a.field.p
    if nvars == 0:
        return None
    amax = [0] * nvars
    bmax = [0] * nvars
    for e in a.terms:
        for i, ei in enumerate(e):
            if ei > amax[i]:
                amax[i] = ei
    for e in b.terms:
        for i, ei in enumerate(e):
            if ei > bmax[i]:
                bmax[i] = ei
    bits = [max(1, (x + y).bit_length()) for x, y in zip(amax, bmax)]
    if sum(bits) > 64:
        return None
    if p * p * len(a.terms) >= 2**62:  # keep np.add.at sums inside int64
        return None
    shifts = np.cumsum([0] + bits[:-1]).astype(np.uint64)

    def pack(terms):
        keys = np.array(list(terms.keys()), dtype=np.uint64)
        vals = np.array(list(terms.values()), dtype=np.int64)
        packed = np.zeros(len(terms), dtype=np.uint64)
        for i in range(nvars):
            packed |= keys[:, i] << shifts[i]
        return packed, vals

    ka, va = pack(a.terms)
    kb, vb = pack(b.terms)
    keys = (ka[:, None] + kb[None, :]).ravel()
    vals = (va[:, None] * vb[None, :] % p).ravel()
    uniq, inverse = np.unique(keys, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(acc, inverse, vals)
    acc %= p
    masks = [(1 << w) - 1 for w in bits]
    out: dict[tuple, int] = {}
    uniq_py = uniq.tolist()
    for key, c in zip(uniq_py, acc.tolist()):
        if not c:
            continue
        e = tuple((key >> int(shifts[i])) & masks[i] for i in range(nvars))
        out[e] = c
    return MultiPoly(a.field, nvars, out)


def packed_weighted_sum(pairs: Sequence[tuple["MultiPoly", "MultiPoly"]], field: PrimeField, nvars: int) -> "MultiPoly":
    """Sum of products a_t * b_t computed in one aggregation pass.

    Used by dynamic programs that accumulate many polynomial products into
    one value; a single sort/aggregate beats repeated multiply-then-add.
    Falls back to plain arithmetic when exponents do not pack into 64 bits.
    """
    pairs = [(a, b) for a, b in pairs if a.terms and b.terms]
    if not pairs:
        return MultiPoly.zero(field, nvars)
    p = field.p
    bound = [0] * nvars
    total_rows = 0
    for a, b in pairs:
        amax = [0] * nvars
        bmax = [0] * nvars
        for e in a.terms:
            for i, ei in enumerate(e):
                if ei > amax[i]:
                    amax[i] = ei
        for e in b.terms:
            for i, ei in enumerate(e):
                if ei > bmax[i]:
                    bmax[i] = ei
        for i in range(nvars):
            if amax[i] + bmax[i] > bound[i]:
                bound[i] = amax[i] + bmax[i]
        total_rows += len(a.terms) * len(b.terms)
    bits = [max(1, x.bit_length()) for x in bound]
    small = total_rows < _NUMPY_MUL_THRESHOLD
    if small or sum(bits) > 64 or p * p * total_rows >= 2**62:
        acc = MultiPoly.zero(field, nvars)
        for a, b in pairs:
            acc = acc + a * b
        return acc
    shifts = np.cumsum([0] + bits[:-1]).astype(np.uint64)

    def pack(terms):
        keys = np.array(list(terms.keys()), dtype=np.uint64)
        packed = np.zeros(len(terms), dtype=np.uint64)
        for i in range(nvars):
            packed |= keys[:, i] << shifts[i]
        return packed, np.array(list(terms.values()), dtype=np.int64)

    key_chunks = []
    val_chunks = []
    for a, b in pairs:
        ka, va = pack(a.terms)
        kb, vb = pack(b.terms)
        key_chunks.append((ka[:, None] + kb[None, :]).ravel())
        val_chunks.append((va[:, None] * vb[None, :] % p).ravel())
    keys = np.concatenate(key_chunks)
    vals = np.concatenate(val_chunks)
    uniq, inverse = np.unique(keys, return_inverse=True)
    acc = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(acc, inverse, vals)
    acc %= p
    masks = [(1 << w) - 1 for w in bits]
    shift_list = [int(s) for s in shifts]
    out: dict[tuple, int] = {}
    for key, c in zip(uniq.tolist(), acc.tolist()):
        if c:
            out[tuple((key >> shift_list[i]) & masks[i] for i in range(nvars))] = c
    return MultiPoly(field, nvars, out)


@dataclass(frozen=True)
class PolyMap:
    """An ordered tuple of polynomials sharing one input arity."""

    field: PrimeField
    in_arity: int
    coordinates: tuple
    label: str = ""

    def __post_init__(self):
        for q in self.coordinates:
            if q.nvars != self.in_arity:
                raise ValueError(f"coordinate arity {q.nvars} != in_arity {self.in_arity}")
            if q.field != self.field:
                raise ValueError("coordinate over wrong field")
        object.__setattr__(self, "coordinates", tuple(self.coordinates))

    @property
    def out_arity(self) -> int:
        return len(self.coordinates)

    def degree(self):
        degs = [q.degree() for q in self.coordinates]
        return max(degs) if degs else NEG_INF

    def evaluate(self, point: Sequence[int]) -> list[int]:
        return [q.evaluate(point) for q in self.coordinates]

    def to_json_dict(self) -> dict:
        return {
            "p": self.field.p,
            "m": self.in_arity,
            "N": self.out_arity,
            "label": self.label,
            "coords": [q.to_json_dict() for q in self.coordinates],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "PolyMap":
        field = PrimeField(doc["p"])
        coords = tuple(MultiPoly.from_json_dict(c) for c in doc["coords"])
        pmap = cls(field, doc["m"], coords, doc.get("label", ""))
        if pmap.out_arity != doc["N"]:
            raise ValueError("inconsistent coordinate count in serialized map")
        return pmap


def poly_eval(q: MultiPoly, point: Sequence[int]) -> int:
    return q.evaluate(point)


def poly_compose(q: MultiPoly, pmap: PolyMap) -> MultiPoly:
    """Exact symbolic composition q(P_1, ..., P_N)."""
    if q.nvars != pmap.out_arity:
        raise ValueError(f"arity mismatch: q has {q.nvars} variables, map has {pmap.out_arity} outputs")
    field = pmap.field
    if q.field != field:
        raise ValueError("mixed fields")
    m = pmap.in_arity
    result = MultiPoly.zero(field, m)
    pow_cache: list[dict[int, MultiPoly]] = [
        {0: MultiPoly.constant(field, m, 1)} for _ in range(pmap.out_arity)
    ]

    def coord_pow(i: int, e: int) -> MultiPoly:
        cache = pow_cache[i]
        if e not in cache:
            best = max(k for k in cache if k <= e)
            acc = cache[best]
            for k in range(best + 1, e + 1):
                acc = acc * pmap.coordinates[i]
                cache[k] = acc
        return cache[e]

    for exps, coeff in q.sorted_terms():
        term = MultiPoly.constant(field, m, coeff)
        for i, ei in enumerate(exps):
            if ei:
                term = term * coord_pow(i, ei)
        result = result + term

    dq, dp = q.degree(), pmap.degree()
    if dq is NEG_INF:
        bound = NEG_INF
    elif dp is NEG_INF:
        bound = 0  # zero map: only the constant part of q survives
    else:
        bound = dq * dp
    assert result.degree() <= bound
    return result


def _exponents_upto(nvars: int, deg: int) -> Iterator[tuple]:
    if nvars == 1:
        for e in range(deg + 1):
            yield (e,)
        return
    for e in range(deg + 1):
        for rest in _exponents_upto(nvars - 1, deg - e):
            yield (e,) + rest


def monomial_basis(nvars: int, max_degree: int) -> list[tuple]:
    """All exponent vectors of total degree <= max_degree, in graded lex order."""
    if nvars < 1:
        raise ValueError("nvars must be >= 1")
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    basis = sorted(_exponents_upto(nvars, max_degree), key=grlex_key)
    assert len(basis) == math.comb(nvars + max_degree, nvars)
    return basis


def lagrange_basis(field: PrimeField, points: Sequence[int]) -> list[MultiPoly]:
    """Univariate Lagrange interpolation basis u_i with u_i(a_j) = delta_ij."""
    n = len(points)
    if field.p <= n:
        raise ValueError(f"field too small: p={field.p} but {n} interpolation points need p > {n}")
    pts = [a % field.p for a in points]
    if len(set(pts)) != n:
        raise ValueError("repeated interpolation points")
    p = field.p
    basis = []
    for i, ai in enumerate(pts):
        # numerator prod_{j != i} (z - a_j), dense coefficient list
        coeffs = [1]
        for j, aj in enumerate(pts):
            if j == i:
                continue
            nxt = [0] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                nxt[k + 1] = (nxt[k + 1] + c) % p
                nxt[k] = (nxt[k] - c * aj) % p
            coeffs = nxt
        denom = 1
        for j, aj in enumerate(pts):
            if j != i:
                denom = denom * (ai - aj) % p
        scale = field.inv(denom)
        basis.append(MultiPoly(field, 1, {(k,): c * scale % p for k, c in enumerate(coeffs)}))
    return basis


def determinant_poly(field: PrimeField, n: int) -> MultiPoly:
    """det of the generic n x n matrix, variables x_{ij} in row-major order."""
    terms: dict[tuple, int] = {}
    for perm in _permutations_signed(n):
        sigma, sign = perm
        e = [0] * (n * n)
        for i in range(n):
            e[i * n + sigma[i]] = 1
        terms[tuple(e)] = sign % field.p
    return MultiPoly(field, n * n, terms)


def _permutations_signed(n: int):
    from itertools import permutations

    for sigma in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if sigma[i] > sigma[j])
        yield sigma, (-1) ** inversions
