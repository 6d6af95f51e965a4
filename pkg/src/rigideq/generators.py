"""Universal polynomial maps: SV generator, rigidity maps, tensor maps.

All coordinate orders are deterministic: matrix outputs are row-major,
tensor outputs are mixed-radix row-major, and SV interpolation points
default to 0, 1, ..., N-1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .field import PrimeField
from .poly import MultiPoly, PolyMap, lagrange_basis


@dataclass(frozen=True)
class SVParams:
    """Parameters of the generator SV_{N,k}: 2k inputs, N outputs."""

    field: PrimeField
    N: int
    k: int
    alphas: tuple = ()

    def __post_init__(self):
        if self.field.p <= self.N:
            raise ValueError(f"field too small: p={self.field.p}, need p > {self.N}")
        if not 1 <= self.k <= self.N:
            raise ValueError(f"need 1 <= k <= N, got k={self.k}, N={self.N}")
        alphas = tuple(a % self.field.p for a in (self.alphas or range(self.N)))
        if len(alphas) != self.N or len(set(alphas)) != self.N:
            raise ValueError("alphas must be N pairwise distinct field elements")
        object.__setattr__(self, "alphas", alphas)


def sv_map(params: SVParams) -> PolyMap:
    """The map SV_{N,k}(x, y), coordinate i = sum_j u_i(y_j) * x_j.

    Variable order: x_1..x_k then y_1..y_k. Every coordinate has degree <= N.
    """
    F, N, k = params.field, params.N, params.k
    nvars = 2 * k
    basis = lagrange_basis(F, params.alphas)
    coords = []
    for i in range(N):
        terms: dict[tuple, int] = {}
        for j in range(k):
            for (deg,), c in basis[i].terms.items():
                e = [0] * nvars
                e[j] = 1
                e[k + j] = deg
                terms[tuple(e)] = (terms.get(tuple(e), 0) + c) % F.p
        q = MultiPoly(F, nvars, terms)
        assert q.degree() <= N
        coords.append(q)
    return PolyMap(F, nvars, tuple(coords), label=f"sv({N},{k})")


def sv_selector(params: SVParams, positions: Sequence[int]) -> tuple:
    """y-assignment projecting x_j onto coordinate positions[j] (0-indexed)."""
    if len(positions) != params.k:
        raise ValueError(f"need exactly k={params.k} positions")
    if len(set(positions)) != len(positions):
        raise ValueError("positions must be distinct")
    return tuple(params.alphas[i] for i in positions)


def rank_map(field: PrimeField, n: int, r: int) -> PolyMap:
    """Matrix product map UV: 2nr inputs to n^2 outputs, degree 2.

    Variables: u (n x r, row-major) then v (r x n, row-major); output (i,j)
    row-major is sum_t u[i,t] v[t,j].
    """
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r={r}, n={n}")
    nvars = 2 * n * r
    coords = []
    for i in range(n):
        for j in range(n):
            terms = {}
            for t in range(r):
                e = [0] * nvars
                e[i * r + t] += 1
                e[n * r + t * n + j] += 1
                terms[tuple(e)] = 1
            coords.append(MultiPoly(field, nvars, terms))
    return PolyMap(field, nvars, tuple(coords), label=f"rank({n},{r})")


@dataclass(frozen=True)
class RigidityParams:
    """Rigidity universal map parameters: side n, rank budget r, sparsity k."""

    field: PrimeField
    n: int
    r: int
    k: int

    def __post_init__(self):
        if not 1 <= self.r < self.n:
            raise ValueError(f"need 1 <= r < n, got r={self.r}, n={self.n}")
        if not 0 <= self.k <= self.n * self.n:
            raise ValueError(f"need 0 <= k <= n^2, got k={self.k}")
        if self.field.p <= self.n * self.n:
            raise ValueError(f"field too small: p={self.field.p}, need p > {self.n * self.n}")

    @property
    def in_arity(self) -> int:
        return 2 * self.n * self.r + 2 * self.k

    @property
    def epsilon_rank(self) -> float:
        return self.r / self.n

    @property
    def epsilon_sparse(self) -> float:
        return self.k / (self.n * self.n)


def rigidity_map(params: RigidityParams) -> PolyMap:
    """UV(u, v) + SV_{n^2,k}(x, y): the universal map for non-rigid matrices.

    Variables: u, v as in rank_map, then the 2k SV variables.
    """
    F, n, r, k = params.field, params.n, params.r, params.k
    nvars = params.in_arity
    uv = rank_map(F, n, r)
    coords = []
    if k == 0:
        coords = [_pad_vars(q, nvars, 0) for q in uv.coordinates]
    else:
        sv = sv_map(SVParams(F, n * n, k))
        for q_uv, q_sv in zip(uv.coordinates, sv.coordinates):
            q = _pad_vars(q_uv, nvars, 0) + _pad_vars(q_sv, nvars, 2 * n * r)
            coords.append(q)
    pmap = PolyMap(F, nvars, tuple(coords), label=f"rigidity({n},{r},{k})")
    assert pmap.degree() <= max(2, n * n)
    return pmap


def _pad_vars(q: MultiPoly, nvars: int, offset: int) -> MultiPoly:
    """Re-embed q into a larger variable set, shifting its variables by offset."""
    terms = {}
    for e, c in q.terms.items():
        out = [0] * nvars
        out[offset : offset + len(e)] = e
        terms[tuple(out)] = c
    return MultiPoly(q.field, nvars, terms)


def rigidity_witness(
    params: RigidityParams,
    u0: Sequence[Sequence[int]],
    v0: Sequence[Sequence[int]],
    sparse: Mapping[tuple, int],
) -> tuple:
    """Input vector beta with rigidity_map(params)(beta) = U0 V0 + S.

    ``sparse`` maps 0-indexed (i, j) positions to the values of S; at most k
    positions. The support is padded to exactly k with the smallest row-major
    positions not already used.
    """
    F, n, r, k = params.field, params.n, params.r, params.k
    if len(sparse) > k:
        raise ValueError(f"sparse support larger than budget k={k}")
    support = sorted(i * n + j for (i, j) in sparse)
    pos = 0
    while len(support) < k:
        if pos not in support:
            support.append(pos)
        pos += 1
    support.sort()
    values = {i * n + j: v % F.p for (i, j), v in sparse.items()}
    beta = []
    for i in range(n):
        for t in range(r):
            beta.append(u0[i][t] % F.p)
    for t in range(r):
        for j in range(n):
            beta.append(v0[t][j] % F.p)
    if k:
        sv_params = SVParams(F, n * n, k)
        beta.extend(values.get(s, 0) for s in support)
        beta.extend(sv_selector(sv_params, support))
    return tuple(beta)


def fixed_support_map(field: PrimeField, n: int, r: int, support: Sequence[tuple]) -> PolyMap:
    """UV(u, v) + W with W supported on a fixed set of positions.

    ``support`` holds 0-indexed (i, j) positions; duplicates are rejected.
    With r = 0 the UV part is empty and the map is linear on its support
    variables. Support variables follow the u, v blocks in sorted row-major
    order of their positions.
    """
    support = [tuple(s) for s in support]
    if len(set(support)) != len(support):
        raise ValueError("duplicate positions in support")
    for (i, j) in support:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"position {(i, j)} outside [0,{n}) x [0,{n})")
    support = sorted(support)
    nvars = 2 * n * r + len(support)
    var_of = {pos: 2 * n * r + t for t, pos in enumerate(support)}
    coords = []
    for i in range(n):
        for j in range(n):
            terms: dict[tuple, int] = {}
            for t in range(r):
                e = [0] * nvars
                e[i * r + t] += 1
                e[n * r + t * n + j] += 1
                terms[tuple(e)] = 1
            if (i, j) in var_of:
                e = [0] * nvars
                e[var_of[(i, j)]] = 1
                terms[tuple(e)] = 1
            coords.append(MultiPoly(field, nvars, terms))
    sup_str = ";".join(f"{i + 1},{j + 1}" for i, j in support)
    return PolyMap(field, nvars, tuple(coords), label=f"support({n},{r},[{sup_str}])")


@dataclass(frozen=True)
class TensorParams:
    """Order-d tensor map parameters: side n, order d, rank bound r."""

    field: PrimeField
    n: int
    d: int
    r: int

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("need order d >= 2")
        if self.r < 1:
            raise ValueError("need rank bound r >= 1")
        if self.n < 1:
            raise ValueError("need side n >= 1")

    @property
    def in_arity(self) -> int:
        return self.d * self.r * self.n


def tensor_map(params: TensorParams) -> PolyMap:
    """Sum of r outer products of d vectors: d*r*n inputs to n^d outputs.

    Variable (c, i, a) -- axis c, term i, coordinate a -- sits at index
    c*r*n + i*n + a. Output (a_1, ..., a_d) is mixed-radix row-major.
    """
    F, n, d, r = params.field, params.n, params.d, params.r
    nvars = params.in_arity
    coords = []
    for flat in range(n**d):
        digits = []
        rem = flat
        for _ in range(d):
            digits.append(rem % n)
            rem //= n
        digits.reverse()  # digits[c] = a_{c+1}
        terms = {}
        for i in range(r):
            e = [0] * nvars
            for c in range(d):
                e[c * r * n + i * n + digits[c]] += 1
            terms[tuple(e)] = (terms.get(tuple(e), 0) + 1) % F.p
        q = MultiPoly(F, nvars, terms)
        coords.append(q)
    pmap = PolyMap(F, nvars, tuple(coords), label=f"tensor({n},{d},{r})")
    assert all(q.degree() == d for q in pmap.coordinates)
    return pmap


def tensor_witness(params: TensorParams, vectors: Sequence[Sequence[Sequence[int]]]) -> tuple:
    """Input vector for tensor_map from r tuples of d vectors each.

    vectors[i][c] is the axis-c vector of the i-th rank-one term.
    """
    F, n, d, r = params.field, params.n, params.d, params.r
    if len(vectors) != r or any(len(v) != d for v in vectors):
        raise ValueError(f"need r={r} tuples of d={d} vectors")
    beta = [0] * params.in_arity
    for i, tup in enumerate(vectors):
        for c, vec in enumerate(tup):
            for a in range(n):
                beta[c * params.r * n + i * n + a] = vec[a] % F.p
    return tuple(beta)


_SPEC_RE = re.compile(r"^\s*(rank|rigidity|support|tensor|sv)\s*\((.*)\)\s*$")


def parse_map_spec(field: PrimeField, text: str) -> PolyMap:
    """Build a map from its label grammar:

    rank(n,r) | rigidity(n,r,k) | support(n,r,S-file) | tensor(n,d,r) | sv(N,k)

    The support S-file holds one 1-indexed "i j" pair per line.
    """
    m = _SPEC_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse map spec {text!r}")
    name, args = m.group(1), [a.strip() for a in m.group(2).split(",")]
    if name == "rank":
        n, r = _ints(args, 2, text)
        return rank_map(field, n, r)
    if name == "rigidity":
        n, r, k = _ints(args, 3, text)
        return rigidity_map(RigidityParams(field, n, r, k))
    if name == "tensor":
        n, d, r = _ints(args, 3, text)
        return tensor_map(TensorParams(field, n, d, r))
    if name == "sv":
        N, k = _ints(args, 2, text)
        return sv_map(SVParams(field, N, k))
    # support(n, r, path)
    if len(args) != 3:
        raise ValueError(f"support spec needs (n, r, S-file): {text!r}")
    n, r = int(args[0]), int(args[1])
    support = load_support_file(args[2])
    return fixed_support_map(field, n, r, support)


def load_support_file(path: str) -> list[tuple]:
    """Read 1-indexed "i j" pairs, one per line; returns 0-indexed positions."""
    support = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i, j = map(int, line.split())
            support.append((i - 1, j - 1))
    return support


def _ints(args, count, text):
    if len(args) != count:
        raise ValueError(f"expected {count} integer arguments in {text!r}")
    return tuple(int(a) for a in args)
