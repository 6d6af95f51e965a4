"""Annihilating polynomials for polynomial maps by exact linear algebra.

The solver realizes the dimension-count argument as code: the linear map
Q -> Q o P restricted to polynomials of degree <= D is written as a matrix
over F_p (columns in graded lex monomial order) and its nullspace yields an
annihilator. A sampled mode replaces the astronomically tall symbolic matrix
with rows of point evaluations; soundness is restored by mandatory symbolic
verification of the returned polynomial.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import PrimeField
from .poly import MultiPoly, PolyMap, grlex_key, monomial_basis, poly_compose


class ResourceLimitError(RuntimeError):
    """Symbolic matrix would be too tall; caller should switch to sampled mode."""


class SampledVerificationError(RuntimeError):
    """Sampled-mode kernel vectors repeatedly failed symbolic verification."""


DEFAULT_ROW_CAP = 5_000_000
DEGREE_SEARCH_CAP = 64


@dataclass(frozen=True)
class SolverConfig:
    mode: str = "symbolic"  # "symbolic" | "sampled"
    d_min: int = 1
    d_max: int = 3
    sample_margin: int = 16
    seed: int = 0
    verify: bool = True
    row_cap: int = DEFAULT_ROW_CAP
    max_resample_rounds: int = 4

    def __post_init__(self):
        if self.mode not in ("symbolic", "sampled"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 1 <= self.d_min <= self.d_max:
            raise ValueError("need 1 <= d_min <= d_max")
        if self.sample_margin < 1:
            raise ValueError("sample_margin must be >= 1")


@dataclass(frozen=True)
class AnnihilatorCertificate:
    """A nonzero Q with Q o P == 0, plus how it was found and verified."""

    pmap: PolyMap
    q: MultiPoly
    degree: int
    mode: str
    seed: int
    verification: dict

    @property
    def label(self) -> str:
        return self.pmap.label

    def to_json_dict(self) -> dict:
        return {
            "kind": "annihilator",
            "label": self.pmap.label,
            "p": self.pmap.field.p,
            "map": self.pmap.to_json_dict(),
            "D": self.degree,
            "mode": self.mode,
            "seed": self.seed,
            "Q": self.q.to_json_dict(),
            "verification": self.verification,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json_dict(cls, doc: dict) -> "AnnihilatorCertificate":
        return cls(
            pmap=PolyMap.from_json_dict(doc["map"]),
            q=MultiPoly.from_json_dict(doc["Q"]),
            degree=doc["D"],
            mode=doc["mode"],
            seed=doc["seed"],
            verification=doc["verification"],
        )

    @classmethod
    def from_json(cls, text: str) -> "AnnihilatorCertificate":
        return cls.from_json_dict(json.loads(text))


def binomial_fits_exactly(n: int, k: int) -> bool:
    return n <= 10_000


def _log_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def dimension_gap_holds(m: int, d: int, N: int, D: int) -> bool:
    """True iff C(N+D, N) > C(m+dD, m): the kernel of Q -> Q o P on degree-D
    polynomials is then guaranteed nonzero by dimension count."""
    n1, k1 = N + D, N
    n2, k2 = m + d * D, m
    if binomial_fits_exactly(n1, k1) and binomial_fits_exactly(n2, k2):
        return math.comb(n1, k1) > math.comb(n2, k2)
    return _log_comb(n1, k1) > _log_comb(n2, k2)


def existence_degree_bound(m: int, d: int, N: int, cap: int = DEGREE_SEARCH_CAP):
    """Smallest D <= cap with C(N+D, N) > C(m+dD, m), else None."""
    if m < 1 or d < 1 or N < 1:
        raise ValueError("need m, d, N >= 1")
    for D in range(1, cap + 1):
        if dimension_gap_holds(m, d, N, D):
            return D
    return None


def _monomial_values(basis, point, p):
    """Evaluate every basis monomial at a point, with a per-variable power table."""
    nvars = len(point)
    max_deg = max((max(e) for e in basis), default=0)
    pows = [[1] * (max_deg + 1) for _ in range(nvars)]
    for i in range(nvars):
        for j in range(1, max_deg + 1):
            pows[i][j] = pows[i][j - 1] * point[i] % p
    out = []
    for e in basis:
        v = 1
        for i, ei in enumerate(e):
            if ei:
                v = v * pows[i][ei] % p
        out.append(v)
    return out


def composition_matrix_symbolic(pmap: PolyMap, D: int, row_cap: int = DEFAULT_ROW_CAP):
    """Matrix of Q -> Q o P: columns indexed by monomial_basis(N, D), rows by
    the monomials of F_p[x_1..x_m] up to degree deg(P)*D that actually occur.

    Returns (rows x cols int64 array, column basis). Omitted rows are
    identically zero and do not change the nullspace.
    """
    d = pmap.degree()
    d_int = 0 if d == float("-inf") else int(d)
    est_rows = math.comb(pmap.in_arity + d_int * D, pmap.in_arity)
    if est_rows > row_cap:
        raise ResourceLimitError(
            f"symbolic matrix would have ~{est_rows} rows > cap {row_cap}; use sampled mode"
        )
    basis = monomial_basis(pmap.out_arity, D)
    columns = []
    row_index: dict[tuple, int] = {}
    for mono in basis:
        composed = poly_compose(MultiPoly.monomial(pmap.field, mono), pmap)
        col = {}
        for e, c in composed.terms.items():
            if e not in row_index:
                row_index[e] = len(row_index)
            col[row_index[e]] = c
        columns.append(col)
    A = np.zeros((max(len(row_index), 1), len(basis)), dtype=np.int64)
    for j, col in enumerate(columns):
        for i, c in col.items():
            A[i, j] = c
    return A, basis


def composition_matrix_sampled(pmap: PolyMap, D: int, rows: int, seed) -> tuple:
    """Row t holds the values of every degree-<=D monomial at P(beta_t) for a
    seeded random beta_t; deterministic given the seed."""
    p = pmap.field.p
    basis = monomial_basis(pmap.out_arity, D)
    rng = random.Random(f"{seed}:sampled:{pmap.label}:{D}")
    A = np.zeros((rows, len(basis)), dtype=np.int64)
    for t in range(rows):
        beta = [rng.randrange(p) for _ in range(pmap.in_arity)]
        point = pmap.evaluate(beta)
        A[t, :] = _monomial_values(basis, point, p)
    return A, basis


def kernel(A, p: int) -> list[list[int]]:
    """Nullspace basis of A over F_p via reduced row echelon form.

    Each basis vector is scaled so its first nonzero coordinate (in column
    order) is 1. Vectors appear in ascending order of their free column.
    """
    A = np.array(A, dtype=np.int64) % p
    if A.ndim != 2:
        raise ValueError("kernel expects a 2-d matrix")
    nrows, ncols = A.shape
    if p * p >= 2**62:
        raise ValueError("modulus too large for the int64 elimination path")
    pivot_cols = []
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        nz = np.nonzero(A[r:, col])[0]
        if nz.size == 0:
            continue
        pivot = r + int(nz[0])
        if pivot != r:
            A[[r, pivot]] = A[[pivot, r]]
        inv = pow(int(A[r, col]), p - 2, p)
        A[r] = A[r] * inv % p
        rest = np.nonzero(A[:, col])[0]
        rest = rest[rest != r]
        if rest.size:
            A[rest] = (A[rest] - A[rest, col][:, None] * A[r][None, :]) % p
        pivot_cols.append(col)
        r += 1
    pivot_set = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, col in enumerate(pivot_cols):
            v[col] = (-int(A[i, free])) % p
        first = next(x for x in v if x)
        if first != 1:
            inv = pow(first, p - 2, p)
            v = [x * inv % p for x in v]
        basis.append(v)
    return basis


def vector_to_poly(vec, basis, field: PrimeField) -> MultiPoly:
    nvars = len(basis[0])
    return MultiPoly(field, nvars, {e: c for e, c in zip(basis, vec) if c})


def find_annihilator(pmap: PolyMap, cfg: SolverConfig):
    """Search D = d_min..d_max for a nonzero Q of degree <= D with Q o P == 0.

    Returns an AnnihilatorCertificate for the smallest successful D, or None
    when the range is exhausted ("none in range"). In sampled mode the
    candidate is symbolically verified; spurious kernels trigger bounded
    resampling with more rows.
    """
    p = pmap.field.p
    for D in range(cfg.d_min, cfg.d_max + 1):
        if cfg.mode == "symbolic":
            A, basis = composition_matrix_symbolic(pmap, D, row_cap=cfg.row_cap)
            ker = kernel(A, p)
            if not ker:
                continue
            q = vector_to_poly(ker[0], basis, pmap.field)
            if cfg.verify:
                assert poly_compose(q, pmap).is_zero()
            verification = {
                "symbolic_verified": True,
                "kernel_dim": len(ker),
                "rows": int(A.shape[0]),
            }
            return AnnihilatorCertificate(pmap, q, D, cfg.mode, cfg.seed, verification)
        # sampled mode
        ncols = math.comb(pmap.out_arity + D, pmap.out_arity)
        rows = ncols + cfg.sample_margin
        for round_no in range(cfg.max_resample_rounds):
            A, basis = composition_matrix_sampled(pmap, D, rows, f"{cfg.seed}:round{round_no}")
            ker = kernel(A, p)
            if not ker:
                break
            q = vector_to_poly(ker[0], basis, pmap.field)
            if poly_compose(q, pmap).is_zero():
                verification = {
                    "symbolic_verified": True,
                    "kernel_dim": len(ker),
                    "rows": rows,
                    "rounds": round_no + 1,
                }
                return AnnihilatorCertificate(pmap, q, D, cfg.mode, cfg.seed, verification)
            rows += ncols  # spurious kernel: densify and retry
        else:
            raise SampledVerificationError(
                f"sampled kernels at D={D} kept failing symbolic verification; use symbolic mode"
            )
    return None
