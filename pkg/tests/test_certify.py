import random
import warnings
from fractions import Fraction

import pytest

from rigideq import (
    AnnihilatorCertificate,
    DenseMatrix,
    MultiPoly,
    PolyMap,
    PrimeField,
    RigidityParams,
    SolverConfig,
    certify_circuit_lower_bound,
    certify_rigid,
    determinant_poly,
    find_annihilator,
    is_rigid_bruteforce,
    rank_map,
    rigidity_map,
    rigidity_witness,
    verify_pit,
    verify_symbolic,
)
from rigideq.certify import PitReport, UnverifiedCertificateError


# ---------------------------------------------------------------- verification


def test_verify_symbolic_examples(f101):
    det2 = determinant_poly(f101, 2)
    pmap = rank_map(f101, 2, 1)
    assert verify_symbolic(det2, pmap) is True
    x11 = MultiPoly.variable(f101, 4, 0)
    assert verify_symbolic(x11, pmap) is False
    assert verify_symbolic(MultiPoly.zero(f101, 4), pmap) is True


def test_verify_pit_true_annihilator(f101):
    det2 = determinant_poly(f101, 2)
    pmap = rank_map(f101, 2, 1)
    for seed in range(5):
        ok, report = verify_pit(det2, pmap, 20, seed)
        assert ok is True
        assert report.per_trial_bound == Fraction(4, 101)
        assert report.aggregate_bound == Fraction(4, 101) ** 20


def test_verify_pit_rejects_non_annihilator(f101):
    pmap = rank_map(f101, 2, 1)
    x11 = MultiPoly.variable(f101, 4, 0)
    ok, _ = verify_pit(x11, pmap, 20, 0)
    assert ok is False


def test_pit_report_bound_example():
    report = PitReport(10, 101, 27, Fraction(27, 101), Fraction(27, 101) ** 10)
    assert report.aggregate_bound == Fraction(27**10, 101**10)
    assert "27/101" in report.display()


def test_verify_pit_warns_on_small_field():
    # deg(Q)*deg(P) = 4 >= p = 3: the Schwartz-Zippel bound degenerates
    F3 = PrimeField(3)
    pmap = rank_map(F3, 2, 1)
    det2 = determinant_poly(F3, 2)
    with pytest.warns(UserWarning, match="degenerates"):
        verify_pit(det2, pmap, 3, 0)


# ---------------------------------------------------------------- rigidity certificates


@pytest.fixture(scope="module")
def rigidity210_cert():
    # rigidity(2,1,0) over F_5 is the rank map; its annihilator is det2
    F5 = PrimeField(5)
    pmap = rigidity_map(RigidityParams(F5, 2, 1, 0))
    cert = find_annihilator(pmap, SolverConfig(mode="symbolic", d_min=1, d_max=2))
    assert cert is not None and cert.degree == 2
    return cert


def test_certify_rigid_cross_validates_oracle(rigidity210_cert):
    # full cross-check: certified => brute-force rigid, on all 625 matrices
    F5 = PrimeField(5)
    for flat in range(5**4):
        entries = (flat % 5, flat // 5 % 5, flat // 25 % 5, flat // 125 % 5)
        m = DenseMatrix(F5, 2, 2, entries)
        result = certify_rigid(m, rigidity210_cert)
        rigid = is_rigid_bruteforce(m, 1, 0)
        if result is not None:
            assert rigid, f"certified matrix {entries} is not (1,0)-rigid"
            assert result.value == rigidity210_cert.q.evaluate(list(entries))
            assert result.n == 2 and result.r == 1 and result.k == 0
        else:
            # det2 vanishes exactly on the rank-<=1 matrices, so here the
            # equation is a perfect test and "not certified" means non-rigid
            assert not rigid


def test_certify_rigid_never_certifies_witnesses():
    # 10^4 random rank-<=r plus <=k-sparse constructions are never certified
    F = PrimeField(101)
    params = RigidityParams(F, 2, 1, 0)
    pmap = rigidity_map(params)
    cert = find_annihilator(pmap, SolverConfig(d_min=1, d_max=2))
    rng = random.Random("cert:witness")
    for _ in range(10_000):
        u0 = [[rng.randrange(F.p)] for _ in range(2)]
        v0 = [[rng.randrange(F.p) for _ in range(2)]]
        beta = rigidity_witness(params, u0, v0, {})
        m = DenseMatrix(F, 2, 2, tuple(pmap.evaluate(beta)))
        assert certify_rigid(m, cert) is None


def test_certify_rigid_input_validation(rigidity210_cert, f101):
    F5 = PrimeField(5)
    with pytest.raises(ValueError, match="different fields"):
        certify_rigid(DenseMatrix(f101, 2, 2, (1, 0, 0, 1)), rigidity210_cert)
    with pytest.raises(ValueError, match="3x3"):
        certify_rigid(DenseMatrix(F5, 3, 3, (1,) * 9), rigidity210_cert)
    not_rigidity = find_annihilator(rank_map(F5, 2, 1), SolverConfig(d_min=2, d_max=2))
    with pytest.raises(ValueError, match="not for a rigidity map"):
        certify_rigid(DenseMatrix(F5, 2, 2, (1, 0, 0, 1)), not_rigidity)


def test_unverified_certificates_refused(rigidity210_cert):
    F5 = PrimeField(5)
    m = DenseMatrix(F5, 2, 2, (1, 0, 0, 1))
    stripped = AnnihilatorCertificate(
        rigidity210_cert.pmap, rigidity210_cert.q, 2, "symbolic", 0, {}
    )
    with pytest.raises(UnverifiedCertificateError, match="lacks"):
        certify_rigid(m, stripped)
    corrupted = AnnihilatorCertificate(
        rigidity210_cert.pmap,
        MultiPoly.variable(F5, 4, 0),
        2,
        "symbolic",
        0,
        {"symbolic_verified": True},
    )
    with pytest.raises(UnverifiedCertificateError, match="re-verification"):
        certify_rigid(m, corrupted, recheck=True)
    # without recheck the stored flag is trusted; Q = x11 evaluates nonzero
    assert certify_rigid(m, corrupted) is not None


# ---------------------------------------------------------------- circuit certificates


def _synthetic_universal_cert(field):
    """Hand-built universal-map-shaped certificate for exercising the
    matrix-orientation and refusal logic without a costly solve."""
    x1 = MultiPoly.variable(field, 2, 0)
    x2 = MultiPoly.variable(field, 2, 1)
    zero = MultiPoly.zero(field, 2)
    # coords row-major over (input i, output j): U = diag(x1, x2)
    pmap = PolyMap(field, 2, (x1, zero, zero, x2), label="universal(2,1,1,1)")
    # Q = coordinate (i=0, j=1): annihilates P since that entry is zero
    q = MultiPoly.variable(field, 4, 1)
    cert = AnnihilatorCertificate(pmap, q, 1, "symbolic", 0, {"symbolic_verified": True})
    assert verify_symbolic(q, pmap)
    return cert


def test_certify_circuit_lower_bound_orientation(f101):
    cert = _synthetic_universal_cert(f101)
    # Q picks the coefficient of input 0 at output 1 = matrix entry (1, 0)
    m = DenseMatrix(f101, 2, 2, (0, 0, 7, 0))
    result = certify_circuit_lower_bound(m, cert)
    assert result is not None and result.value == 7
    assert (result.n, result.s_budget, result.L, result.w) == (2, 1, 1, 1)
    diag = DenseMatrix(f101, 2, 2, (3, 0, 0, 4))
    assert certify_circuit_lower_bound(diag, cert) is None


def test_certify_circuit_lower_bound_validation(f101):
    cert = _synthetic_universal_cert(f101)
    with pytest.raises(ValueError, match="2x2"):
        certify_circuit_lower_bound(DenseMatrix(f101, 3, 3, (1,) * 9), cert)
    F5 = PrimeField(5)
    rigid_cert = find_annihilator(
        rigidity_map(RigidityParams(F5, 2, 1, 0)), SolverConfig(d_min=2, d_max=2)
    )
    with pytest.raises(ValueError, match="not for a universal"):
        certify_circuit_lower_bound(DenseMatrix(F5, 2, 2, (1, 0, 0, 1)), rigid_cert)
