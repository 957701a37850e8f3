import math

import numpy as np
import pytest

from oracles import gram_defect_loops
from flatorth.circulant import character_vector, circulant_matrix, dft, is_circulant_orthogonal
from flatorth.constructions import (
    CIRCULANT_HADAMARD_4,
    RandomizedCirculantParams,
    block_embed,
    circulant_hadamard4,
    circulant_paley,
    crt_circulant_product,
    crt_row,
    default_target,
    design_values,
    goldbach_blockdiag,
    hadamard_design_matrix,
    randomized_circulant,
    randomized_trial,
    regular_extension,
    select_trial,
    sylvester_result,
    tensor_compose,
)
from flatorth.errors import PreconditionError, UnsupportedDimensionError
from flatorth.hadamard import sylvester
from flatorth.linalg import flatness_metrics, gram_defect
from flatorth.numtheory import is_prime, quadratic_residues


def conjugated_embedding(n):
    """U^T (H + I_q) U built from the two block matrices, as an oracle."""
    r = n.bit_length() - 1
    big = 2 ** r
    q, s = n - big, 2 * big - n
    mt = np.zeros((n, n))
    mt[:big, :big] = sylvester(r) / math.sqrt(big)
    mt[big:, big:] = np.eye(q)
    u = np.zeros((n, n))
    u[:s, :s] = np.eye(s)
    c = 1 / math.sqrt(2)
    u[s:big, s:big] = c * np.eye(q)
    u[s:big, big:] = -c * np.eye(q)
    u[big:, s:big] = c * np.eye(q)
    u[big:, big:] = c * np.eye(q)
    return u.T @ mt @ u


# -- block_embed ---------------------------------------------------------------

def test_block_embed_power_of_two():
    res = block_embed(4)
    np.testing.assert_allclose(res.matrix, sylvester(2) / 2)
    assert (res.report.l, res.report.u, res.report.f) == (0.5, 0.5, 0.0)


def test_block_embed_n5():
    res = block_embed(5)
    assert res.report.l == pytest.approx(0.25)
    assert res.report.l >= 1 / (2 * math.sqrt(5))
    assert res.report.gram_defect <= 1e-12
    assert gram_defect_loops(res.matrix.tolist()) <= 1e-12


def test_block_embed_n100():
    res = block_embed(100)
    assert res.provenance["r"] == 6 and res.provenance["q"] == 36 and res.provenance["s"] == 28
    assert res.report.l == pytest.approx(1 / 16)
    assert res.report.l >= 1 / 20


@pytest.mark.parametrize("n", [2, 5, 6, 7, 9, 12, 17, 31, 100, 255])
def test_block_embed_equals_conjugation(n):
    np.testing.assert_allclose(block_embed(n).matrix, conjugated_embedding(n), atol=1e-14)


def test_rotation_at_three_breaks_bound():
    # why order 3 is special-cased: the rotated embedding has a small diagonal entry
    m = conjugated_embedding(3)
    assert np.abs(m).min() == pytest.approx((1 - 1 / math.sqrt(2)) / 2)
    assert np.abs(m).min() < 1 / (2 * math.sqrt(3))
    res = block_embed(3)
    assert res.report.l == pytest.approx(1 / 3)


def test_block_embed_bound_range():
    for n in range(2, 513):
        res = block_embed(n)
        assert res.report.l >= 1 / (2 * math.sqrt(n)) - 1e-12, n
        assert res.report.gram_defect <= 1e-10


def test_block_embed_rejects_one():
    with pytest.raises(PreconditionError):
        block_embed(1)


# -- Hadamard design / Paley circulant -------------------------------------------

def identities(n, x, y):
    orth = (n - 3) / 4 * x * x + (n + 1) / 4 * y * y + (n + 1) / 2 * x * y
    norm = (n - 1) / 2 * x * x + (n + 1) / 2 * y * y
    return orth, norm


def test_design_n3():
    x, y = design_values(3)
    assert x == pytest.approx(-1) and y == pytest.approx(0, abs=1e-15)
    res = hadamard_design_matrix(3)
    assert res.report.f == pytest.approx(1)
    assert res.report.gram_defect <= 1e-15


def test_design_n7():
    res = hadamard_design_matrix(7)
    x, y = design_values(7)
    assert x == pytest.approx(-0.546918, abs=1e-6)
    assert y == pytest.approx(0.160189, abs=1e-6)
    assert 3 * x * x + 4 * y * y == pytest.approx(1, abs=1e-12)
    assert set(np.unique(res.matrix)) == {x, y}
    assert res.report.gram_defect <= 1e-12


def test_design_n103():
    res = hadamard_design_matrix(103)
    assert res.report.f == pytest.approx(0.113, abs=5e-4)
    assert res.report.f <= 2 / math.sqrt(103)


def test_design_identities_hold_for_every_supported_n():
    for n in (3, 7, 11, 15, 19, 23, 31, 43, 47, 63, 95, 103, 127):
        x, y = design_values(n)
        orth, norm = identities(n, x, y)
        assert abs(orth) <= 1e-12 and abs(norm - 1) <= 1e-12
        res = hadamard_design_matrix(n)
        assert set(np.unique(res.matrix)) <= {x, y}
        assert res.report.gram_defect <= 1e-12


def test_design_unsupported():
    with pytest.raises(UnsupportedDimensionError):
        hadamard_design_matrix(5)


def test_circulant_paley_3():
    res = circulant_paley(3)
    np.testing.assert_allclose(sorted(res.circulant_row), [-1, 0, 0], atol=1e-15)
    m = res.matrix
    assert np.all(np.sort(np.abs(m), axis=1) == np.array([0, 0, 1])) or np.allclose(
        np.sort(np.abs(m), axis=1), [[0, 0, 1]] * 3)


def test_circulant_paley_matches_residue_rule():
    for p in (7, 11, 19):
        x, y = design_values(p)
        qr = quadratic_residues(p)
        m = circulant_paley(p).matrix
        for i in range(p):
            for j in range(p):
                assert m[i, j] == (x if (i - j) % p in qr else y)


def test_circulant_paley_flatness():
    res = circulant_paley(11)
    assert res.report.f <= 2 / math.sqrt(11)
    assert is_circulant_orthogonal(res.circulant_row)
    np.testing.assert_array_equal(circulant_matrix(res.circulant_row), res.matrix)


@pytest.mark.parametrize("p", [5, 9, 13, 2])
def test_circulant_paley_rejects(p):
    with pytest.raises(PreconditionError):
        circulant_paley(p)


# -- randomized circulant ------------------------------------------------------------

def test_randomized_trace_p13():
    p = 13
    trial = randomized_trial(p, seed=3, index=0)
    v = character_vector(p)
    assert trial.z[0] == 1
    assert set(np.abs(trial.z)) == {1.0}
    half_nonres = [y for y in range(1, 7) if v[y] == -1]
    assert set(trial.flipped) <= set(half_nonres)
    flipped = set(trial.flipped) | {p - y for y in trial.flipped}
    for j in range(1, p):
        assert trial.z[j] == (1.0 if j in flipped else v[j])
    np.testing.assert_array_equal(trial.z, trial.z[(-np.arange(p)) % p])
    np.testing.assert_allclose(trial.row, dft(trial.z).real / p)


def test_randomized_draws_respect_rho():
    # flips over many trials: frequency close to 1/sqrt(p)
    p = 401
    counts = [len(randomized_trial(p, 0, t).flipped) for t in range(400)]
    slots = sum(1 for y in range(1, (p - 1) // 2 + 1) if character_vector(p)[y] == -1)
    rate = sum(counts) / (400 * slots)
    assert rate == pytest.approx(p ** -0.5, rel=0.1)


def test_randomized_every_trial_orthogonal():
    for p in (5, 13, 17, 29, 37, 41, 101):
        for t in range(10):
            trial = randomized_trial(p, 11, t)
            assert np.all(np.abs(trial.z) == 1)
            assert is_circulant_orthogonal(trial.row, 1e-10)


def test_randomized_reproducible():
    params = RandomizedCirculantParams(p=101, seed=42, max_trials=10, target_f=0.0)
    a, b = randomized_circulant(params), randomized_circulant(params)
    np.testing.assert_array_equal(a.matrix, b.matrix)
    assert a.provenance == b.provenance
    assert a.provenance["accepted"] is False and a.provenance["trials_run"] == 10


def test_randomized_trial_independent_of_schedule():
    late = randomized_trial(61, 5, 7)
    for t in range(7):
        randomized_trial(61, 5, t)
    again = randomized_trial(61, 5, 7)
    np.testing.assert_array_equal(late.z, again.z)


def test_randomized_accepts_first_passing_trial():
    params = RandomizedCirculantParams(p=109, seed=1)
    trial, accepted, runs = select_trial(params)
    assert accepted and trial.index == runs - 1
    for t in range(trial.index):
        assert randomized_trial(109, 1, t).f > params.threshold
    res = randomized_circulant(params)
    assert res.report.f <= default_target(109)
    assert res.report.f == pytest.approx(trial.f)


def test_randomized_best_when_nothing_passes():
    params = RandomizedCirculantParams(p=29, seed=2, max_trials=6, target_f=-1.0)
    fs = [randomized_trial(29, 2, t).f for t in range(6)]
    res = randomized_circulant(params)
    assert res.provenance["trial"] == int(np.argmin(fs))


@pytest.mark.parametrize("p", [3, 7, 15, 2])
def test_randomized_rejects(p):
    with pytest.raises(PreconditionError):
        RandomizedCirculantParams(p=p)


def test_randomized_params_validation():
    assert RandomizedCirculantParams(p=13).rho == 13 ** -0.5
    with pytest.raises(PreconditionError):
        RandomizedCirculantParams(p=13, seed=-1)
    with pytest.raises(PreconditionError):
        RandomizedCirculantParams(p=13, max_trials=0)


# -- regular extension ---------------------------------------------------------------------

def test_regular_extension_m1():
    res = regular_extension(1)
    m = res.matrix
    vals = np.unique(np.round(m, 6))
    np.testing.assert_allclose(sorted(vals), [-0.638197, -0.447214, 0.361803], atol=1e-6)
    b = (1 - 5 ** -0.5) / 4
    assert b == pytest.approx(0.138197, abs=1e-6)
    assert 3 * 0.361803 ** 2 + 0.638197 ** 2 + 0.2 == pytest.approx(1, abs=1e-5)
    np.testing.assert_allclose(m @ m.T, np.eye(5), atol=1e-12)


def test_regular_extension_algebra():
    # border row against a body row: a(1 - n b) + a^2 = 0 ; body row norm: 1 - 2b + n b^2 + a^2 = 1
    for m in (1, 2, 3, 4):
        n = 4 ** m
        a = -1 / math.sqrt(n + 1)
        b = (1 - (n + 1) ** -0.5) / n
        assert a * (1 - n * b) + a * a == pytest.approx(0, abs=1e-15)
        assert 1 - 2 * b + n * b * b + a * a == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_regular_extension_gram(m):
    res = regular_extension(m)
    g = res.matrix @ res.matrix.T
    np.testing.assert_allclose(g, np.eye(4 ** m + 1), atol=1e-12)
    assert res.report.f <= 2 / math.sqrt(4 ** m)


# -- composition -------------------------------------------------------------------------------

def test_tensor_single_factor():
    r = circulant_paley(7)
    assert tensor_compose([r]) is r


def test_tensor_with_flat_factor_is_neutral():
    res = tensor_compose([sylvester_result(2), circulant_paley(7)])
    assert res.n == 28
    assert res.report.f == pytest.approx(circulant_paley(7).report.f, abs=1e-12)


def test_tensor_7_11():
    a, b = circulant_paley(7), circulant_paley(11)
    res = tensor_compose([a, b])
    assert res.n == 77
    assert res.report.u * math.sqrt(77) <= (1 + a.report.f) * (1 + b.report.f) + 1e-12
    assert 1 + res.report.f <= (1 + a.report.f) * (1 + b.report.f) + 1e-12


def test_crt_3_5():
    row5 = randomized_circulant(RandomizedCirculantParams(p=5, seed=0)).circulant_row
    res = crt_circulant_product([circulant_paley(3).circulant_row, row5])
    assert res.n == 15
    assert is_circulant_orthogonal(res.circulant_row)
    np.testing.assert_array_equal(circulant_matrix(res.circulant_row), res.matrix)


def test_crt_4_7():
    res = crt_circulant_product([CIRCULANT_HADAMARD_4, circulant_paley(7).circulant_row])
    assert res.n == 28 and is_circulant_orthogonal(res.circulant_row)


def test_crt_row_definition():
    a, b = np.arange(1.0, 4.0), np.arange(10.0, 15.0)
    y = crt_row([a, b])
    for k in range(15):
        assert y[k] == a[k % 3] * b[k % 5]


def test_crt_single_row():
    row = circulant_paley(7).circulant_row
    np.testing.assert_array_equal(crt_circulant_product([row]).circulant_row, row)


def test_crt_rejects():
    with pytest.raises(PreconditionError):
        crt_circulant_product([CIRCULANT_HADAMARD_4, CIRCULANT_HADAMARD_4])
    with pytest.raises(PreconditionError):
        crt_circulant_product([np.ones(3) / math.sqrt(3)])


def test_circulant_hadamard4():
    res = circulant_hadamard4()
    assert res.report.f == 0 and is_circulant_orthogonal(res.circulant_row)


# -- Goldbach block diagonal -------------------------------------------------------------------

def test_goldbach_21():
    res = goldbach_blockdiag(21)
    assert sum(res.provenance["parts"]) == 21
    assert res.report.gram_defect <= 1e-12
    parts_u = [flatness_metrics(circulant_paley(p).matrix).u if p % 4 == 3 else None
               for p in res.provenance["parts"]]
    assert res.report.u <= max(u for u in parts_u if u is not None) + 1e-15
    assert res.report.l == 0


def test_goldbach_100():
    res = goldbach_blockdiag(100)
    assert len(res.provenance["parts"]) == 4
    # calibrated: the 2+o(1) constant is asymptotic, Paley at p = 19 alone gives 2.88
    assert res.report.u * math.sqrt(100) <= 3.0


def test_goldbach_blocks_are_prime_blocks():
    res = goldbach_blockdiag(61, seed=4)
    k = 0
    for p, prov in zip(res.provenance["parts"], res.provenance["blocks"]):
        blk = res.matrix[k:k + p, k:k + p]
        assert gram_defect(blk) <= 1e-12
        assert prov["construction"] == ("circulant_paley" if p % 4 == 3 else "randomized_circulant")
        k += p


def test_every_prime_block_is_flat_up_to_600():
    for p in range(5, 600):
        if is_prime(p):
            res = circulant_paley(p) if p % 4 == 3 else randomized_circulant(
                RandomizedCirculantParams(p=p))
            assert res.report.f <= 8 * p ** -0.25
