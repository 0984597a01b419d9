import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hdcrocket.encoding import (
    build_time_encoding,
    effective_lengths,
    fractional_power_matrix,
    fractional_power_vector,
    make_phases,
    transform,
    transform_batch,
    transform_batch_scales,
)
from hdcrocket.errors import LengthMismatch, MissingEncoding
from hdcrocket.kernels import enumerate_kernels
from hdcrocket.plan import N_FEATURES, TransformPlan, fit_plan

D = N_FEATURES
TOL_MC = 5 / math.sqrt(D)


def cos_similarity(phases, dp):
    return float(np.mean(np.cos(dp * phases.theta)))


def test_phase_symmetry(phases):
    th = phases.theta
    assert th.shape == (D,)
    assert th[0] == 0.0
    assert th[D // 2] in (0.0, math.pi)
    np.testing.assert_array_equal(th[D - 1], -th[1])
    np.testing.assert_array_equal(th[1:][::-1], -th[1:])
    assert np.all((th > -math.pi) & (th <= math.pi))
    assert np.array_equal(make_phases(seed=11).theta, th)
    assert not np.array_equal(make_phases(seed=12).theta, th)


def test_power_zero_is_impulse(phases):
    v = fractional_power_vector(phases, 0.0)
    expect = np.zeros(D)
    expect[0] = 1.0
    np.testing.assert_allclose(v, expect, atol=1e-12)


def test_power_one_is_seed_vector(phases):
    # independent: full complex inverse DFT of the unit phasors
    v = np.fft.ifft(np.exp(1j * phases.theta))
    assert np.abs(v.imag).max() < 1e-12
    np.testing.assert_allclose(fractional_power_vector(phases, 1.0), v.real, atol=1e-12)


def test_fractional_power_matches_complex_idft(phases):
    for p in (0.3, 1.7, 4.25):
        v = np.fft.ifft(np.exp(1j * p * phases.theta))
        assert np.abs(v.imag).max() < 1e-12
        np.testing.assert_allclose(fractional_power_vector(phases, p), v.real, atol=1e-12)


def test_rows_unit_norm_and_similarity_formula(phases):
    powers = np.array([0.0, 0.1, 0.5, 1.0, 2.5, 6.0])
    M = fractional_power_matrix(phases, powers)
    np.testing.assert_allclose(np.linalg.norm(M, axis=1), 1.0, atol=1e-9)
    for a in range(len(powers)):
        for b in range(len(powers)):
            direct = float(M[a] @ M[b])
            assert direct == pytest.approx(cos_similarity(phases, powers[a] - powers[b]), abs=1e-9)


def test_sinc_half(phases):
    sim = fractional_power_vector(phases, 0.5) @ fractional_power_vector(phases, 1.0)
    assert abs(sim - 2 / math.pi) <= TOL_MC


def test_scale2_half_length_decorrelates(phases):
    enc = build_time_encoding(500, 2.0, phases)
    assert enc.positions[0] == pytest.approx(2 / 500)
    assert abs(enc.P[0] @ enc.P[250]) <= TOL_MC


def test_scale1_first_last_decorrelates(phases):
    enc = build_time_encoding(500, 1.0, phases)
    assert enc.positions[-1] == 1.0
    assert abs(enc.P[0] @ enc.P[-1]) <= TOL_MC


def test_scale_zero_all_ones(phases):
    enc = build_time_encoding(7, 0.0, phases)
    assert enc.P.shape == (7, D)
    assert np.all(enc.P == 1.0)


def test_binding_preserves_similarity(phases):
    rng = np.random.default_rng(1)
    enc = build_time_encoding(40, 3.0, phases)
    for _ in range(5):
        f = rng.choice([-1.0, 1.0], size=D)
        t1, t2 = rng.integers(40, size=2)
        assert (f * enc.P[t1]) @ (f * enc.P[t2]) == pytest.approx(enc.P[t1] @ enc.P[t2], abs=1e-9)


def brute_response(x, kernel, d):
    T = len(x)
    out = []
    for t in range(T):
        acc = 0.0
        for j in range(9):
            u = t + (j - 4) * d
            if 0 <= u < T:
                acc += kernel[j] * x[u]
        out.append(acc)
    return out


def brute_descriptor(x, plan, P, mode):
    """Scalar re-implementation of thresholding and pooling."""
    W = enumerate_kernels()
    x = list(x)
    T = len(x)
    out = []
    i = 0
    for k in range(84):
        for j, d in enumerate(plan.schedule.dilations):
            d = int(d)
            c = brute_response(x, W[k], d)
            ts = range(T) if (k + j) % 2 == 0 else range(4 * d, T - 4 * d)
            for _ in range(int(plan.schedule.features_per_dilation[j])):
                b = plan.biases[i]
                if mode == "ppv":
                    out.append(sum(1 for t in ts if c[t] > b) / len(ts))
                else:
                    out.append(sum((1.0 if c[t] > b else -1.0) * P[t][i] for t in ts))
                i += 1
    return np.array(out)


@pytest.fixture(scope="module")
def plan30():
    X = np.random.default_rng(2).normal(size=(6, 30))
    return X, fit_plan(X, seed=4)


def test_ppv_brute_force(plan30):
    X, plan = plan30
    x = X[0] + 0.1
    got = transform(x, plan, mode="ppv")
    np.testing.assert_array_equal(got, brute_descriptor(x, plan, None, "ppv"))
    assert np.all((got >= 0) & (got <= 1))


def test_hdc_brute_force(plan30, phases):
    X, plan = plan30
    enc = build_time_encoding(30, 1.5, phases)
    x = X[3]
    got = transform(x, plan, enc, "hdc")
    expect = brute_descriptor(x, plan, enc.P.tolist(), "hdc")
    np.testing.assert_allclose(got, expect, rtol=1e-12, atol=1e-12)


def test_ties_take_negative_branch(phases):
    # zero series: every response is 0 and every bias is 0
    plan = fit_plan(np.zeros((2, 20)), seed=0)
    T_i = effective_lengths(plan)
    y = transform(np.zeros(20), plan, build_time_encoding(20, 0.0, phases), "hdc")
    np.testing.assert_array_equal(y, -T_i)
    assert np.all(transform(np.zeros(20), plan, mode="ppv") == 0)


def test_scale_zero_identity(small_ds, small_plan, phases):
    enc = build_time_encoding(small_ds.length, 0.0, phases)
    T_i = effective_lengths(small_plan)
    ppv = transform_batch(small_ds.series, small_plan, mode="ppv")
    hdc = transform_batch(small_ds.series, small_plan, enc, "hdc")
    pos = np.rint(ppv * T_i)
    np.testing.assert_array_equal(hdc, 2 * pos - T_i)
    np.testing.assert_allclose((hdc + T_i) / (2 * T_i), ppv, rtol=0, atol=1e-15)


def test_effective_lengths(small_plan):
    T = small_plan.input_length
    T_i = effective_lengths(small_plan)
    offsets = small_plan.group_offsets()
    for k in (0, 1, 50):
        for j, d in enumerate(small_plan.schedule.dilations):
            expect = T if (k + j) % 2 == 0 else T - 8 * int(d)
            assert np.all(T_i[offsets[k, j] : offsets[k, j + 1]] == expect)


def test_errors(small_plan, phases):
    with pytest.raises(LengthMismatch):
        transform(np.zeros(small_plan.input_length + 1), small_plan, mode="ppv")
    with pytest.raises(MissingEncoding):
        transform(np.zeros(small_plan.input_length), small_plan, None, "hdc")
    wrong = build_time_encoding(small_plan.input_length + 2, 1.0, phases)
    with pytest.raises(LengthMismatch):
        transform(np.zeros(small_plan.input_length), small_plan, wrong, "hdc")
    with pytest.raises(ValueError):
        transform(np.zeros(small_plan.input_length), small_plan, mode="bogus")


def test_batch_empty_rows_and_permutation(small_ds, small_plan, phases):
    T = small_ds.length
    enc = build_time_encoding(T, 2.0, phases)
    assert transform_batch(np.zeros((0, T)), small_plan, enc, "hdc").shape == (0, D)
    assert transform_batch(np.zeros((0, T)), small_plan, mode="ppv").shape == (0, D)
    Y = transform_batch(small_ds.series, small_plan, enc, "hdc")
    for j in (0, 5, len(small_ds) - 1):
        np.testing.assert_allclose(Y[j], transform(small_ds.series[j], small_plan, enc, "hdc"), rtol=1e-12, atol=1e-12)
    perm = np.random.default_rng(0).permutation(len(small_ds))
    np.testing.assert_allclose(transform_batch(small_ds.series[perm], small_plan, enc, "hdc"), Y[perm], rtol=1e-12, atol=1e-12)


def test_batch_independent_of_labels(small_ds, small_plan):
    a = transform_batch(small_ds, small_plan, mode="ppv")
    b = transform_batch(small_ds.series, small_plan, mode="ppv")
    np.testing.assert_array_equal(a, b)


def test_multi_scale_matches_single(small_ds, small_plan, phases):
    tables = [build_time_encoding(small_ds.length, s, phases) for s in (0.0, 1.0, 4.0)]
    Y = transform_batch_scales(small_ds.series, small_plan, tables)
    assert Y.shape == (3, len(small_ds), D)
    for q, enc in enumerate(tables):
        single = transform_batch(small_ds.series, small_plan, enc, "hdc")
        np.testing.assert_allclose(Y[q], single, rtol=1e-11, atol=1e-11)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.0, max_value=20.0), st.floats(min_value=0.0, max_value=20.0))
def test_similarity_translation_invariant(phases, p1, p2):
    M = fractional_power_matrix(phases, [p1, p2])
    assert float(M[0] @ M[1]) == pytest.approx(cos_similarity(phases, p1 - p2), abs=1e-9)
