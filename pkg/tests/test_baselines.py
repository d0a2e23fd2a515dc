import itertools

import numpy as np
import pytest

from gfdec.baselines import (
    BpParams,
    GdbfParams,
    bp_decode,
    bp_decode_batch,
    gdbf_decode,
    gdbf_decode_batch,
    gdbf_inversion,
    gdbf_objective,
    gdbf_step,
)
from gfdec.channel import sigma_from_snr, transmit, trial_rng
from gfdec.codes import (
    binary_to_bipolar,
    build_encoder,
    hard_decision,
    random_codeword,
    syndrome,
)


def test_param_validation():
    with pytest.raises(ValueError):
        BpParams(max_iterations=0)
    with pytest.raises(ValueError):
        GdbfParams(theta=0.5)
    with pytest.raises(ValueError):
        GdbfParams(mode="weird")
    GdbfParams(theta=0.0)


def test_bp_noiseless_zero_iterations(code96):
    rng = np.random.default_rng(2)
    enc = build_encoder(code96)
    bits = random_codeword(enc, rng)
    y = binary_to_bipolar(bits).astype(np.float64)
    res = bp_decode(code96, y, sigma=0.5)
    assert res.syndrome_ok and res.iterations == 0
    assert np.array_equal(res.hard_word, bits)


def test_bp_corrects_mild_noise(code96):
    rng = np.random.default_rng(3)
    enc = build_encoder(code96)
    sigma = sigma_from_snr(5.0, enc.k / code96.n)
    wrong = 0
    for t in range(40):
        bits = random_codeword(enc, rng)
        y = transmit(binary_to_bipolar(bits), sigma, rng)
        res = bp_decode(code96, y, sigma)
        if not (res.syndrome_ok and np.array_equal(res.hard_word, bits)):
            wrong += 1
    assert wrong <= 1


def test_bp_message_clipping_keeps_llrs_finite(repetition):
    # a strongly saturated input drives tanh(0.5*v2c) to 1.0, where arctanh
    # blows up; the clamp must keep everything finite without fp warnings
    res = bp_decode(repetition, np.array([12.0, 12.0]), sigma=0.1,
                    params=BpParams(early_stop=False, max_iterations=5))
    assert res.syndrome_ok
    assert np.all(np.isfinite(res.final_state))
    assert np.max(np.abs(res.final_state)) <= 2.0 * 12.0 / 0.01 + 30.0


def test_bp_batch_matches_single(code96):
    rng = np.random.default_rng(11)
    enc = build_encoder(code96)
    sigma = 0.7
    Y = np.stack(
        [transmit(binary_to_bipolar(random_codeword(enc, rng)), sigma, rng) for _ in range(5)]
    )
    P, I, C = bp_decode_batch(code96, Y, sigma)
    for b in range(5):
        res = bp_decode(code96, Y[b], sigma)
        assert np.array_equal(res.final_state, P[b])
        assert res.iterations == I[b]
        assert res.syndrome_ok == C[b]


def test_bp_early_stop_off_runs_all_iterations(code96):
    rng = np.random.default_rng(13)
    enc = build_encoder(code96)
    y = transmit(binary_to_bipolar(random_codeword(enc, rng)), 0.3, rng)
    on = bp_decode(code96, y, 0.3, BpParams(max_iterations=20))
    off = bp_decode(code96, y, 0.3, BpParams(max_iterations=20, early_stop=False))
    assert on.syndrome_ok and off.syndrome_ok
    assert on.iterations < off.iterations == 20
    assert np.array_equal(on.hard_word, off.hard_word)


def test_gdbf_objective_hand_value(repetition):
    x = np.array([1.0, -1.0])
    y = np.array([0.4, 0.2])
    # x.y = 0.2, single check product = -1
    assert gdbf_objective(repetition, x, y) == pytest.approx(0.2 - 1.0)


def test_gdbf_inversion_hand_value(repetition):
    x = np.array([-1.0, 1.0])
    y = np.array([-0.3, 0.9])
    delta = gdbf_inversion(repetition, x, y)
    # z = -1 for the single check; delta_k = x_k y_k + z
    assert np.allclose(delta, [0.3 - 1.0, 0.9 - 1.0])


def test_gdbf_multibit_flip_step(repetition):
    y = np.array([-0.3, 0.9])
    x = np.sign(y)
    # delta = (-0.7, -0.1); only bit 0 clears theta = -0.6
    new_x, n_flips, fallback = gdbf_step(repetition, x, y, theta=-0.6)
    assert not fallback
    assert n_flips == 1
    assert np.array_equal(new_x, [1.0, 1.0])


def test_gdbf_fallback_flips_argmin(repetition):
    y = np.array([-2.0, 0.9])
    x = np.sign(y)  # (-1, 1), parity unsatisfied; delta = (1.0, -0.1)
    new_x, n_flips, fallback = gdbf_step(repetition, x, y, theta=-0.6)
    assert fallback
    assert n_flips == 1
    assert np.array_equal(new_x, [-1.0, -1.0])
    # objective 1.9 -> 2.1: the forced flip of the weakest bit still climbs
    assert gdbf_objective(repetition, x, y) == pytest.approx(1.9)
    assert gdbf_objective(repetition, new_x, y) == pytest.approx(2.1)


def test_gdbf_single_flip_objective_identity(code96):
    # flipping bit k alone changes the objective by exactly -2 * delta_k
    rng = np.random.default_rng(17)
    y = rng.standard_normal(code96.n)
    x = np.sign(y)
    delta = gdbf_inversion(code96, x, y)
    base = gdbf_objective(code96, x, y)
    for k in rng.choice(code96.n, size=8, replace=False):
        x2 = x.copy()
        x2[k] = -x2[k]
        assert gdbf_objective(code96, x2, y) == pytest.approx(base - 2.0 * delta[k], rel=1e-12)


def test_gdbf_noiseless_converges_immediately(code96):
    rng = np.random.default_rng(19)
    enc = build_encoder(code96)
    bits = random_codeword(enc, rng)
    y = binary_to_bipolar(bits).astype(np.float64)
    res = gdbf_decode(code96, y)
    assert res.syndrome_ok and res.iterations == 0
    assert np.array_equal(res.hard_word, bits)


def test_gdbf_states_stay_bipolar_and_batch_matches_single(code96):
    rng = np.random.default_rng(23)
    enc = build_encoder(code96)
    sigma = 0.8
    Y = np.stack(
        [transmit(binary_to_bipolar(random_codeword(enc, rng)), sigma, rng) for _ in range(6)]
    )
    X, I, C = gdbf_decode_batch(code96, Y)
    assert set(np.unique(X)) <= {-1.0, 1.0}
    for b in range(6):
        res = gdbf_decode(code96, Y[b])
        assert np.array_equal(res.final_state, X[b])
        assert res.iterations == I[b]
        assert res.syndrome_ok == C[b]


def test_gdbf_corrects_mild_noise(code96):
    rng = np.random.default_rng(29)
    enc = build_encoder(code96)
    sigma = sigma_from_snr(7.0, enc.k / code96.n)
    wrong = 0
    for t in range(40):
        bits = random_codeword(enc, rng)
        y = transmit(binary_to_bipolar(bits), sigma, rng)
        res = gdbf_decode(code96, y)
        if not (res.syndrome_ok and np.array_equal(res.hard_word, bits)):
            wrong += 1
    assert wrong <= 2


def test_no_decoder_beats_maximum_likelihood(worked_3x6):
    # exhaustive ML on the tiny code lower-bounds every decoder's WER under
    # matched noise
    enc = build_encoder(worked_3x6)
    n = worked_3x6.n
    words = []
    for bits in itertools.product((0, 1), repeat=n):
        arr = np.array(bits, dtype=np.uint8)
        if not syndrome(worked_3x6, arr).any():
            words.append(arr)
    assert len(words) == 2 ** enc.k
    book = binary_to_bipolar(np.array(words))
    sigma = 0.7
    trials = 400
    ml_err = bp_err = gd_err = 0
    for t in range(trials):
        rng = trial_rng(777, t)
        bits = random_codeword(enc, rng)
        y = transmit(binary_to_bipolar(bits), sigma, rng)
        pick = words[int(np.argmin(np.sum((book - y) ** 2, axis=1)))]
        ml_err += not np.array_equal(pick, bits)
        bp = bp_decode(worked_3x6, y, sigma)
        bp_err += not np.array_equal(bp.hard_word, bits)
        gd = gdbf_decode(worked_3x6, y)
        gd_err += not np.array_equal(gd.hard_word, bits)
    assert ml_err <= bp_err
    assert ml_err <= gd_err
