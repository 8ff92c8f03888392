import math
from fractions import Fraction

import numpy as np
import pytest

from latbabai.babai import nearest_plane
from latbabai.core import as_basis, qr_upper
from latbabai.lattices import BCC_UNIT, HEXAGONAL_2D
from latbabai.protocol import (
    IrrationalRatioError,
    NodeMessage,
    ProtocolModel,
    RationalProfile,
    _s_by_loop,
    centralized_rate_bound,
    centralized_total_rate,
    fusion_decode,
    gaussian_source,
    interactive_rate_approximation,
    interactive_simulate,
    modular_decode_check,
    node_encode,
    rationalize,
    run_centralized,
    uniform_source,
)
from latbabai.protocol import _varint_bits

EXAMPLE_5 = np.array([[1.0, 0.4], [0.0, 2.0]])
EXAMPLE_7 = np.array([[1.0, 0.311], [0.0, 1.01]])


def _hex_R():
    _, R = qr_upper(as_basis(HEXAGONAL_2D))
    return R


def test_rationalize_hexagonal_profile():
    prof = rationalize(_hex_R())
    assert prof.n == 2
    assert prof.ratio(0, 1) == Fraction(1, 2)
    assert prof.q == (2, 1)
    assert prof.q_hat[(0, 1)] == 1
    assert prof.rate_bound_bits == pytest.approx(1.0, abs=1e-12)


def test_rationalize_example_lattices():
    assert rationalize(EXAMPLE_5).q == (5, 1)
    p7 = rationalize(EXAMPLE_7)
    assert p7.q == (1000, 1)
    assert p7.ratio(0, 1) == Fraction(311, 1000)
    _, Rb = qr_upper(as_basis(BCC_UNIT))
    assert rationalize(Rb).q == (3, 2, 1)


def test_rationalize_scale_invariance():
    R = _hex_R()
    for alpha in (0.37, 2.0, 2**-8):
        assert rationalize(alpha * R) == rationalize(R)


def test_rationalize_rejects_near_rational_trap():
    # 1/3 + 1e-8 sits in a Farey gap: no denominator <= 1e6 lands within 1e-9
    R = np.array([[1.0, 1.0 / 3.0 + 1e-8], [0.0, 1.0]])
    with pytest.raises(IrrationalRatioError):
        rationalize(R)


def test_rationalize_absorbs_generic_irrational():
    # pi/4 has a continued-fraction convergent within 1e-9 below the cap
    R = np.array([[1.0, np.pi / 4.0], [0.0, 1.0]])
    prof = rationalize(R)
    assert abs(float(prof.ratio(0, 1)) - np.pi / 4.0) <= 1e-9


def test_profile_invariants_enforced():
    with pytest.raises(ValueError):
        RationalProfile(n=2, p={(0, 1): 2}, den={(0, 1): 4}, q=(4, 1), q_hat={(0, 1): 1})
    with pytest.raises(ValueError):
        RationalProfile(n=2, p={(0, 1): 1}, den={(0, 1): 3}, q=(4, 1), q_hat={(0, 1): 1})
    with pytest.raises(ValueError):
        RationalProfile(n=2, p={(0, 1): 1}, den={(0, 1): 2}, q=(2, 2), q_hat={(0, 1): 1})


def test_node_encode_closed_form_matches_loop():
    rng = np.random.default_rng(61)
    for q in (2, 3, 5, 7, 1000):
        for t in rng.uniform(-3, 3, size=40):
            s_loop = _s_by_loop(float(t), q)
            frac = t - math.floor(t + 0.5)
            s_closed = min(max(int(math.floor(q * (frac + 0.5))), 0), q - 1)
            assert s_closed == s_loop, (q, t)


def test_node_encode_examples():
    p7 = rationalize(EXAMPLE_7)
    msg = node_encode(0, 1.0, EXAMPLE_7, p7)
    assert msg == NodeMessage(node=0, b_tilde=1, s=500)
    # last node has q = 1 and always sends s = 0
    msg_last = node_encode(1, 1.0, EXAMPLE_7, p7)
    assert msg_last.s == 0
    # hexagonal, t = 0.3: shift absorbed up to s = floor(2 * 0.8) = 1
    ph = rationalize(_hex_R())
    assert node_encode(0, 0.3, _hex_R(), ph).s == 1


def test_fusion_decode_equals_nearest_plane():
    rng = np.random.default_rng(67)
    for V in (HEXAGONAL_2D, BCC_UNIT, EXAMPLE_5, EXAMPLE_7):
        _, R = qr_upper(as_basis(V))
        prof = rationalize(R)
        n = R.shape[0]
        X = rng.uniform(-8, 8, size=(2000, n))
        for x in X:
            msgs = [node_encode(m, x[m], R, prof) for m in range(n)]
            assert np.array_equal(fusion_decode(msgs, R, prof), nearest_plane(R, x))


def test_fusion_decode_message_validation():
    R = _hex_R()
    prof = rationalize(R)
    msgs = [node_encode(m, 0.2, R, prof) for m in range(2)]
    with pytest.raises(ValueError):
        fusion_decode(msgs + [msgs[0]], R, prof)
    with pytest.raises(ValueError):
        fusion_decode(msgs[:1], R, prof)


def test_fusion_decode_knife_edge():
    # correction fraction boundary at frac = s_N/q - 1/2 = 1/5 - 1/2 = -3/10:
    # exactly on it the shift is still absorbed, just below it is not.
    # (nearest_plane is only consulted off the boundary: at frac = -0.3 the
    # float product 0.4 * 3 overshoots by one ulp and flips its rounding,
    # while the fusion path works in exact integers.)
    prof = rationalize(EXAMPLE_5)
    for x1, expect_b1 in ((-0.3, -1), (-0.3 - 1e-7, -2)):
        x = np.array([x1, 6.0])
        msgs = [node_encode(m, x[m], EXAMPLE_5, prof) for m in range(2)]
        b = fusion_decode(msgs, EXAMPLE_5, prof)
        assert b[1] == 3 and b[0] == expect_b1
    assert np.array_equal(
        fusion_decode(
            [node_encode(m, x, EXAMPLE_5, prof) for m, x in enumerate((-0.3 - 1e-7, 6.0))],
            EXAMPLE_5,
            prof,
        ),
        nearest_plane(EXAMPLE_5, np.array([-0.3 - 1e-7, 6.0])),
    )


def test_fusion_decode_dyadic_knife_edge_exact():
    # ratio 1/4 keeps every quantity dyadic, so the float and exact-integer
    # paths agree even exactly on the boundary frac = 3/4 - 1/2 = 1/4
    V = np.array([[1.0, 0.25], [0.0, 2.0]])
    prof = rationalize(V)
    assert prof.q == (4, 1)
    for x1, expect_b1 in ((0.25, 0), (0.25 - 1e-7, -1)):
        x = np.array([x1, 6.0])
        msgs = [node_encode(m, x[m], V, prof) for m in range(2)]
        b = fusion_decode(msgs, V, prof)
        assert np.array_equal(b, nearest_plane(V, x))
        assert b[1] == 3 and b[0] == expect_b1


def test_modular_decode_check_agrees():
    rng = np.random.default_rng(71)
    for V in (HEXAGONAL_2D, BCC_UNIT, EXAMPLE_5, EXAMPLE_7):
        _, R = qr_upper(as_basis(V))
        prof = rationalize(R)
        for _ in range(200):
            x = rng.uniform(-6, 6, size=R.shape[0])
            assert modular_decode_check(R, prof, x)


def test_rate_bounds():
    assert centralized_rate_bound(rationalize(_hex_R())) == pytest.approx(1.0, abs=1e-12)
    assert centralized_rate_bound(rationalize(EXAMPLE_7)) == pytest.approx(math.log2(1000), abs=1e-12)
    _, Rb = qr_upper(as_basis(BCC_UNIT))
    assert centralized_rate_bound(rationalize(Rb)) == pytest.approx(math.log2(6), abs=1e-12)


def test_source_models():
    u = uniform_source(0.0, 4.0)
    assert u.differential_entropy_bits == pytest.approx(2.0, abs=1e-12)
    g = gaussian_source(sigma=1.0)
    assert g.differential_entropy_bits == pytest.approx(0.5 * math.log2(2 * math.pi * math.e), abs=1e-12)
    rng = np.random.default_rng(3)
    xs = u.sample(rng, 1000)
    assert xs.min() >= 0.0 and xs.max() <= 4.0
    with pytest.raises(ValueError):
        uniform_source(1.0, 1.0)
    with pytest.raises(ValueError):
        gaussian_source(sigma=0.0)


def test_source_entropy_matches_histogram():
    # discrete entropy of a fine binning is about h + log2(bins/width)
    rng = np.random.default_rng(5)
    for src in (uniform_source(0.0, 2.0), gaussian_source(sigma=0.7)):
        xs = src.sample(rng, 400000)
        lo, hi = xs.min(), xs.max()
        bins = 512
        counts, _ = np.histogram(xs, bins=bins, range=(lo, hi))
        freq = counts[counts > 0] / counts.sum()
        h_disc = -(freq * np.log2(freq)).sum()
        h_diff = h_disc + math.log2((hi - lo) / bins)
        assert abs(h_diff - src.differential_entropy_bits) < 0.05


def test_varint_bits():
    assert _varint_bits(0) == 8
    assert _varint_bits(63) == 8
    assert _varint_bits(64) == 16
    assert _varint_bits(-64) == 8
    assert _varint_bits(-65) == 16


def test_run_centralized_trace():
    x = np.array([0.7, -1.3])
    trace = run_centralized(HEXAGONAL_2D, x, alpha=1.0)
    _, R = qr_upper(as_basis(HEXAGONAL_2D))
    assert np.array_equal(trace.decoded, nearest_plane(R, x))
    assert trace.model is ProtocolModel.CENTRALIZED
    assert trace.bits_integer_part % 8 == 0 and trace.bits_integer_part >= 16
    assert trace.bits_side_info == pytest.approx(1.0, abs=1e-12)
    assert trace.scale == 1.0
    with pytest.raises(ValueError):
        run_centralized(HEXAGONAL_2D, x, alpha=0.0)


def test_centralized_total_rate_bound_formula():
    srcs = [uniform_source(0.0, 1.0)] * 2
    alpha = 2**-8
    rep = centralized_total_rate(srcs, HEXAGONAL_2D, alpha=alpha)
    det = abs(np.linalg.det(as_basis(HEXAGONAL_2D)))
    manual = 0.0 - math.log2(det) - 2 * math.log2(alpha) + 1.0
    assert rep.bound_bits == pytest.approx(manual, abs=1e-12)
    assert rep.side_info_bits == pytest.approx(1.0, abs=1e-12)
    assert rep.empirical_bits is None


def test_centralized_total_rate_alpha_scaling():
    # halving alpha refines each of n quantizers by one bit; side info fixed
    srcs = [uniform_source(0.0, 1.0)] * 2
    r1 = centralized_total_rate(srcs, HEXAGONAL_2D, alpha=2**-8)
    r2 = centralized_total_rate(srcs, HEXAGONAL_2D, alpha=2**-9)
    assert r2.bound_bits - r1.bound_bits == pytest.approx(2.0, abs=1e-12)
    assert r2.side_info_bits == r1.side_info_bits


def test_centralized_total_rate_empirical_close_to_bound():
    srcs = [uniform_source(0.0, 1.0)] * 2
    rep = centralized_total_rate(srcs, HEXAGONAL_2D, alpha=2**-8, samples=100000, seed=31)
    assert rep.empirical_bits is not None
    assert abs(rep.empirical_bits - rep.bound_bits) < 0.2 * 2


def test_interactive_rate_approximation_formula():
    srcs = [uniform_source(0.0, 1.0)] * 2
    alpha = 2**-8
    _, R = qr_upper(as_basis(HEXAGONAL_2D))
    manual = (2 - 1) * sum(0.0 - math.log2(alpha * R[i, i]) for i in range(2))
    assert interactive_rate_approximation(srcs, HEXAGONAL_2D, alpha) == pytest.approx(manual, abs=1e-12)


def test_interactive_simulate_agreement_and_rate():
    srcs = [uniform_source(0.0, 1.0)] * 2
    alpha = 2**-8
    trace, rate = interactive_simulate(srcs, HEXAGONAL_2D, alpha, samples=200000, seed=17)
    assert trace.model is ProtocolModel.INTERACTIVE
    assert trace.bits_side_info == 0.0
    approx = interactive_rate_approximation(srcs, HEXAGONAL_2D, alpha)
    assert abs(rate - approx) / 2 < 0.3


def test_interactive_simulate_guards():
    srcs = [uniform_source(0.0, 1.0)] * 2
    with pytest.raises(ValueError):
        interactive_simulate(srcs, HEXAGONAL_2D, 2**-8, samples=50)
    with pytest.raises(ValueError):
        interactive_simulate(srcs, HEXAGONAL_2D, 0.0, samples=200)
    with pytest.raises(ValueError):
        interactive_simulate(srcs[:1], HEXAGONAL_2D, 2**-8, samples=200)
