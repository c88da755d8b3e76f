import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import attention_loops, window_indices

from zsvariation.conditioning import (
    AttentionWeights,
    ConditioningError,
    SamplerConfig,
    WindowConfig,
    attention_probs,
    cross_attention,
    first_divergence,
    gated_sample,
    style_encode,
    window_attention,
    window_partition,
)

rng = np.random.default_rng(7)


# -- partition ----------------------------------------------------------------

def test_single_window():
    fm = rng.standard_normal((3, 4, 4))
    wins = window_partition(fm, WindowConfig(4))
    assert len(wins) == 1 and wins[0].shape == (16, 3)


def test_four_windows_match_enumerated_indices():
    fm = rng.standard_normal((3, 4, 4))
    wins = window_partition(fm, WindowConfig(2))
    assert len(wins) == 4
    for win, idx in zip(wins, window_indices(4, 4, 2)):
        expected = np.array([fm[:, y, x] for y, x in idx])
        np.testing.assert_array_equal(win, expected)


def test_non_divisible_errors():
    with pytest.raises(ConditioningError):
        window_partition(np.zeros((1, 5, 4)), WindowConfig(2))


@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_partition_is_bijection(c, nh, nw, ws):
    h, w = nh * ws, nw * ws
    fm = np.arange(c * h * w, dtype=float).reshape(c, h, w)
    tokens = np.concatenate(window_partition(fm, WindowConfig(ws)))
    spatial = fm.reshape(c, -1).T
    assert tokens.shape == spatial.shape
    assert sorted(map(tuple, tokens)) == sorted(map(tuple, spatial))


# -- attention ----------------------------------------------------------------

def test_mean_pool_weights_give_window_mean():
    tokens = rng.standard_normal((5, 3))
    out = window_attention(tokens, AttentionWeights.mean_pool(3))
    np.testing.assert_allclose(out, np.tile(tokens.mean(axis=0), (5, 1)), atol=1e-15)


def test_singleton_window_identity_values():
    w = AttentionWeights.from_seed(4, 1)
    w = AttentionWeights(w.wq, w.wk, np.eye(4))
    tok = rng.standard_normal((1, 4))
    np.testing.assert_allclose(window_attention(tok, w), tok, atol=1e-15)


def test_window_attention_matches_loops():
    w = AttentionWeights.from_seed(5, 3)
    tokens = rng.standard_normal((4, 5))
    ref, _ = attention_loops(tokens.tolist(), tokens.tolist(), w.wq.tolist(), w.wk.tolist(), w.wv.tolist())
    np.testing.assert_allclose(window_attention(tokens, w), ref, atol=1e-9, rtol=0)


def test_cross_attention_examples():
    w = AttentionWeights.from_seed(4, 11)
    w_id = AttentionWeights(w.wq, w.wk, np.eye(4))
    q = rng.standard_normal((3, 4))
    c = rng.standard_normal((1, 4))
    np.testing.assert_allclose(cross_attention(q, c, w_id), np.tile(c, (3, 1)), atol=1e-15)
    np.testing.assert_allclose(cross_attention(q, np.vstack([c, c]), w), cross_attention(q, c, w), atol=1e-14)


def test_cross_attention_matches_loops():
    w = AttentionWeights.from_seed(6, 5)
    q, c = rng.standard_normal((3, 6)), rng.standard_normal((5, 6))
    ref, ref_p = attention_loops(q.tolist(), c.tolist(), w.wq.tolist(), w.wk.tolist(), w.wv.tolist())
    np.testing.assert_allclose(cross_attention(q, c, w), ref, atol=1e-9, rtol=0)
    np.testing.assert_allclose(attention_probs(q, c, w), ref_p, atol=1e-12)


def test_cross_attention_dim_mismatch():
    w = AttentionWeights.from_seed(4, 0)
    with pytest.raises(ConditioningError):
        cross_attention(np.zeros((2, 4)), np.zeros((2, 3)), w)


def test_weights_reproducible_from_seed():
    a, b = AttentionWeights.from_seed(8, 42), AttentionWeights.from_seed(8, 42)
    for x, y in ((a.wq, b.wq), (a.wk, b.wk), (a.wv, b.wv)):
        np.testing.assert_array_equal(x, y)
    assert not np.array_equal(a.wq, AttentionWeights.from_seed(8, 43).wq)


# -- style encoder ------------------------------------------------------------

def test_identical_windows_give_identical_blocks():
    block = rng.standard_normal((3, 2, 2))
    fm = np.concatenate([block, block], axis=2)  # 3 x 2 x 4: two equal windows
    out = style_encode(fm, WindowConfig(2), AttentionWeights.from_seed(3, 2))
    np.testing.assert_array_equal(out[:4], out[4:])


def test_permuting_inside_window_with_mean_pool():
    fm = rng.standard_normal((3, 2, 4))
    w = AttentionWeights.mean_pool(3)
    base = style_encode(fm, WindowConfig(2), w)
    fm2 = fm.copy()
    fm2[:, 0, 0], fm2[:, 1, 1] = fm[:, 1, 1].copy(), fm[:, 0, 0].copy()
    np.testing.assert_allclose(style_encode(fm2, WindowConfig(2), w), base, atol=1e-15)


def test_editing_window_two_leaves_window_one():
    fm = rng.standard_normal((3, 2, 4))
    w = AttentionWeights.from_seed(3, 9)
    base = style_encode(fm, WindowConfig(2), w)
    fm2 = fm.copy()
    fm2[:, :, 2:] += 5.0
    out = style_encode(fm2, WindowConfig(2), w)
    np.testing.assert_array_equal(out[:4], base[:4])
    assert not np.allclose(out[4:], base[4:])


# -- gated sampler ------------------------------------------------------------

def test_sampler_config_defaults_and_validation():
    cfg = SamplerConfig()
    assert (cfg.total_steps, cfg.gate_step, cfg.alpha, cfg.beta) == (50, 30, 0.95, 0.05)
    assert cfg.total_steps - cfg.gate_step == 20
    with pytest.raises(ConditioningError):
        SamplerConfig(total_steps=10, gate_step=11)


def test_gate_never_opens():
    w = AttentionWeights.from_seed(4, 0)
    init = rng.standard_normal((3, 4))
    cfg = SamplerConfig(total_steps=20, gate_step=20)
    a = gated_sample(init, rng.standard_normal((2, 4)), cfg, w)
    b = gated_sample(init, rng.standard_normal((5, 4)), cfg, w)
    assert len(a) == 21
    np.testing.assert_array_equal(a[-1].latent, b[-1].latent)
    np.testing.assert_allclose(a[-1].latent, 0.95**20 * init, rtol=1e-12)


def test_determinism():
    w = AttentionWeights.from_seed(4, 0)
    init, c = rng.standard_normal((3, 4)), rng.standard_normal((2, 4))
    a, b = gated_sample(init, c, SamplerConfig(), w), gated_sample(init, c, SamplerConfig(), w)
    assert first_divergence(a, b) is None


def test_first_divergence_at_31():
    w = AttentionWeights.from_seed(8, 7)
    init = rng.standard_normal((4, 8))
    a = gated_sample(init, rng.standard_normal((4, 8)), SamplerConfig(), w)
    b = gated_sample(init, rng.standard_normal((4, 8)), SamplerConfig(), w)
    assert [s.t for s in a] == list(range(51))
    assert first_divergence(a, b) == 31


def test_divergent_trajectory_raises():
    w = AttentionWeights.from_seed(2, 0)
    with pytest.raises(ConditioningError):
        gated_sample(np.ones((1, 2)), np.ones((1, 2)), SamplerConfig(total_steps=50, gate_step=0, alpha=1e10), w)


@settings(max_examples=30)
@given(st.integers(1, 20), st.data(), st.integers(0, 10_000))
def test_prefix_equality(total, data, seed):
    gate = data.draw(st.integers(0, total))
    r = np.random.default_rng(seed)
    w = AttentionWeights.from_seed(3, seed)
    init = r.standard_normal((2, 3))
    a = gated_sample(init, r.standard_normal((2, 3)), SamplerConfig(total, gate), w)
    b = gated_sample(init, r.standard_normal((3, 3)), SamplerConfig(total, gate), w)
    for sa, sb in zip(a[: gate + 1], b[: gate + 1]):
        np.testing.assert_array_equal(sa.latent, sb.latent)
