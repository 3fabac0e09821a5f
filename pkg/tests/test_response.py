import numpy as np
import pytest

from treewave import PotentialProfile, interval, star
from treewave.errors import NonDecaying, TooManyRays
from treewave.forward import tw_matrix
from treewave.response import (ResponseEntry, fourier_of_response, mollifier_bump,
                               mollifier_cdf, ray_singular_train, ray_trains,
                               response_matrix)
from treewave.sampling import SampledFunction
from treewave.trains import DELTA, DPRIME, SingularTrain


def test_single_edge_diagonal_atoms():
    t = interval(1.0)
    train = ray_singular_train(t, "g1", "g1", 3.0)
    assert [(a[0], a[1], a[2]) for a in train] == [
        (0.0, -1.0, DPRIME), (2.0, -2.0, DPRIME)]


def test_single_edge_offdiagonal_atoms():
    t = interval(1.0)
    train = ray_singular_train(t, "g1", "g2", 3.5)
    assert [(a[0], a[1], a[2]) for a in train] == [
        (1.0, 2.0, DPRIME), (3.0, 2.0, DPRIME)]


def test_star_single_transmission_coefficient(star123):
    train = ray_singular_train(star123, "g1", "g2", 3.5)
    assert len(train) == 1
    t0, c, order = train.atoms[0]
    assert t0 == pytest.approx(3.0)
    assert order == DPRIME
    assert c == pytest.approx(4.0 / 3.0)  # 2 (receiver) * 2/3 (transmission)


def test_empty_before_first_arrival(star123):
    assert ray_singular_train(star123, "g1", "g2", 2.9).is_empty()


def test_path_reversal_symmetry(star123, five_edge_q):
    for tree, a, b in ((star123, "g1", "g2"), (five_edge_q, "g1", "g3")):
        ab = ray_singular_train(tree, a, b, 7.0)
        ba = ray_singular_train(tree, b, a, 7.0)
        assert len(ab) == len(ba)
        for (t1, c1, o1), (t2, c2, o2) in zip(ab, ba):
            assert t1 == pytest.approx(t2, abs=1e-12)
            assert c1 == pytest.approx(c2, rel=1e-12)
            assert o1 == o2


def test_diagonal_first_return_at_2l(five_edge):
    for g, l in (("g1", 0.5), ("g2", 0.7), ("g3", 0.8)):
        train = ray_singular_train(five_edge, g, g, 4.0)
        positive = [a for a in train if a[0] > 0]
        assert positive[0][0] == pytest.approx(2 * l)


def test_delta_atoms_carry_path_q_integral():
    q = PotentialProfile.constant(1.3)
    t = interval(1.0, q=q)
    train = ray_singular_train(t, "g1", "g2", 3.5)
    # arrivals at l and 3l with delta coefficients -Q = -1.3 and -3*1.3
    want = [(1.0, -1.3, DELTA), (1.0, 2.0, DPRIME), (3.0, -3.9, DELTA), (3.0, 2.0, DPRIME)]
    got = sorted(train.atoms, key=lambda a: (a[0], a[2]))
    for (t1, c1, o1), (t2, c2, o2) in zip(got, want):
        assert t1 == pytest.approx(t2)
        assert c1 == pytest.approx(c2)
        assert o1 == o2


def test_ray_budget_guard(star123):
    with pytest.raises(TooManyRays):
        ray_trains(star123, "g1", 100.0, budget=50)


def test_response_regulars_vanish_for_zero_q(star123):
    R = response_matrix(star123, T=5.0, dx=1 / 100)
    scale = max(np.max(np.abs(e.regular.values)) + 1e-30 for e in R.entries.values())
    # pure transport is exact under the magic step and the subtraction uses
    # the same discrete stencil, so only rounding noise survives
    spike = 1.0 / R.meta["mollifier_width"] ** 2
    assert scale < 1e-9 * spike


def test_response_reciprocity(five_edge_q):
    R = response_matrix(five_edge_q, T=4.0, dx=1 / 100)
    r12 = R.entry("g1", "g2")
    r21 = R.entry("g2", "g1")
    assert len(r12.train) == len(r21.train)
    for (t1, c1, o1), (t2, c2, o2) in zip(r12.train, r21.train):
        assert t1 == pytest.approx(t2, abs=1e-12)
        assert c1 == pytest.approx(c2, rel=1e-12)
    diff = np.linalg.norm(r12.regular.values - r21.regular.values)
    assert diff < 1e-2 * max(np.linalg.norm(r12.regular.values), 1e-12)


def test_response_born_linearity():
    # leading regular part scales linearly in a small constant q
    outs = []
    for c in (0.05, 0.1):
        t = interval(1.0, q=PotentialProfile.constant(c))
        R = response_matrix(t, T=1.8, dx=1 / 200)
        reg = R.entry("g1", "g1").regular
        sl = slice(reg.slot(0.3), reg.slot(1.5))
        outs.append(reg.values[sl])
    ratio = np.linalg.norm(outs[1]) / np.linalg.norm(outs[0])
    assert ratio == pytest.approx(2.0, rel=0.05)


def test_fourier_atom_transforms():
    k = 1.0 + 2.0j
    train = SingularTrain.of([(0.7, 2.5, DPRIME)])
    entry = ResponseEntry(train, SampledFunction.zeros(0.01, 1.0))
    val, _ = fourier_of_response(entry, k, 1.0)
    assert val == pytest.approx(2.5 * (-1j * k) * np.exp(1j * k * 0.7))
    entry0 = ResponseEntry(SingularTrain(), SampledFunction.zeros(0.01, 1.0))
    val0, _ = fourier_of_response(entry0, k, 1.0)
    assert val0 == 0
    with pytest.raises(NonDecaying):
        fourier_of_response(entry, 1.0 + 0j, 1.0)


def test_fourier_bridge_single_edge():
    t = interval(1.0)
    T = 14.0
    train = ray_singular_train(t, "g1", "g1", T)
    entry = ResponseEntry(train, SampledFunction.zeros(0.01, T))
    k = 2.0j
    val, tail = fourier_of_response(entry, k, T)
    M = tw_matrix(t, complex(k * k))[0, 0]
    assert abs(val - M) <= 2 * tail
    assert abs(val - M) < 1e-4


def test_fourier_bridge_single_edge_with_q():
    # the delta atoms are required for the bridge to hold when q != 0
    q = PotentialProfile.constant(0.8)
    t = interval(1.0, q=q)
    T = 20.0
    train = ray_singular_train(t, "g1", "g1", T)
    R = response_matrix(t, T=T, dx=1 / 100)
    entry = ResponseEntry(train, R.entry("g1", "g1").regular)
    k = 1.5j
    val, tail = fourier_of_response(entry, k, T)
    M = tw_matrix(t, complex(k * k))[0, 0]
    # the stored regular part is mollified, so its transform carries the
    # mollifier transfer function; compare against the corrected target
    eps = R.meta["mollifier_width"]
    tt = np.linspace(0, eps, 4001)
    theta_hat = np.trapezoid(mollifier_bump(tt, eps) * np.exp(1j * k * tt), tt)
    train_hat = train.fourier(k)
    target = train_hat + (M - train_hat) * theta_hat
    assert abs(val - target) < 1e-3 * abs(M)
    # dropping the delta atoms must break the bridge much worse
    train1 = SingularTrain(tuple(a for a in train if a[2] == DPRIME))
    val1, _ = fourier_of_response(ResponseEntry(train1, entry.regular), k, T)
    assert abs(val1 - target) > 5 * abs(val - target)


def test_mollifier_identities():
    eps = 0.08
    t = np.linspace(-0.02, 0.12, 2000)
    th = mollifier_bump(t, eps)
    assert np.trapezoid(th, t) == pytest.approx(1.0, abs=1e-6)
    assert mollifier_cdf(0.2, eps) == pytest.approx(1.0)
    assert mollifier_cdf(-0.1, eps) == 0.0
