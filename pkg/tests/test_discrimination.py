"""Filter constructions, dilations, and readout statistics for each strategy."""

import math

import numpy as np
import pytest

from qtc import (
    Channel,
    RankDeficientChannelError,
    Strategy,
    max_confidence,
    min_error_measurement,
    separation_filter,
    usd_failure_states,
    usd_kraus,
    usd_unitary,
)
from qtc.bell import fourier, symmetric_states
from qtc.discrimination import (
    filter_unitary,
    max_confidence_readout,
    min_error_readout,
    usd_readout,
)

CHAN82 = Channel(np.sqrt([0.8, 0.2]))


def random_full_rank(d, seed):
    rng = np.random.default_rng(seed)
    c = rng.random(d) + 0.15
    return Channel(c / np.linalg.norm(c))


class TestUsdKraus:
    def test_maximal_is_trivial(self):
        pair = usd_kraus(Channel.maximal(3))
        assert np.max(np.abs(pair.success.matrix - np.eye(3))) < 1e-12
        assert np.max(np.abs(pair.fail.matrix)) < 1e-12

    def test_success_probability_enters_diagonal(self):
        pair = usd_kraus(CHAN82)
        # A_s scales each coefficient down to c_min
        out = pair.success.matrix @ CHAN82.coeffs
        assert np.allclose(out, [CHAN82.c_min] * 2, atol=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_completeness(self, seed):
        pair = usd_kraus(random_full_rank(4, seed))
        assert pair.completeness_defect() < 1e-12

    def test_rank_deficient_rejected(self):
        with pytest.raises(RankDeficientChannelError):
            usd_kraus(Channel(np.sqrt([0.7, 0.3, 0.0])))


class TestFilterUnitary:
    def test_maximal_block_identity(self):
        u = usd_unitary(Channel.maximal(2))
        assert np.max(np.abs(u.matrix - np.eye(4))) < 1e-12

    def test_success_projection_norms(self):
        # project the flag slot back on the incoming flag value: the squared
        # norm is the success probability c_min^2 * d / d = 0.4 per state
        u = usd_unitary(CHAN82, flag=0)
        fam = symmetric_states(CHAN82)
        for n in range(2):
            inp = np.kron(fam.states[n].amps, [1, 0])
            out = (u.matrix @ inp).reshape(2, 2)
            assert np.vdot(out[:, 0], out[:, 0]).real == pytest.approx(0.4, abs=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_unitarity_random_channels(self, seed):
        u = usd_unitary(random_full_rank(3, seed), flag=seed % 3)
        assert u.is_unitary(1e-10)

    def test_flag_offset_moves_failure_slot(self):
        u = usd_unitary(CHAN82, flag=1)
        fam = symmetric_states(CHAN82)
        inp = np.kron(fam.states[0].amps, [0, 1])
        out = (u.matrix @ inp).reshape(2, 2)
        # success amplitude stays on flag 1, failure moves to flag 0
        assert np.vdot(out[:, 1], out[:, 1]).real == pytest.approx(0.4, abs=1e-12)
        assert np.vdot(out[:, 0], out[:, 0]).real == pytest.approx(0.6, abs=1e-12)

    def test_action_matches_kraus(self):
        chan = random_full_rank(3, 11)
        pair = usd_kraus(chan)
        u = filter_unitary(pair, 3, flag=0)
        rng = np.random.default_rng(0)
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        v /= np.linalg.norm(v)
        out = (u.matrix @ np.kron(v, np.eye(3)[0])).reshape(3, 3)
        assert np.max(np.abs(out[:, 0] - pair.success.matrix @ v)) < 1e-10
        assert np.max(np.abs(out[:, 1] - pair.fail.matrix @ v)) < 1e-10


class TestUsdFailureStates:
    def test_d2_failure_family_rank_one(self):
        states = usd_failure_states(CHAN82)
        stacked = np.stack([s.amps for s in states])
        rank = np.linalg.matrix_rank(stacked, tol=1e-10)
        assert rank == 1

    @pytest.mark.parametrize("d", [3, 4])
    def test_rank_is_d_minus_one(self, d):
        chan = random_full_rank(d, d)
        states = usd_failure_states(chan)
        stacked = np.stack([s.amps for s in states])
        assert np.linalg.matrix_rank(stacked, tol=1e-10) == d - 1

    def test_unit_norm(self):
        for s in usd_failure_states(CHAN82):
            assert np.linalg.norm(s.amps) == pytest.approx(1.0, abs=1e-10)

    def test_proportional_to_filtered_family(self):
        chan = random_full_rank(3, 21)
        pair = usd_kraus(chan)
        fam = symmetric_states(chan)
        for n, s in enumerate(usd_failure_states(chan)):
            v = pair.fail.matrix @ fam.states[n].amps
            v /= np.linalg.norm(v)
            overlap = abs(np.vdot(v, s.amps))
            assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_explicit_component_form(self):
        # components proportional to w^{nk} sqrt(c_k^2 - c_min^2)
        chan = random_full_rank(4, 33)
        c = chan.coeffs
        w = np.exp(2j * np.pi / 4)
        for n, s in enumerate(usd_failure_states(chan)):
            want = w ** (n * np.arange(4)) * np.sqrt(c**2 - chan.c_min**2)
            want /= np.linalg.norm(want)
            assert abs(abs(np.vdot(want, s.amps)) - 1) < 1e-10

    def test_maximal_rejected(self):
        with pytest.raises(ValueError):
            usd_failure_states(Channel.maximal(2))


class TestMinError:
    def test_basis_is_fourier(self):
        meas = min_error_measurement(CHAN82)
        f = fourier(2).matrix
        for n, col in enumerate(meas.basis):
            assert np.max(np.abs(col.amps - f[:, n])) < 1e-12

    def test_correct_probability_frozen(self):
        # (c_0 + c_1)^2 / d with c = (sqrt(0.8), sqrt(0.2)): exactly 0.9
        meas = min_error_measurement(CHAN82)
        assert meas.correct_probability == pytest.approx(0.9, abs=1e-12)

    def test_maximal_always_correct(self):
        meas = min_error_measurement(Channel.maximal(3))
        assert meas.correct_probability == pytest.approx(1.0, abs=1e-12)

    def test_readout_marginal_uniform(self):
        ro = min_error_readout(Channel(np.sqrt([0.5, 0.3, 0.2])))
        assert np.allclose(ro.readout_marginal(), [1 / 3] * 3, atol=1e-12)
        assert ro.correct_probability() == pytest.approx(
            (np.sum(np.sqrt([0.5, 0.3, 0.2])) ** 2) / 3, abs=1e-12
        )

    def test_conclusive_rows_sum_to_one(self):
        ro = min_error_readout(CHAN82)
        assert ro.conclusive.sum() + ro.inconclusive.sum() == pytest.approx(1.0, abs=1e-12)


class TestSeparation:
    def test_identity_target(self):
        pair = separation_filter(CHAN82, CHAN82)
        assert np.max(np.abs(pair.success.matrix - np.eye(2))) < 1e-12
        assert np.max(np.abs(pair.fail.matrix)) < 1e-12

    def test_orthogonalization_probability(self):
        pair = separation_filter(CHAN82, Channel.maximal(2))
        out = pair.success.matrix @ CHAN82.coeffs
        assert np.vdot(out, out).real == pytest.approx(0.4, abs=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_completeness(self, seed):
        chan = random_full_rank(3, seed)
        target = random_full_rank(3, seed + 100)
        pair = separation_filter(chan, target)
        assert pair.completeness_defect() < 1e-12

    def test_post_success_family_overlap(self):
        target = Channel(np.sqrt([0.6, 0.4]))
        pair = separation_filter(CHAN82, target)
        fam = symmetric_states(CHAN82)
        outs = []
        for n in range(2):
            v = pair.success.matrix @ fam.states[n].amps
            outs.append(v / np.linalg.norm(v))
        want = abs(0.6 - 0.4)  # |sum c~_k^2 (-1)^k|
        assert abs(np.vdot(outs[0], outs[1])) == pytest.approx(want, abs=1e-12)

    def test_support_mismatch_rejected(self):
        with pytest.raises(ValueError):
            separation_filter(Channel(np.sqrt([0.7, 0.3, 0.0])), Channel.maximal(3))


class TestMaxConfidence:
    def test_two_state_qutrit_confidence(self):
        scheme = max_confidence(Channel(np.sqrt([0.5, 0.5, 0.0])))
        assert scheme.confidence == pytest.approx(2 / 3, abs=1e-12)
        assert scheme.inconclusive_probability == pytest.approx(0.0, abs=1e-12)

    def test_asymmetric_qutrit(self):
        scheme = max_confidence(Channel(np.sqrt([0.7, 0.3, 0.0])))
        assert scheme.inconclusive_probability == pytest.approx(0.4, abs=1e-12)
        assert scheme.confidence == pytest.approx(2 / 3, abs=1e-12)

    def test_d4_posterior_from_bayes(self):
        chan = Channel(np.sqrt([0.6, 0.4, 0.0, 0.0]))
        ro = max_confidence_readout(chan)
        assert ro.posterior_correct() == pytest.approx(0.5, abs=1e-12)
        assert ro.inconclusive.sum() == pytest.approx(0.2, abs=1e-12)

    def test_uniform_support_never_inconclusive(self):
        chan = Channel(np.sqrt([1 / 3, 1 / 3, 1 / 3, 0.0]))
        scheme = max_confidence(chan)
        assert scheme.inconclusive_probability == pytest.approx(0.0, abs=1e-12)

    def test_kraus_completeness_on_support(self):
        scheme = max_confidence(Channel(np.sqrt([0.7, 0.3, 0.0])))
        assert scheme.kraus.completeness_defect() < 1e-12

    def test_unitary_dilation(self):
        scheme = max_confidence(Channel(np.sqrt([0.55, 0.25, 0.2, 0.0])))
        assert scheme.unitary.is_unitary(1e-10)

    def test_full_rank_rejected(self):
        with pytest.raises(ValueError, match="unambiguous"):
            max_confidence(Channel.maximal(3))

    def test_single_state_support_rejected(self):
        with pytest.raises(ValueError):
            max_confidence(Channel(np.sqrt([1.0, 0.0, 0.0])))


class TestUsdReadout:
    def test_success_readout_is_error_free(self):
        chan = random_full_rank(3, 5)
        ro = usd_readout(chan)
        off = ro.conclusive - np.diag(np.diag(ro.conclusive))
        assert np.max(np.abs(off)) < 1e-12
        assert ro.posterior_correct() == pytest.approx(1.0, abs=1e-12)

    def test_inconclusive_mass(self):
        ro = usd_readout(CHAN82)
        assert ro.inconclusive.sum() == pytest.approx(0.6, abs=1e-12)


class TestStrategy:
    def test_parse_round_trip(self):
        for token in ("none", "usd", "minerror", "maxconf"):
            s = Strategy.parse(token, 3)
            assert s.kind == {"minerror": "minerror", "maxconf": "maxconf"}.get(token, token)
        sep = Strategy.parse("sep:maximal", 2)
        assert sep.kind == "separation" and sep.target.is_maximal
        sep2 = Strategy.parse("sep:c=[0.6,0.8]", 2)
        assert np.allclose(sep2.target.coeffs, [0.6, 0.8])

    def test_bad_tokens(self):
        with pytest.raises(ValueError):
            Strategy.parse("bogus", 2)
        with pytest.raises(ValueError):
            Strategy.parse("sep:", 2)

    def test_separation_requires_target(self):
        with pytest.raises(ValueError):
            Strategy("separation")

    def test_describe(self):
        assert "usd" in Strategy.usd().describe()
