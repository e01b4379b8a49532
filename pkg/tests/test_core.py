import math

import numpy as np
import pytest

from diractensor import (
    BoundState,
    Channel,
    KappaRange,
    ModelParams,
    RadialSamples,
    UnboundChannelError,
    bound_states_exist,
    kappa_range,
)


class TestModelParams:
    def test_effective_mass(self):
        p = ModelParams(mass=1.0, a=0.0, b=1.0)
        assert p.effective_mass == pytest.approx(math.sqrt(2.0), rel=1e-15)

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_bad_mass(self, bad):
        with pytest.raises(ValueError):
            ModelParams(mass=bad, a=0.0, b=1.0)

    def test_rejects_nonfinite_strengths(self):
        with pytest.raises(ValueError):
            ModelParams(mass=1.0, a=math.inf, b=0.0)
        with pytest.raises(ValueError):
            ModelParams(mass=1.0, a=0.0, b=math.nan)


class TestChannel:
    @pytest.mark.parametrize(
        "kappa, ell, j, aligned",
        [(-1, 0, 0.5, True), (1, 1, 0.5, False), (-2, 1, 1.5, True), (2, 2, 1.5, False),
         (-5, 4, 4.5, True), (3, 3, 2.5, False)],
    )
    def test_kappa_to_j_ell(self, kappa, ell, j, aligned):
        ch = Channel.from_kappa(kappa)
        assert (ch.ell_upper, ch.j, ch.spin_aligned) == (ell, j, aligned)

    @pytest.mark.parametrize("kappa", [k for k in range(-12, 13) if k != 0])
    def test_roundtrip_through_j(self, kappa):
        ch = Channel.from_kappa(kappa, a=0.3)
        back = Channel.from_j(ch.j, ch.spin_aligned, a=0.3)
        assert back == ch

    def test_kappa_zero_rejected(self):
        with pytest.raises(ValueError):
            Channel.from_kappa(0)

    def test_from_j_validates(self):
        with pytest.raises(ValueError):
            Channel.from_j(1.0, True)  # integer j is not allowed
        with pytest.raises(ValueError):
            Channel.from_j(-0.5, True)

    def test_kappa_bar_shift(self):
        ch = Channel.from_kappa(-1, a=0.7)
        assert ch.kappa_bar == -1 + 0.7


class TestBoundStatesExist:
    def test_binding_channel(self):
        p = ModelParams(1.0, 0.0, 1.0)
        assert bound_states_exist(p, Channel.from_kappa(-1, 0.0)) is True

    def test_wrong_sign(self):
        p = ModelParams(1.0, 0.0, 1.0)
        assert bound_states_exist(p, Channel.from_kappa(1, 0.0)) is False

    def test_excluded_window(self):
        # |kappa_bar| = 0.3 falls in the forbidden band 0 < |kappa_bar| < 1/2
        p = ModelParams(1.0, 0.7, 1.0)
        assert bound_states_exist(p, Channel.from_kappa(-1, 0.7)) is False

    def test_half_edge_excluded(self):
        p = ModelParams(1.0, 0.5, 1.0)
        assert bound_states_exist(p, Channel.from_kappa(-1, 0.5)) is False

    def test_kappa_bar_zero(self):
        p = ModelParams(1.0, 1.0, 1.0)
        assert bound_states_exist(p, Channel.from_kappa(-1, 1.0)) is False

    def test_b_zero_never_binds(self):
        p = ModelParams(1.0, 0.0, 0.0)
        for kappa in (-3, -1, 1, 3):
            assert bound_states_exist(p, Channel.from_kappa(kappa, 0.0)) is False

    def test_mismatched_channel_rejected(self):
        p = ModelParams(1.0, 0.5, 1.0)
        with pytest.raises(ValueError):
            bound_states_exist(p, Channel.from_kappa(-1, 0.0))

    @pytest.mark.parametrize("a", [0.0, 0.5, -1.3, 2.0])
    @pytest.mark.parametrize("b", [0.7, -0.7, 2.0])
    def test_conjugation_symmetry(self, a, b):
        # existence is invariant under (b, kappa_bar) -> (-b, -kappa_bar)
        p = ModelParams(1.0, a, b)
        q = ModelParams(1.0, -a, -b)
        for kappa in range(-6, 7):
            if kappa == 0:
                continue
            assert bound_states_exist(p, Channel.from_kappa(kappa, a)) == bound_states_exist(
                q, Channel.from_kappa(-kappa, -a)
            )


class TestKappaRange:
    def test_positive_b(self):
        rng = kappa_range(ModelParams(1.0, 0.0, 1.0))
        assert rng.integers(-10, 10) == list(range(-10, 0))

    def test_negative_b(self):
        rng = kappa_range(ModelParams(1.0, 0.0, -1.0))
        assert rng.integers(-10, 10) == list(range(1, 11))

    def test_shifted_by_a_brute_force(self):
        # independent enumeration of the existence predicate on [-5, 5]
        p = ModelParams(1.0, -2.0, 1.0)
        brute = [
            k for k in range(-5, 6)
            if k != 0 and p.b * (k + p.a) < 0 and abs(k + p.a) > 0.5
        ]
        assert brute == [k for k in range(-5, 6) if k != 0 and k <= 1]
        assert kappa_range(p).integers(-5, 5) == brute

    @pytest.mark.parametrize("a", [0.0, 0.5, -0.5, 2.0, -2.0, 1.3, -3.7])
    @pytest.mark.parametrize("b", [1.0, -1.0, 0.25])
    def test_agrees_with_existence_predicate(self, a, b):
        p = ModelParams(1.0, a, b)
        rng = kappa_range(p)
        for kappa in range(-50, 51):
            if kappa == 0:
                continue
            ch = Channel.from_kappa(kappa, a)
            assert rng.contains(kappa) == bound_states_exist(p, ch), (a, b, kappa)

    def test_b_zero_rejected(self):
        with pytest.raises(UnboundChannelError):
            kappa_range(ModelParams(1.0, 0.0, 0.0))

    def test_describe(self):
        assert "kappa <" in KappaRange("below", -0.5).describe()


class TestBoundStateInvariants:
    def test_energy_window_enforced(self):
        ch = Channel.from_kappa(-1, 0.0)
        with pytest.raises(ValueError):
            BoundState(channel=ch, energy=1.5, branch="particle", gamma=1.0,
                       effective_mass=math.sqrt(2.0), n_g=1, n_f=0)

    def test_node_law_enforced(self):
        ch = Channel.from_kappa(-2, 0.0)
        with pytest.raises(ValueError):
            BoundState(channel=ch, energy=1.2, branch="particle", gamma=0.5,
                       effective_mass=math.sqrt(2.0), n_g=2, n_f=3)

    def test_n_bar_and_special_flag(self):
        ch = Channel.from_kappa(-2, 0.0)
        st = BoundState(channel=ch, energy=1.0, branch="particle", gamma=1.0,
                        effective_mass=math.sqrt(2.0), n_g=0, n_f=None)
        assert st.n_bar == 2.0
        assert st.is_special

    def test_gamma_positive(self):
        ch = Channel.from_kappa(-1, 0.0)
        with pytest.raises(ValueError):
            BoundState(channel=ch, energy=1.0, branch="particle", gamma=0.0,
                       effective_mass=math.sqrt(2.0), n_g=0)


class TestRadialSamples:
    def test_validates_grid(self):
        r = np.array([0.1, 0.2, 0.3])
        g = np.zeros(3)
        with pytest.raises(ValueError):
            RadialSamples(r=np.array([0.0, 0.1, 0.2]), g=g, f=g,
                          node_count_g=0, node_count_f=0, l2_norm=0.0)
        with pytest.raises(ValueError):
            RadialSamples(r=r[::-1].copy(), g=g, f=g,
                          node_count_g=0, node_count_f=0, l2_norm=0.0)
        with pytest.raises(ValueError):
            RadialSamples(r=r, g=np.zeros(2), f=g,
                          node_count_g=0, node_count_f=0, l2_norm=0.0)
