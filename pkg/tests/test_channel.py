import json

import numpy as np
import pytest

from xalign.channel import (
    NetworkConfig,
    process_from_json,
    sample_network,
    schedule_slot_sets,
)
from xalign.errors import ConfigurationError, NotReadyError, SchedulingError


def two_by_two(A=2, B=1, T_c=5, T_fb=2, seed=7, **kw):
    return NetworkConfig(num_tx=2, num_rx=2, tx_antennas=A, rx_antennas=B,
                         coherence=T_c, feedback_delay=T_fb, seed=seed, **kw)


class TestConfig:
    def test_feedback_delay_must_be_less_than_coherence(self):
        with pytest.raises(ConfigurationError):
            two_by_two(T_c=5, T_fb=5)
        with pytest.raises(ConfigurationError):
            two_by_two(T_c=5, T_fb=9)

    def test_zero_antennas_rejected(self):
        with pytest.raises(ConfigurationError):
            two_by_two(A=0)

    def test_magnitude_bounds_must_be_positive_finite(self):
        with pytest.raises(ConfigurationError):
            two_by_two(magnitude_bounds=(0.0, 10.0))
        with pytest.raises(ConfigurationError):
            two_by_two(magnitude_bounds=(0.1, np.inf))

    def test_antenna_broadcast_and_per_node(self):
        cfg = NetworkConfig(num_tx=3, num_rx=2, tx_antennas=4, rx_antennas=(1, 2),
                            coherence=5, feedback_delay=2)
        assert cfg.tx_antennas == (4, 4, 4)
        assert cfg.rx_antennas == (1, 2)

    def test_normalized_delay_is_exact(self):
        from fractions import Fraction

        assert two_by_two(T_c=6, T_fb=2).normalized_delay == Fraction(1, 3)


class TestSampling:
    def test_block_constancy(self):
        proc = sample_network(two_by_two(), num_blocks=2)
        assert np.array_equal(proc.channel_at(1, 1, 1), proc.channel_at(1, 1, 5))
        assert np.array_equal(proc.channel_at(1, 1, 3), proc.channel_at(1, 1, 1))

    def test_blocks_differ(self):
        proc = sample_network(two_by_two(), num_blocks=2)
        assert not np.array_equal(proc.channel_at(1, 1, 1), proc.channel_at(1, 1, 6))

    def test_determinism_same_seed(self):
        a = sample_network(two_by_two(seed=42), num_blocks=3)
        b = sample_network(two_by_two(seed=42), num_blocks=3)
        for n in (1, 6, 11):
            for i in (1, 2):
                for j in (1, 2):
                    assert np.array_equal(a.channel_at(i, j, n), b.channel_at(i, j, n))

    def test_different_seeds_differ(self):
        a = sample_network(two_by_two(seed=1))
        b = sample_network(two_by_two(seed=2))
        assert not np.array_equal(a.channel_at(1, 1, 1), b.channel_at(1, 1, 1))

    def test_lazy_extension_is_access_order_independent(self):
        a = sample_network(two_by_two(seed=3))
        b = sample_network(two_by_two(seed=3))
        first = a.channel_at(1, 1, 21)   # block 4 first
        a.channel_at(1, 1, 1)
        b.channel_at(1, 1, 1)            # block 0 first
        assert np.array_equal(first, b.channel_at(1, 1, 21))

    def test_magnitudes_within_default_bounds(self):
        # 10,000+ coefficients through the rejection sampler
        cfg = NetworkConfig(num_tx=2, num_rx=2, tx_antennas=5, rx_antennas=5,
                            coherence=3, feedback_delay=1, seed=0)
        proc = sample_network(cfg, num_blocks=101)
        total = 0
        for b in range(101):
            for i in (1, 2):
                for j in (1, 2):
                    mags = np.abs(proc.channel_at(i, j, b * 3 + 1))
                    assert np.all(mags >= 0.1) and np.all(mags <= 10.0)
                    total += mags.size
        assert total >= 10000

    def test_custom_bounds_respected(self):
        cfg = two_by_two(A=4, B=4, magnitude_bounds=(0.5, 2.0))
        proc = sample_network(cfg, num_blocks=50)
        for b in range(50):
            mags = np.abs(proc.channel_at(1, 1, b * 5 + 1))
            assert np.all(mags >= 0.5) and np.all(mags <= 2.0)

    def test_shape_matches_antennas(self):
        cfg = NetworkConfig(num_tx=1, num_rx=1, tx_antennas=5, rx_antennas=2,
                            coherence=5, feedback_delay=2)
        proc = sample_network(cfg)
        assert proc.channel_at(1, 1, 1).shape == (2, 5)

    def test_out_of_range_indices(self):
        proc = sample_network(two_by_two())
        with pytest.raises(IndexError):
            proc.channel_at(3, 1, 1)
        with pytest.raises(IndexError):
            proc.channel_at(1, 0, 1)


class TestCurrentCsit:
    def test_paper_slot_examples(self):
        proc = sample_network(two_by_two(T_c=5, T_fb=2))
        assert not proc.has_current_csit(6)
        assert proc.has_current_csit(13)
        # phase-two slots of the reference schedule all have current CSIT
        for n in (13, 18, 23):
            assert proc.has_current_csit(n)
        for n in (1, 6):
            assert not proc.has_current_csit(n)

    def test_zero_delay_always_current(self):
        proc = sample_network(two_by_two(T_fb=0))
        assert all(proc.has_current_csit(n) for n in range(1, 30))

    def test_boundary_slot(self):
        # (3 - 1) mod 8 = 2 >= 2
        proc = sample_network(two_by_two(T_c=8, T_fb=2))
        assert proc.has_current_csit(3)
        assert not proc.has_current_csit(2)


class TestCsitView:
    def test_view_serves_only_own_channels(self):
        proc = sample_network(two_by_two(A=2, B=2, seed=13), num_blocks=4)
        view = proc.csit_view(1, 13)
        own = {proc.channel_at(1, j, m).tobytes() for j in (1, 2) for m in range(1, 12)}
        foreign = {proc.channel_at(2, j, m).tobytes() for j in (1, 2) for m in range(1, 12)}
        served = {view.channel(j, m).tobytes() for j in (1, 2) for m in view.available_slots()}
        assert served <= own
        assert not served & foreign  # continuous draws collide with probability 0

    def test_current_csi_recoverable_in_tail_of_block(self):
        proc = sample_network(two_by_two(T_c=5, T_fb=2))
        view = proc.csit_view(1, 13)
        assert np.array_equal(view.channel(1, 11), proc.channel_at(1, 1, 13))
        assert np.array_equal(view.current(1), proc.channel_at(1, 1, 13))

    def test_block_two_csi_absent_at_slot_six(self):
        proc = sample_network(two_by_two(T_c=5, T_fb=2))
        view = proc.csit_view(1, 6)
        assert view.horizon == 4
        with pytest.raises(NotReadyError):
            view.channel(1, 5)
        with pytest.raises(NotReadyError):
            view.current(1)

    def test_empty_view_before_first_feedback(self):
        proc = sample_network(two_by_two(T_fb=2))
        view = proc.csit_view(1, 2)
        assert view.horizon == 0
        assert list(view.available_slots()) == []
        with pytest.raises(NotReadyError):
            view.channel(1, 1)

    def test_recorder_collects_accesses(self):
        proc = sample_network(two_by_two(T_c=5, T_fb=2))
        rec = []
        view = proc.csit_view(2, 13, recorder=rec)
        view.channel(1, 6)
        view.current(2)
        assert [(a.tx, a.rx, a.kind) for a in rec] == [(2, 1, "matrix"), (2, 2, "current")]

    def test_ratio_is_single_access_and_correct(self):
        cfg = NetworkConfig(num_tx=2, num_rx=2, tx_antennas=1, rx_antennas=1,
                            coherence=5, feedback_delay=2, seed=3)
        proc = sample_network(cfg)
        rec = []
        view = proc.csit_view(1, 13, recorder=rec)
        r = view.ratio(2, 1)
        expected = proc.channel_at(1, 2, 1)[0, 0] / proc.channel_at(1, 2, 13)[0, 0]
        assert abs(r - expected) < 1e-15
        assert len(rec) == 1 and rec[0].kind == "ratio"


class TestSchedule:
    def test_reference_sets(self):
        sets = schedule_slot_sets(5, 2, 5, n_sets=3, phase_one_len=2)
        assert sets[0].slots == (1, 6, 13, 18, 23)
        assert sets[1].slots == (2, 7, 14, 19, 24)
        assert sets[2].slots == (3, 8, 15, 20, 25)

    def test_single_uncoded_lead_slot(self):
        ss = schedule_slot_sets(5, 2, 5, n_sets=1, phase_one_len=1)[0]
        assert ss.slots == (1, 8, 13, 18, 23)

    def test_distinct_blocks_and_csit_flags(self):
        proc = sample_network(two_by_two(T_c=7, T_fb=3))
        for ss in schedule_slot_sets(7, 3, 4, n_sets=4, phase_one_len=2):
            assert len(set(ss.blocks)) == len(ss.slots)
            for k, slot in enumerate(ss.slots, start=1):
                if k > ss.phase_one_len:
                    assert proc.has_current_csit(slot)

    def test_capacity_error(self):
        with pytest.raises(SchedulingError):
            schedule_slot_sets(5, 2, 5, n_sets=4, phase_one_len=2)

    def test_batches_use_fresh_blocks(self):
        first = schedule_slot_sets(5, 2, 5, n_sets=3, phase_one_len=2)
        second = schedule_slot_sets(5, 2, 5, n_sets=3, phase_one_len=2, batch=1)
        used = {b for ss in first for b in ss.blocks}
        fresh = {b for ss in second for b in ss.blocks}
        assert not used & fresh
        assert second[0].slots == tuple(s + 25 for s in first[0].slots)


class TestSerialization:
    def test_round_trip(self):
        proc = sample_network(two_by_two(A=3, B=2, seed=21), num_blocks=3)
        doc = json.loads(json.dumps(proc.to_json()))
        clone = process_from_json(doc)
        for n in (1, 6, 11):
            for i in (1, 2):
                for j in (1, 2):
                    assert np.allclose(clone.channel_at(i, j, n), proc.channel_at(i, j, n))
