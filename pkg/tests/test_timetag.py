from __future__ import annotations

import numpy as np
import pytest

from photonradar import (
    ConfigurationError,
    DomainError,
    bin_stream,
    coincidence_count,
    from_tags,
)


def max_matching_oracle(a, b, delay, window):
    """Maximum one-to-one matching by dynamic programming over both streams.

    Independent of the production two-pointer sweep; O(n*m) but exact.
    """
    a = sorted(a)
    b = sorted(b)
    na, nb = len(a), len(b)
    table = np.zeros((na + 1, nb + 1), dtype=int)
    for i in range(na - 1, -1, -1):
        for j in range(nb - 1, -1, -1):
            best = max(table[i + 1][j], table[i][j + 1])
            if 2 * abs(b[j] - a[i] - delay) <= window:
                best = max(best, table[i + 1][j + 1] + 1)
            table[i][j] = best
    return int(table[0][0])


def all_pairs_oracle(a, b, delay, window):
    return sum(1 for x in a for y in b if 2 * abs(y - x - delay) <= window)


def stream(tags, duration=10_000_000, channel=0):
    return from_tags(tags, channel, duration)


class TestFromTags:
    def test_sorts_raw_tags(self):
        s = from_tags([5, 2, 9], 0, 10)
        assert s.tags.tolist() == [2, 5, 9]

    def test_empty_stream(self):
        s = from_tags([], 0, 10)
        assert len(s) == 0

    def test_tag_outside_window_rejected(self):
        with pytest.raises(DomainError):
            from_tags([3, 12], 0, 10)

    def test_negative_tag_rejected(self):
        with pytest.raises(DomainError):
            from_tags([-1, 3], 0, 10)

    def test_nonpositive_duration_rejected(self):
        with pytest.raises(ConfigurationError):
            from_tags([1], 0, 0)

    def test_tags_are_immutable(self):
        s = from_tags([1, 2], 0, 10)
        with pytest.raises(ValueError):
            s.tags[0] = 5


class TestBinStream:
    def test_floor_arithmetic(self):
        train = bin_stream(from_tags([0, 99, 100], 0, 100), bin_width=100)
        assert train.bins.tolist() == [2, 1]

    def test_empty_stream_gives_zero_bins(self):
        train = bin_stream(from_tags([], 0, 100), bin_width=100)
        assert not train.bins.any()
        assert len(train) == 100 // 100 + 1  # spans [0, duration] inclusive

    def test_tag_on_bin_edge(self):
        # floor((81 - 0)/81) = 1: the edge tag lands in bin 1
        train = bin_stream(from_tags([81, 162], 0, 200), bin_width=81)
        assert train.bins.tolist()[:3] == [0, 1, 1]

    def test_origin_shifts_indexing(self):
        train = bin_stream(from_tags([50, 150], 0, 200), bin_width=100, origin=50)
        assert train.bins.tolist() == [1, 1]
        assert train.origin == 50

    def test_bin_width_below_one_rejected(self):
        with pytest.raises(ConfigurationError):
            bin_stream(from_tags([1], 0, 10), bin_width=0)

    @pytest.mark.parametrize("seed", range(5))
    def test_count_conservation(self, seed):
        rng = np.random.default_rng(seed)
        duration = 100_000
        tags = np.sort(rng.integers(0, duration + 1, size=500))
        s = from_tags(tags, 0, duration)
        width = int(rng.integers(1, 997))
        train = bin_stream(s, width)
        assert int(train.bins.sum()) == len(s)


class TestCoincidenceCount:
    def test_identity_pair(self):
        assert coincidence_count(stream([100]), stream([100]), delay=0, window=2) == 1

    def test_exact_shift(self):
        assert coincidence_count(stream([100]), stream([500]), delay=400, window=2) == 1

    def test_brute_force_example(self):
        a = [0, 1000, 2000]
        b = [10, 1010, 2500]
        expected = max_matching_oracle(a, b, delay=10, window=4)
        assert expected == 2
        assert coincidence_count(stream(a), stream(b), delay=10, window=4) == expected

    def test_window_edge_is_closed(self):
        # |diff| == window/2 counts
        assert coincidence_count(stream([100]), stream([103]), delay=0, window=6) == 1
        assert coincidence_count(stream([100]), stream([104]), delay=0, window=6) == 0

    def test_one_to_one_blocks_double_counting(self):
        # two b tags near one a tag: only one can match
        assert coincidence_count(stream([100]), stream([99, 101]), window=10) == 1
        assert coincidence_count(stream([100]), stream([99, 101]), window=10, all_pairs=True) == 2

    def test_window_below_one_rejected(self):
        with pytest.raises(ConfigurationError):
            coincidence_count(stream([1]), stream([1]), window=0)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_maximum_matching_oracle(self, seed):
        rng = np.random.default_rng(seed)
        a = np.sort(rng.integers(0, 3000, size=40))
        b = np.sort(rng.integers(0, 3000, size=40))
        delay = int(rng.integers(-100, 100))
        window = int(rng.integers(1, 200))
        got = coincidence_count(stream(a), stream(b), delay, window)
        assert got == max_matching_oracle(a.tolist(), b.tolist(), delay, window)

    @pytest.mark.parametrize("seed", range(8))
    def test_all_pairs_matches_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        a = np.sort(rng.integers(0, 3000, size=40))
        b = np.sort(rng.integers(0, 3000, size=40))
        delay = int(rng.integers(-100, 100))
        window = int(rng.integers(1, 200))
        got = coincidence_count(stream(a), stream(b), delay, window, all_pairs=True)
        assert got == all_pairs_oracle(a.tolist(), b.tolist(), delay, window)

    @pytest.mark.parametrize("seed", range(6))
    def test_symmetry_under_channel_swap(self, seed):
        rng = np.random.default_rng(100 + seed)
        a = stream(np.sort(rng.integers(0, 100_000, size=200)))
        b = stream(np.sort(rng.integers(0, 100_000, size=180)))
        delay = int(rng.integers(-500, 500))
        window = int(rng.integers(1, 400))
        assert coincidence_count(a, b, delay, window) == coincidence_count(b, a, -delay, window)

    @pytest.mark.parametrize("seed", range(6))
    def test_monotone_in_window(self, seed):
        rng = np.random.default_rng(200 + seed)
        a = stream(np.sort(rng.integers(0, 50_000, size=150)))
        b = stream(np.sort(rng.integers(0, 50_000, size=150)))
        counts = [coincidence_count(a, b, 0, w) for w in (1, 10, 100, 1000, 10_000)]
        assert counts == sorted(counts)

    @pytest.mark.parametrize("window", [1, 7, 100])
    def test_self_coincidence_equals_length(self, window):
        rng = np.random.default_rng(7)
        tags = np.sort(rng.integers(0, 1_000_000, size=300))
        s = stream(tags)
        assert coincidence_count(s, s, 0, window) == len(s)
