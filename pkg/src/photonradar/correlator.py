"""Cross-correlation of tag streams over a delay/Doppler/dilation grid.

Two routes compute the same quantity: ``ccf_direct`` histograms exact tag
differences, ``ccf_fft`` correlates binned trains through the frequency
domain. On identically binned inputs the two agree exactly in integer
counts, which is the core oracle of this module. ``search`` runs the FFT
route per grid cell and reports the global peak.

Correlation values stay in raw coincidence counts (no normalization), so
Poisson significance arithmetic applies directly. The tau axis of a
correlogram is binned as [tau_min + i*tau_step, tau_min + (i+1)*tau_step).
"""

from __future__ import annotations

import csv
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CapacityError, ConfigurationError
from .timetag import BinnedTrain, TimeTagStream

#: Bins strictly closer than this to the peak are excluded from the
#: background estimate, so the peak's own wings cannot bias significance.
GUARD_BINS = 10

DEFAULT_MAX_CELLS = 50_000_000


@dataclass(frozen=True)
class HypothesisGrid:
    """Delay window plus Doppler-scale and Lorentz-factor hypotheses.

    Doppler hypotheses are stored as fractional time-scale offsets: entry b
    encodes the rescale s = 1 + b, which keeps the grid decoupled from any
    photon repetition frequency. Gamma values are additional dilation
    factors tested per cell; the effective rescale of a cell is s * gamma.
    """

    tau_min: int
    tau_max: int
    tau_step: int
    doppler_offsets: tuple[float, ...] = (0.0,)
    gammas: tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        object.__setattr__(self, "doppler_offsets", tuple(float(b) for b in self.doppler_offsets))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if self.tau_step < 1:
            raise ConfigurationError("tau_step must be >= 1 ps")
        if self.tau_min >= self.tau_max:
            raise ConfigurationError("tau_min must be below tau_max")
        if not self.doppler_offsets or not self.gammas:
            raise ConfigurationError("doppler and gamma axes must be non-empty")
        if any(g < 1.0 for g in self.gammas):
            raise ConfigurationError("gamma hypotheses must be >= 1")
        if any(1.0 + b <= 0.0 for b in self.doppler_offsets):
            raise ConfigurationError("doppler offsets must keep the scale positive")

    @property
    def n_tau(self) -> int:
        return -((self.tau_min - self.tau_max) // self.tau_step)

    @property
    def n_cells(self) -> int:
        return len(self.gammas) * len(self.doppler_offsets)


@dataclass(frozen=True)
class Correlogram:
    """Coincidence counts indexed (gamma, doppler, tau) plus input sizes."""

    counts: np.ndarray
    grid: HypothesisGrid
    n_ref: int
    n_recv: int

    def __post_init__(self) -> None:
        counts = np.ascontiguousarray(self.counts, dtype=np.int64)
        expected = (len(self.grid.gammas), len(self.grid.doppler_offsets), self.grid.n_tau)
        if counts.shape != expected:
            raise ConfigurationError(
                "counts shape %r does not match grid %r" % (counts.shape, expected)
            )
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    def tau_edges(self) -> np.ndarray:
        """Lower edge (ps) of every tau bin."""
        return self.grid.tau_min + np.arange(self.grid.n_tau, dtype=np.int64) * self.grid.tau_step


@dataclass(frozen=True)
class Peak:
    """Global correlogram maximum with its background statistics.

    ``tau`` is the sub-bin refined delay estimate in ps; the index fields
    locate the winning cell in the correlogram.
    """

    tau: float
    doppler_offset: float
    gamma: float
    height: int
    background_mean: float
    significance: float
    gamma_index: int
    doppler_index: int
    tau_index: int


def _check_budget(grid: HypothesisGrid, max_cells: int) -> None:
    if grid.n_cells * grid.n_tau > max_cells:
        raise CapacityError(
            "grid holds %d cells, budget is %d" % (grid.n_cells * grid.n_tau, max_cells)
        )


def ccf_direct(
    ref: TimeTagStream,
    recv: TimeTagStream,
    grid: HypothesisGrid,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> Correlogram:
    """Histogram all (recv' - ref) tag differences per hypothesis cell.

    For each cell the received tags are inverse-transformed t'' = t' / (s*g)
    (g normalized to the reference frame, gamma_ref = 1), then every
    difference falling inside the tau window is accumulated. All pairs
    count; one-to-one matching is the business of coincidence_count.
    """
    _check_budget(grid, max_cells)
    n_tau = grid.n_tau
    step = grid.tau_step
    upper = grid.tau_min + n_tau * step
    counts = np.zeros((len(grid.gammas), len(grid.doppler_offsets), n_tau), dtype=np.int64)
    ref_tags = ref.tags.astype(np.float64)
    for gi, gamma in enumerate(grid.gammas):
        for di, offset in enumerate(grid.doppler_offsets):
            scale = (1.0 + offset) * gamma
            t2 = recv.tags / scale
            lo = np.searchsorted(t2, ref_tags + grid.tau_min, side="left")
            hi = np.searchsorted(t2, ref_tags + upper, side="left")
            per = hi - lo
            total = int(per.sum())
            if total == 0:
                continue
            run_starts = np.cumsum(per) - per
            offs = np.arange(total, dtype=np.int64) - np.repeat(run_starts, per)
            diffs = t2[np.repeat(lo, per) + offs] - np.repeat(ref_tags, per)
            bins = ((diffs - grid.tau_min) // step).astype(np.int64)
            counts[gi, di] = np.bincount(bins, minlength=n_tau)
    return Correlogram(counts, grid, n_ref=len(ref), n_recv=len(recv))


def ccf_fft(ref: BinnedTrain, recv: BinnedTrain) -> tuple[np.ndarray, np.ndarray]:
    """Linear cross-correlation of two binned trains through the FFT.

    Both trains are zero-padded to a common power-of-two size of at least
    the sum of their lengths, so nothing wraps around. The reference factor
    is conjugated, making a positive lag mean the received train is delayed.

    Returns:
        (lags, counts): lag in bins from -(len(ref)-1) to len(recv)-1, and
        the integer correlation count at each lag.
    """
    if ref.bin_width != recv.bin_width:
        raise ConfigurationError(
            "bin widths differ: %d vs %d" % (ref.bin_width, recv.bin_width)
        )
    n_ref, n_recv = len(ref), len(recv)
    size = 1 << (n_ref + n_recv - 1).bit_length()
    fr = np.fft.rfft(ref.bins, size)
    fv = np.fft.rfft(recv.bins, size)
    corr = np.fft.irfft(np.conj(fr) * fv, size)
    lags = np.arange(-(n_ref - 1), n_recv, dtype=np.int64)
    counts = np.rint(corr[lags % size]).astype(np.int64)
    return lags, counts


def search(
    ref: TimeTagStream,
    recv: TimeTagStream,
    grid: HypothesisGrid,
    workers: int = 1,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> tuple[Correlogram, Peak | None]:
    """Correlate over the whole grid (FFT route) and locate the global peak.

    Per cell the received tags are rescaled, both streams are binned at
    tau_step, and the binned trains are FFT-correlated; the lag slice inside
    the tau window lands in the correlogram. Cells are independent and may
    be evaluated in parallel; each one writes a disjoint slice, so the
    result does not depend on scheduling.

    Returns (correlogram, peak); peak is None when every count is zero,
    which is a no-detection outcome, not an error.
    """
    _check_budget(grid, max_cells)
    step = grid.tau_step
    n_tau = grid.n_tau
    counts = np.zeros((len(grid.gammas), len(grid.doppler_offsets), n_tau), dtype=np.int64)
    if len(ref) == 0 or len(recv) == 0:
        return Correlogram(counts, grid, len(ref), len(recv)), None

    ref_nbins = ref.duration // step + 1
    if ref_nbins > max_cells:
        raise CapacityError(
            "reference train needs %d bins at tau_step=%d; budget is %d"
            % (ref_nbins, step, max_cells)
        )
    ref_bins = np.bincount(ref.tags // step, minlength=ref_nbins)
    n_ref_bins = ref_bins.size
    fft_cache: dict[int, np.ndarray] = {}
    # first lag landing inside the tau window; tau bin i holds lag lag_lo + i
    lag_lo = -((-grid.tau_min) // step)

    def correlate_cell(cell: tuple[int, int]) -> None:
        gi, di = cell
        scale = (1.0 + grid.doppler_offsets[di]) * grid.gammas[gi]
        t2 = recv.tags / scale
        recv_idx = (t2 // step).astype(np.int64)
        recv_bins = np.bincount(recv_idx)
        n_recv_bins = recv_bins.size
        size = 1 << (n_ref_bins + n_recv_bins - 1).bit_length()
        fr = fft_cache.get(size)
        if fr is None:
            fr = np.fft.rfft(ref_bins, size)
            fft_cache[size] = fr
        corr = np.fft.irfft(np.conj(fr) * np.fft.rfft(recv_bins, size), size)
        lags = np.arange(lag_lo, lag_lo + n_tau, dtype=np.int64)
        valid = (lags >= -(n_ref_bins - 1)) & (lags <= n_recv_bins - 1)
        cell_counts = np.zeros(n_tau, dtype=np.int64)
        cell_counts[valid] = np.rint(corr[lags[valid] % size]).astype(np.int64)
        counts[gi, di] = cell_counts

    cells = [(gi, di) for gi in range(len(grid.gammas)) for di in range(len(grid.doppler_offsets))]
    if workers > 1:
        # warm the common FFT size; a thread hitting a different size just
        # recomputes the identical transform, so the race is harmless
        correlate_cell(cells[0])
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(correlate_cell, cells[1:]))
    else:
        for cell in cells:
            correlate_cell(cell)

    correlogram = Correlogram(counts, grid, len(ref), len(recv))
    return correlogram, find_peak(correlogram, lag_lo)


def find_peak(correlogram: Correlogram, lag_lo: int | None = None) -> Peak | None:
    """Global maximum of a correlogram with guard-zone background statistics.

    The refined tau sits on the FFT lag grid used by ``search`` (bin i holds
    the lag at its lower edge), with a 3-point parabolic sub-bin correction.
    """
    counts = correlogram.counts
    grid = correlogram.grid
    if counts.max(initial=0) <= 0:
        return None
    gi, di, ti = np.unravel_index(int(np.argmax(counts)), counts.shape)
    tau_slice = counts[gi, di]
    height = int(tau_slice[ti])
    background = background_mean(tau_slice, ti)
    significance = (height - background) / max(np.sqrt(background), 1.0)

    frac = 0.0
    if 0 < ti < tau_slice.size - 1:
        c_prev, c_mid, c_next = (float(tau_slice[ti - 1]), float(tau_slice[ti]), float(tau_slice[ti + 1]))
        denom = c_prev - 2.0 * c_mid + c_next
        if denom != 0.0:
            frac = 0.5 * (c_prev - c_next) / denom
    if lag_lo is None:
        lag_lo = -((-grid.tau_min) // grid.tau_step)
    tau = (lag_lo + ti + frac) * grid.tau_step

    return Peak(
        tau=float(tau),
        doppler_offset=grid.doppler_offsets[di],
        gamma=grid.gammas[gi],
        height=height,
        background_mean=float(background),
        significance=float(significance),
        gamma_index=int(gi),
        doppler_index=int(di),
        tau_index=int(ti),
    )


def background_mean(tau_slice: np.ndarray, peak_index: int, guard: int = GUARD_BINS) -> float:
    """Mean count over bins at least ``guard`` bins away from the peak."""
    idx = np.arange(tau_slice.size)
    outside = np.abs(idx - peak_index) >= guard
    if not outside.any():
        return 0.0
    return float(tau_slice[outside].mean())


def cell_significance(correlogram: Correlogram, gamma_index: int, doppler_index: int) -> float:
    """Peak significance of one (gamma, doppler) cell's tau slice."""
    tau_slice = correlogram.counts[gamma_index, doppler_index]
    ti = int(np.argmax(tau_slice))
    background = background_mean(tau_slice, ti)
    return float((tau_slice[ti] - background) / max(np.sqrt(background), 1.0))


def export_correlogram_csv(correlogram: Correlogram, path) -> None:
    """Write ``gamma,doppler_offset,tau_ps,count`` records, tau-major last."""
    grid = correlogram.grid
    edges = correlogram.tau_edges()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["gamma", "doppler_offset", "tau_ps", "count"])
        for gi, gamma in enumerate(grid.gammas):
            for di, offset in enumerate(grid.doppler_offsets):
                for ti in range(grid.n_tau):
                    writer.writerow(
                        [repr(gamma), repr(offset), int(edges[ti]), int(correlogram.counts[gi, di, ti])]
                    )


_BIN_MAGIC = b"QCG1"
_BIN_HEADER = struct.Struct("<4sIIIqqqqq")


def write_correlogram_binary(correlogram: Correlogram, path) -> None:
    """Compact little-endian dump, records in the same order as the CSV."""
    grid = correlogram.grid
    with open(path, "wb") as fh:
        fh.write(
            _BIN_HEADER.pack(
                _BIN_MAGIC,
                len(grid.gammas),
                len(grid.doppler_offsets),
                grid.n_tau,
                grid.tau_min,
                grid.tau_max,
                grid.tau_step,
                correlogram.n_ref,
                correlogram.n_recv,
            )
        )
        fh.write(np.asarray(grid.gammas, dtype="<f8").tobytes())
        fh.write(np.asarray(grid.doppler_offsets, dtype="<f8").tobytes())
        fh.write(correlogram.counts.astype("<i8").tobytes())


def read_correlogram_binary(path) -> Correlogram:
    data = Path(path).read_bytes()
    if len(data) < _BIN_HEADER.size or data[:4] != _BIN_MAGIC:
        raise ConfigurationError("%s: not a QCG1 correlogram dump" % (path,))
    (_, n_gamma, n_doppler, n_tau, tau_min, tau_max, tau_step, n_ref, n_recv) = _BIN_HEADER.unpack_from(data)
    pos = _BIN_HEADER.size
    gammas = np.frombuffer(data, dtype="<f8", count=n_gamma, offset=pos)
    pos += 8 * n_gamma
    offsets = np.frombuffer(data, dtype="<f8", count=n_doppler, offset=pos)
    pos += 8 * n_doppler
    counts = np.frombuffer(data, dtype="<i8", count=n_gamma * n_doppler * n_tau, offset=pos)
    grid = HypothesisGrid(tau_min, tau_max, tau_step, tuple(offsets), tuple(gammas))
    return Correlogram(counts.reshape(n_gamma, n_doppler, n_tau), grid, n_ref, n_recv)
