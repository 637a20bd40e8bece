"""Uniform grids, sampled paths, two-parameter fields and Holder seminorms.

Everything downstream (reflection, fractional quadrature, tensor lifts,
the window solver) measures regularity through the operations here.  Paths
live on a uniform grid over [-r, T] whose step h = r/N divides the delay r
exactly, so that t - r is a grid point whenever t is.  All norms are
computed over grid pairs only; this under-estimates the continuum value,
which every tolerance in the verification suites accounts for.

Vector values use the Euclidean norm, matrix values the Frobenius norm.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid",
    "GridPath",
    "TwoParamField",
    "HolderReport",
    "holder_norm",
    "holder_norm_2param",
    "weighted_sup_norm",
    "shift_path",
    "write_path_csv",
    "read_path_csv",
    "write_field_csv",
    "read_field_csv",
]

_ALIGN_TOL = 1e-9


class GridAlignmentError(ValueError):
    """A time or delay does not land on the grid."""


@dataclass(frozen=True)
class Grid:
    """Uniform grid on [-delay, horizon] with n_per_window points per delay.

    The step is h = delay / n_per_window.  The horizon must be a whole
    number of steps; it does not have to be a whole number of delay
    windows (a short final window is allowed).
    """

    delay: float
    horizon: float
    n_per_window: int

    def __post_init__(self):
        if self.delay <= 0:
            raise ValueError(f"delay must be positive, got {self.delay}")
        if self.horizon <= 0:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if self.n_per_window < 1:
            raise ValueError("n_per_window must be a positive integer")
        steps = self.horizon / self.step
        if abs(steps - round(steps)) > _ALIGN_TOL * max(1.0, steps):
            raise GridAlignmentError(
                f"horizon {self.horizon} is not a whole number of steps h={self.step}"
            )

    @property
    def step(self) -> float:
        return self.delay / self.n_per_window

    @property
    def t0(self) -> float:
        return -self.delay

    @property
    def n_points(self) -> int:
        return self.n_per_window + int(round(self.horizon / self.step)) + 1

    @property
    def n_windows(self) -> int:
        """Number of delay windows covering (0, horizon], last may be short."""
        full, rem = divmod(int(round(self.horizon / self.step)), self.n_per_window)
        return full + (1 if rem else 0)

    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(self.n_points)

    def index_of(self, t: float) -> int:
        """Grid index of time t; raises if t is off the grid."""
        x = (t - self.t0) / self.step
        i = int(round(x))
        if abs(x - i) > _ALIGN_TOL * max(1.0, abs(x)) or i < 0 or i >= self.n_points:
            raise GridAlignmentError(f"time {t} is not on the grid")
        return i

    def window_bounds(self, n: int) -> tuple[int, int]:
        """Index range [lo, hi] of delay window n (window 0 is [0, r])."""
        N = self.n_per_window
        lo = N + n * N
        hi = min(lo + N, self.n_points - 1)
        if lo >= self.n_points - 1 and n > 0:
            raise IndexError(f"window {n} is beyond the horizon")
        return lo, hi


@dataclass
class GridPath:
    """A d-dimensional path sampled on consecutive grid points.

    ``lo`` is the grid index of the first sample, so the path covers
    [grid.t0 + lo*h, ...].  Values are immutable by convention; operations
    return new paths.
    """

    grid: Grid
    values: np.ndarray  # (n_samples, d)
    lo: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        if not np.all(np.isfinite(self.values)):
            raise ValueError("path values must be finite")
        if self.lo < 0 or self.lo + len(self.values) > self.grid.n_points:
            raise ValueError("path does not fit inside the grid")

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    @property
    def t_lo(self) -> float:
        return self.grid.t0 + self.grid.step * self.lo

    @property
    def t_hi(self) -> float:
        return self.grid.t0 + self.grid.step * self.hi

    def times(self) -> np.ndarray:
        return self.grid.t0 + self.grid.step * (self.lo + np.arange(len(self.values)))

    def at_time(self, t: float) -> np.ndarray:
        return self.values[self.grid.index_of(t) - self.lo]

    def local_index(self, t: float) -> int:
        i = self.grid.index_of(t) - self.lo
        if i < 0 or i >= len(self.values):
            raise GridAlignmentError(f"time {t} outside the path domain")
        return i

    def restrict(self, a: float, b: float) -> "GridPath":
        ia, ib = self.local_index(a), self.local_index(b)
        return GridPath(self.grid, self.values[ia : ib + 1].copy(), self.lo + ia)


@dataclass
class TwoParamField:
    """Values g(s, t) on ordered grid pairs lo <= s < t <= hi.

    Stored densely as values[i, j] = g(t_{lo+i}, t_{lo+j}) with shape
    (n, n, d, m); entries on and below the diagonal are zero.
    """

    grid: Grid
    values: np.ndarray  # (n, n, d, m)
    lo: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 4 or self.values.shape[0] != self.values.shape[1]:
            raise ValueError("field values must have shape (n, n, d, m)")

    @property
    def hi(self) -> int:
        return self.lo + self.values.shape[0] - 1

    @property
    def t_lo(self) -> float:
        return self.grid.t0 + self.grid.step * self.lo

    @property
    def t_hi(self) -> float:
        return self.grid.t0 + self.grid.step * self.hi

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape[2], self.values.shape[3]

    def local_index(self, t: float) -> int:
        i = self.grid.index_of(t) - self.lo
        if i < 0 or i >= self.values.shape[0]:
            raise GridAlignmentError(f"time {t} outside the field domain")
        return i

    def value(self, s: float, t: float) -> np.ndarray:
        i, j = self.local_index(s), self.local_index(t)
        if i >= j:
            raise ValueError("field is defined on ordered pairs s < t")
        return self.values[i, j]

    def block(self, a: float, b: float) -> np.ndarray:
        """Dense sub-block for grid pairs inside [a, b] (view, not copy)."""
        ia, ib = self.local_index(a), self.local_index(b)
        return self.values[ia : ib + 1, ia : ib + 1]


@dataclass(frozen=True)
class HolderReport:
    """Result of a Holder-seminorm scan with the pair attaining the sup."""

    norm: float
    witness_pair: tuple[float, float]
    exponent: float


def _pair_scan(norms_by_lag, times, exponent: float, two_param: bool) -> HolderReport:
    """Shared scan core: norms_by_lag(l) yields the vector of increment or
    field norms at lag l.  Deterministic max with lexicographic tie-break
    on the witness pair."""
    best = 0.0
    witness = (times[0], times[min(1, len(times) - 1)])
    n = len(times) - 1
    h = times[1] - times[0] if n >= 1 else 1.0
    for lag in range(1, n + 1):
        mags = norms_by_lag(lag)
        denom = (lag * h) ** exponent
        ratios = mags / denom
        k = int(np.argmax(ratios))
        r = float(ratios[k])
        if r > best + 0.0:
            best = r
            witness = (float(times[k]), float(times[k + lag]))
        elif r == best:
            cand = (float(times[k]), float(times[k + lag]))
            if cand < witness:
                witness = cand
    return HolderReport(best, witness, exponent)


def holder_norm(p: GridPath, exponent: float, s: float | None = None,
                t: float | None = None) -> HolderReport:
    """Holder seminorm sup |p(v)-p(u)| / (v-u)^exponent over grid pairs in [s, t].

    Euclidean norm on increments.  O(n^2) scan, vectorized per lag.
    """
    if not 0 < exponent <= 1:
        raise ValueError(f"exponent must lie in (0, 1], got {exponent}")
    s = p.t_lo if s is None else s
    t = p.t_hi if t is None else t
    if s >= t:
        raise ValueError(f"need s < t, got s={s}, t={t}")
    ia, ib = p.local_index(s), p.local_index(t)
    vals = p.values[ia : ib + 1]
    times = p.times()[ia : ib + 1]

    def by_lag(lag):
        diff = vals[lag:] - vals[:-lag]
        return np.sqrt(np.sum(diff * diff, axis=1))

    return _pair_scan(by_lag, times, exponent, two_param=False)


def holder_norm_2param(g: TwoParamField, exponent: float, s: float | None = None,
                       t: float | None = None) -> HolderReport:
    """Two-parameter Holder norm sup |g(u,v)| / (v-u)^exponent, Frobenius norm."""
    if exponent <= 0:
        raise ValueError(f"exponent must be positive, got {exponent}")
    s = g.t_lo if s is None else s
    t = g.t_hi if t is None else t
    if s >= t:
        raise ValueError(f"need s < t, got s={s}, t={t}")
    ia, ib = g.local_index(s), g.local_index(t)
    block = g.values[ia : ib + 1, ia : ib + 1]
    n_loc = block.shape[0]
    times = g.grid.t0 + g.grid.step * (g.lo + ia + np.arange(n_loc))

    def by_lag(lag):
        diag = block[np.arange(n_loc - lag), np.arange(lag, n_loc)]
        return np.sqrt(np.sum(diag * diag, axis=(1, 2)))

    return _pair_scan(by_lag, times, exponent, two_param=True)


def weighted_sup_norm(p: GridPath, lam: float, a: float | None = None,
                      b: float | None = None) -> float:
    """Weighted sup norm sup_{t in [a,b]} e^{-lam t} |p(t)|, lam >= 1."""
    if lam < 1:
        raise ValueError(f"weight parameter must satisfy lam >= 1, got {lam}")
    a = p.t_lo if a is None else a
    b = p.t_hi if b is None else b
    ia, ib = p.local_index(a), p.local_index(b)
    vals = p.values[ia : ib + 1]
    times = p.times()[ia : ib + 1]
    mags = np.sqrt(np.sum(vals * vals, axis=1))
    return float(np.max(np.exp(-lam * times) * mags))


def shift_path(p: GridPath, r: float) -> GridPath:
    """Delay shift q(t) = p(t - r); the domain moves right by r and is
    clipped to the grid.  r must be a whole number of grid steps."""
    steps = r / p.grid.step
    k = int(round(steps))
    if abs(steps - k) > _ALIGN_TOL * max(1.0, abs(steps)):
        raise GridAlignmentError(f"shift {r} is not a whole number of grid steps")
    new_lo = p.lo + k
    if new_lo < 0 or new_lo >= p.grid.n_points:
        raise GridAlignmentError("shifted path falls outside the grid")
    n_keep = min(len(p.values), p.grid.n_points - new_lo)
    return GridPath(p.grid, p.values[:n_keep].copy(), new_lo)


# ---------------------------------------------------------------------------
# CSV serialization.  Floats are written with 17 significant digits so that
# round-trips are bit-exact.


def write_path_csv(path: GridPath, fname) -> None:
    d = path.dim
    times = path.times()
    with open(fname, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"x{i + 1}" for i in range(d)])
        for k in range(len(path.values)):
            w.writerow([f"{times[k]:.17g}"] + [f"{v:.17g}" for v in path.values[k]])


def read_path_csv(fname, grid: Grid) -> GridPath:
    with open(fname, newline="") as fh:
        rows = list(csv.reader(fh))
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    lo = grid.index_of(data[0, 0])
    return GridPath(grid, data[:, 1:], lo)


def write_field_csv(fld: TwoParamField, fname) -> None:
    d, m = fld.shape
    n = fld.values.shape[0]
    times = fld.grid.t0 + fld.grid.step * (fld.lo + np.arange(n))
    with open(fname, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["s", "t"] + [f"g{i + 1}{j + 1}" for i in range(d) for j in range(m)]
        w.writerow(header)
        for i in range(n):
            for j in range(i + 1, n):
                row = [f"{times[i]:.17g}", f"{times[j]:.17g}"]
                row += [f"{v:.17g}" for v in fld.values[i, j].ravel()]
                w.writerow(row)


def read_field_csv(fname, grid: Grid, shape: tuple[int, int]) -> TwoParamField:
    d, m = shape
    with open(fname, newline="") as fh:
        rows = list(csv.reader(fh))
    pairs = [(float(r[0]), float(r[1]), [float(v) for v in r[2:]]) for r in rows[1:]]
    idx = sorted({grid.index_of(s) for s, _, _ in pairs} | {grid.index_of(t) for _, t, _ in pairs})
    lo, hi = idx[0], idx[-1]
    n = hi - lo + 1
    vals = np.zeros((n, n, d, m))
    for s, t, g in pairs:
        i, j = grid.index_of(s) - lo, grid.index_of(t) - lo
        vals[i, j] = np.array(g).reshape(d, m)
    return TwoParamField(grid, vals, lo)
