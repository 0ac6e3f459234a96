"""Seeded Monte Carlo click streams from the exact detection densities.

Sampling is exact and rejection-free: by the parallelogram identity
2*joint + 2*same_port = P1(ta)P2(tb) + P2(ta)P1(tb), the unordered
detection-time pair is distributed as one draw from each envelope
density, independent of all interference.  Each event therefore draws
the two times from the envelopes and then the port category from the
conditional channel weights at those times, which reproduces both the
port-pair probabilities and the two-time densities exactly.

Reproducibility: events are generated in fixed-size chunks, each with
its own Philox stream spawned from (seed, chunk index), so a log is a
pure function of (config, seed, chunk_size) no matter how many worker
threads run.  The CSV/JSON serialization round-trips bit-exactly.
"""
from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import _kernels
from .errors import EmptyRange, TooFewEvents
from .gaussian import PhotonPairConfig
from .wavepacket import GaussianMode, ModeFunction, SampledMode

__all__ = [
    "DetectionPair",
    "EventLog",
    "CoincidenceHistogram",
    "TotalCoincidenceEstimate",
    "sample_pair",
    "run_experiment",
    "coincidence_histogram",
    "estimate_total_coincidence",
    "save_event_log",
    "load_event_log",
]

RNG_NAME = "numpy.random.Philox (per-chunk SeedSequence spawn)"
DEFAULT_CHUNK_SIZE = 1 << 16

#: Envelope |zeta|^2 of a unit Gaussian pulse is normal with this sigma.
_GAUSS_TIME_SIGMA = 0.5

_WILSON_Z = 1.959963984540054  # 95% two-sided


@dataclass(frozen=True)
class DetectionPair:
    """One two-photon outcome: two (port, time) records, time-ordered."""

    first_port: int
    first_time: float
    second_port: int
    second_time: float

    def __post_init__(self):
        if self.first_port not in (3, 4) or self.second_port not in (3, 4):
            raise ValueError("ports must be 3 or 4")
        if self.first_time > self.second_time:
            raise ValueError("detection times must be ordered")

    @property
    def opposite(self) -> bool:
        return self.first_port != self.second_port

    @property
    def signed_tau(self) -> float:
        """t(port 4) - t(port 3) for opposite pairs, |difference| otherwise."""
        if not self.opposite:
            return self.second_time - self.first_time
        if self.first_port == 3:
            return self.second_time - self.first_time
        return self.first_time - self.second_time


@dataclass(frozen=True)
class EventLog:
    """Immutable record of one simulated run, reproducible from (config, seed)."""

    config: PhotonPairConfig
    seed: int
    n_pairs: int
    first_port: np.ndarray
    first_time: np.ndarray
    second_port: np.ndarray
    second_time: np.ndarray
    rng_name: str = RNG_NAME
    chunk_size: int = DEFAULT_CHUNK_SIZE
    backend: str = field(default_factory=lambda: _kernels.BACKEND)

    def __post_init__(self):
        for name in ("first_port", "first_time", "second_port", "second_time"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (len(self.first_port) == len(self.first_time)
                == len(self.second_port) == len(self.second_time) == self.n_pairs):
            raise ValueError("event arrays must all have length n_pairs")

    def __len__(self) -> int:
        return self.n_pairs

    def __getitem__(self, i: int) -> DetectionPair:
        return DetectionPair(int(self.first_port[i]), float(self.first_time[i]),
                             int(self.second_port[i]), float(self.second_time[i]))

    def __iter__(self):
        return (self[i] for i in range(self.n_pairs))

    @property
    def opposite_mask(self) -> np.ndarray:
        return self.first_port != self.second_port

    @property
    def signed_tau(self) -> np.ndarray:
        """t(port 4) - t(port 3) for opposite pairs; second-first otherwise."""
        diff = self.second_time - self.first_time
        return np.where(self.opposite_mask & (self.first_port == 4), -diff, diff)


@dataclass(frozen=True)
class TotalCoincidenceEstimate:
    """Opposite-port fraction with a 95% Wilson confidence interval."""

    estimate: float
    ci_low: float
    ci_high: float
    n_pairs: int
    n_opposite: int


@dataclass(frozen=True)
class CoincidenceHistogram:
    """Binned detection-time differences per port-pair category.

    Opposite-port bins are centered on multiples of ``bin_width`` (the
    central bin straddles tau = 0 symmetrically) and keyed by the signed
    difference t(port 4) - t(port 3); same-port bins cover |tau| >= 0.
    """

    bin_width: float
    bin_edges: np.ndarray
    opposite_counts: np.ndarray
    same_edges: np.ndarray
    same3_counts: np.ndarray
    same4_counts: np.ndarray
    n_pairs: int

    def __post_init__(self):
        for name in ("bin_edges", "opposite_counts", "same_edges",
                     "same3_counts", "same4_counts"):
            arr = np.ascontiguousarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def n_contributing(self) -> int:
        return int(self.opposite_counts.sum() + self.same3_counts.sum()
                   + self.same4_counts.sum())

    def opposite_density(self) -> np.ndarray:
        """Per-pair density estimate: counts / (n_pairs * bin_width)."""
        return self.opposite_counts / (self.n_pairs * self.bin_width)


def _envelope_sampler(mode: ModeFunction):
    """Exact sampler for the envelope density |zeta(t)|^2 of a mode."""
    if isinstance(mode, GaussianMode):
        center = mode.center

        def draw(rng, n):
            return center + _GAUSS_TIME_SIGMA * rng.standard_normal(n)

        return draw
    if isinstance(mode, SampledMode):
        t = mode.grid.times
        dens = mode.values.real ** 2 + mode.values.imag ** 2
        steps = 0.5 * (dens[1:] + dens[:-1]) * mode.grid.spacing
        cdf = np.concatenate(([0.0], np.cumsum(steps)))
        cdf /= cdf[-1]

        def draw(rng, n):
            return np.interp(rng.random(n), cdf, t)

        return draw
    raise TypeError(f"not a mode function: {mode!r}")


def _assemble(rng, n, ta, tb, z1a, z2a, z1b, z2b):
    """Draw ports given time-ordered detections and mode values there."""
    joint = _kernels.mode_pair_density(z1a, z2a, z1b, z2b, sign=-1)
    same = _kernels.mode_pair_density(z1a, z2a, z1b, z2b, sign=+1)
    total = 2.0 * (joint + same)
    if np.any(total <= 0.0):
        raise RuntimeError(
            "two-time density underflowed at a drawn time pair; "
            "this indicates a corrupted mode definition")
    r = rng.random(n) * total
    opposite = r < 2.0 * joint
    same3 = ~opposite & (r < 2.0 * joint + same)
    first_goes_3 = rng.random(n) < 0.5

    first_port = np.full(n, 4, dtype=np.int8)
    first_port[same3] = 3
    first_port[opposite & first_goes_3] = 3
    second_port = np.where(opposite, 7 - first_port, first_port).astype(np.int8)
    return first_port, ta, second_port, tb


def _sample_modes_chunk(m1, m2, rng, n):
    draw1 = _envelope_sampler(m1)
    draw2 = _envelope_sampler(m2)
    x = draw1(rng, n)
    y = draw2(rng, n)
    ta = np.minimum(x, y)
    tb = np.maximum(x, y)
    return _assemble(rng, n, ta, tb, m1(ta), m2(ta), m1(tb), m2(tb))


def _gaussian_mode_values(t, center, carrier):
    from .wavepacket import GAUSS_PEAK

    return GAUSS_PEAK * np.exp(-(t - center) ** 2 - 1j * carrier * t)


def _sample_gaussian_chunk(cfg: PhotonPairConfig, rng, n):
    """Vectorized Gaussian-pair chunk with per-event carrier differences."""
    if cfg.delta_omega > 0:
        deltas = cfg.delta + rng.standard_normal(n) * (cfg.delta_omega / np.sqrt(2.0))
    else:
        deltas = np.full(n, cfg.delta)
    c1, c2 = 0.5 * cfg.delta_tau, -0.5 * cfg.delta_tau
    w1 = cfg.omega_mean - 0.5 * deltas
    w2 = cfg.omega_mean + 0.5 * deltas
    x = c1 + _GAUSS_TIME_SIGMA * rng.standard_normal(n)
    y = c2 + _GAUSS_TIME_SIGMA * rng.standard_normal(n)
    ta = np.minimum(x, y)
    tb = np.maximum(x, y)
    z1a = _gaussian_mode_values(ta, c1, w1)
    z2a = _gaussian_mode_values(ta, c2, w2)
    z1b = _gaussian_mode_values(tb, c1, w1)
    z2b = _gaussian_mode_values(tb, c2, w2)
    return _assemble(rng, n, ta, tb, z1a, z2a, z1b, z2b)


def _sample_family_chunk(cfg: PhotonPairConfig, pulse_family, rng, n):
    """Custom pulse family; per-event mode pairs when the spread is active."""
    if cfg.delta_omega == 0:
        m1, m2 = pulse_family(cfg.delta)
        return _sample_modes_chunk(m1, m2, rng, n)
    deltas = cfg.delta + rng.standard_normal(n) * (cfg.delta_omega / np.sqrt(2.0))
    fp = np.empty(n, dtype=np.int8)
    ft = np.empty(n)
    sp = np.empty(n, dtype=np.int8)
    st = np.empty(n)
    for i, delta in enumerate(deltas):
        m1, m2 = pulse_family(float(delta))
        one = _sample_modes_chunk(m1, m2, rng, 1)
        fp[i], ft[i], sp[i], st[i] = one[0][0], one[1][0], one[2][0], one[3][0]
    return fp, ft, sp, st


def sample_pair(m1: ModeFunction, m2: ModeFunction,
                rng: np.random.Generator) -> DetectionPair:
    """Draw one two-photon detection outcome for a fixed mode pair."""
    fp, ft, sp, st = _sample_modes_chunk(m1, m2, rng, 1)
    return DetectionPair(int(fp[0]), float(ft[0]), int(sp[0]), float(st[0]))


def _thread_count() -> int:
    raw = os.environ.get("HOMSIM_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_experiment(cfg: PhotonPairConfig, n_pairs: int, seed: int,
                   pulse_family=None,
                   chunk_size: int = DEFAULT_CHUNK_SIZE) -> EventLog:
    """Generate ``n_pairs`` independent detection pairs.

    With ``pulse_family=None`` the standard Gaussian pair for ``cfg`` is
    used (fully vectorized, including the per-event carrier-difference
    draw when ``cfg.delta_omega > 0``).  A custom ``pulse_family(delta)``
    is supported; combined with a spread it falls back to per-event
    sampling.  The log is a pure function of (cfg, seed, chunk_size);
    HOMSIM_THREADS only parallelizes chunk generation.
    """
    if n_pairs < 1:
        raise ValueError("n_pairs must be at least 1")
    if chunk_size < 1:
        raise ValueError("chunk_size must be at least 1")
    seed = int(seed)
    root = np.random.SeedSequence(seed)
    n_chunks = (n_pairs + chunk_size - 1) // chunk_size
    children = root.spawn(n_chunks)
    sizes = [min(chunk_size, n_pairs - i * chunk_size) for i in range(n_chunks)]

    def make_chunk(i: int):
        rng = np.random.Generator(np.random.Philox(children[i]))
        if pulse_family is None:
            return _sample_gaussian_chunk(cfg, rng, sizes[i])
        return _sample_family_chunk(cfg, pulse_family, rng, sizes[i])

    workers = min(_thread_count(), n_chunks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(make_chunk, range(n_chunks)))
    else:
        chunks = [make_chunk(i) for i in range(n_chunks)]

    return EventLog(
        config=cfg, seed=seed, n_pairs=n_pairs,
        first_port=np.concatenate([c[0] for c in chunks]),
        first_time=np.concatenate([c[1] for c in chunks]),
        second_port=np.concatenate([c[2] for c in chunks]),
        second_time=np.concatenate([c[3] for c in chunks]),
        chunk_size=chunk_size)


def coincidence_histogram(log: EventLog, bin_width: float,
                          hist_range: float) -> CoincidenceHistogram:
    """Bin detection-time differences; densities normalize by n_pairs*bin_width."""
    if bin_width <= 0 or hist_range <= 0:
        raise EmptyRange("bin_width and hist_range must be positive")
    k = int(np.floor(hist_range / bin_width + 1e-9))
    if k < 1:
        raise EmptyRange(
            f"range {hist_range!r} admits no bin of width {bin_width!r}")
    edges = (np.arange(-k, k + 2) - 0.5) * bin_width
    same_edges = np.arange(k + 1) * bin_width

    opp = log.opposite_mask
    tau = log.signed_tau
    opposite_counts, _ = np.histogram(tau[opp], bins=edges)
    diff = log.second_time - log.first_time
    mask3 = ~opp & (log.first_port == 3)
    mask4 = ~opp & (log.first_port == 4)
    same3_counts, _ = np.histogram(diff[mask3], bins=same_edges)
    same4_counts, _ = np.histogram(diff[mask4], bins=same_edges)
    return CoincidenceHistogram(
        bin_width=bin_width, bin_edges=edges, opposite_counts=opposite_counts,
        same_edges=same_edges, same3_counts=same3_counts,
        same4_counts=same4_counts, n_pairs=log.n_pairs)


def estimate_total_coincidence(log: EventLog) -> TotalCoincidenceEstimate:
    """Opposite-port fraction with its 95% Wilson interval."""
    n = log.n_pairs
    if n < 100:
        raise TooFewEvents(f"need at least 100 pairs, got {n}")
    k = int(np.count_nonzero(log.opposite_mask))
    p = k / n
    z2 = _WILSON_Z ** 2
    denom = 1.0 + z2 / n
    center = (p + z2 / (2.0 * n)) / denom
    half = _WILSON_Z * np.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom
    return TotalCoincidenceEstimate(estimate=p, ci_low=center - half,
                                    ci_high=center + half, n_pairs=n,
                                    n_opposite=k)


def save_event_log(log: EventLog, csv_path) -> Path:
    """Write the event CSV plus its JSON sidecar; returns the sidecar path."""
    csv_path = Path(csv_path)
    with open(csv_path, "w", newline="") as fh:
        fh.write("first_port,first_time,second_port,second_time\n")
        for i in range(log.n_pairs):
            fh.write(f"{log.first_port[i]:d},{log.first_time[i]:.17g},"
                     f"{log.second_port[i]:d},{log.second_time[i]:.17g}\n")
    sidecar = csv_path.with_suffix(".json")
    meta = {
        "config": asdict(log.config),
        "seed": log.seed,
        "n_pairs": log.n_pairs,
        "chunk_size": log.chunk_size,
        "rng": log.rng_name,
        "backend": log.backend,
        "code_version": __version__,
        "numpy_version": np.__version__,
    }
    with open(sidecar, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


def load_event_log(csv_path) -> EventLog:
    """Rebuild an EventLog from the CSV and its JSON sidecar."""
    csv_path = Path(csv_path)
    sidecar = csv_path.with_suffix(".json")
    with open(sidecar) as fh:
        meta = json.load(fh)
    fp, ft, sp, st = [], [], [], []
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["first_port", "first_time", "second_port", "second_time"]:
            raise ValueError(f"{csv_path}: unexpected event-log header")
        for row in reader:
            fp.append(int(row[0]))
            ft.append(float(row[1]))
            sp.append(int(row[2]))
            st.append(float(row[3]))
    return EventLog(
        config=PhotonPairConfig(**meta["config"]),
        seed=int(meta["seed"]), n_pairs=len(fp),
        first_port=np.array(fp, dtype=np.int8), first_time=np.array(ft),
        second_port=np.array(sp, dtype=np.int8), second_time=np.array(st),
        rng_name=meta.get("rng", RNG_NAME),
        chunk_size=int(meta.get("chunk_size", DEFAULT_CHUNK_SIZE)),
        backend=meta.get("backend", _kernels.BACKEND))
