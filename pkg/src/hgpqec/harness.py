"""Monte Carlo trial orchestration, statistics, and threshold estimation.

A trial samples independent X/Z noise, decodes the two sectors separately,
and declares failure per sector when decoding fails outright or the
residual error is not a product of that sector's stabilizer generators.
Block failure is failure in either sector.  All estimates carry Wald 99%
confidence half-widths (z = 2.576); Wilson intervals ride along in JSON
output for low-count points.

Determinism: results are a pure function of (configuration, seed).  Trials
draw from counter-based streams keyed by (seed, trial index, sector), and
aggregation is a commutative sum, so worker count and scheduling cannot
change any output.  Sweep points derive their per-point seeds from
SeedSequence((seed, point_index)).
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from . import __version__, _kernels
from .gf2 import BitVector
from .noise import TrialStream, sample_noise_dense
from .product import CssCode
from .ssf import SmallSetCatalog, _decode_raw
from .toric import ToricCode, mwpm_decode, toric_logical_failure

Z99 = 2.576


@dataclass(frozen=True)
class EstimateWithCI:
    """A logical-error-rate point with its 99% Wald half-width."""

    p: float
    trials: int
    failures: int
    p_log: float
    ci99_halfwidth: float

    @classmethod
    def from_counts(cls, p: float, trials: int, failures: int) -> "EstimateWithCI":
        p_log = failures / trials
        half = Z99 * sqrt(p_log * (1.0 - p_log) / trials)
        return cls(p=p, trials=trials, failures=failures, p_log=p_log,
                   ci99_halfwidth=half)

    def wilson99(self) -> tuple[float, float]:
        z2 = Z99 * Z99
        n = self.trials
        denom = 1.0 + z2 / n
        center = (self.p_log + z2 / (2 * n)) / denom
        half = Z99 * sqrt(self.p_log * (1 - self.p_log) / n + z2 / (4 * n * n)) / denom
        return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class TrialResult:
    x_fail: bool
    z_fail: bool
    block_fail: bool


class TrialContext:
    """Prebuilt per-code arrays shared read-only by all trial workers."""

    def __init__(self, code: CssCode, catalogs: tuple[SmallSetCatalog, SmallSetCatalog]):
        cat_z, cat_x = catalogs
        if cat_z.sector != "z" or cat_x.sector != "x":
            raise ValueError("catalogs must be (z, x) in that order")
        self.code = code
        self.cat_z = cat_z
        self.cat_x = cat_x
        hx_csc = code.h_x.to_scipy().tocsc()
        hz_csc = code.h_z.to_scipy().tocsc()
        self._hx_indptr = hx_csc.indptr.astype(np.int32)
        self._hx_ids = hx_csc.indices.astype(np.int32)
        self._hz_indptr = hz_csc.indptr.astype(np.int32)
        self._hz_ids = hz_csc.indices.astype(np.int32)

    def x_syndrome_of(self, z_error: np.ndarray) -> np.ndarray:
        sigma = np.zeros(self.code.h_x.n_rows, dtype=np.uint8)
        support = np.nonzero(z_error)[0].astype(np.int32)
        _kernels.toggle_syndrome(support, self._hx_indptr, self._hx_ids, sigma)
        return sigma

    def z_syndrome_of(self, x_error: np.ndarray) -> np.ndarray:
        sigma = np.zeros(self.code.h_z.n_rows, dtype=np.uint8)
        support = np.nonzero(x_error)[0].astype(np.int32)
        _kernels.toggle_syndrome(support, self._hz_indptr, self._hz_ids, sigma)
        return sigma

    def judge_dense(self, x_error: np.ndarray, z_error: np.ndarray) -> TrialResult:
        converged, ehat, _, _, _, _ = _decode_raw(self.cat_z, self.x_syndrome_of(z_error))
        if not converged:
            z_fail = True
        else:
            residual = z_error ^ ehat
            z_fail = bool(residual.any()) and not self.code.h_z.in_row_space_dense(residual)
        converged, ehat, _, _, _, _ = _decode_raw(self.cat_x, self.z_syndrome_of(x_error))
        if not converged:
            x_fail = True
        else:
            residual = x_error ^ ehat
            x_fail = bool(residual.any()) and not self.code.h_x.in_row_space_dense(residual)
        return TrialResult(x_fail=x_fail, z_fail=z_fail, block_fail=x_fail or z_fail)


def judge_trial(
    code: CssCode,
    catalogs: tuple[SmallSetCatalog, SmallSetCatalog],
    x_error: BitVector,
    z_error: BitVector,
) -> TrialResult:
    """Decode a forced error pattern and report per-sector failure."""
    ctx = TrialContext(code, catalogs)
    return ctx.judge_dense(x_error.to_dense(), z_error.to_dense())


def run_trial(
    code: CssCode,
    catalogs: tuple[SmallSetCatalog, SmallSetCatalog],
    p: float,
    stream: TrialStream,
) -> TrialResult:
    """Sample one noise realization and judge it."""
    ctx = TrialContext(code, catalogs)
    x_err, z_err = sample_noise_dense(code.n_qubits, p, stream)
    return ctx.judge_dense(x_err, z_err)


def _count_failures(ctx: TrialContext, p: float, seed: int, start: int, stop: int) -> int:
    failures = 0
    n = ctx.code.n_qubits
    for t in range(start, stop):
        x_err, z_err = sample_noise_dense(n, p, TrialStream(seed, t))
        if ctx.judge_dense(x_err, z_err).block_fail:
            failures += 1
    return failures


def estimate(
    code: CssCode,
    catalogs: tuple[SmallSetCatalog, SmallSetCatalog],
    p: float,
    trials: int,
    seed: int,
    workers: int = 1,
    context: TrialContext | None = None,
) -> EstimateWithCI:
    """Monte Carlo block-logical-error-rate estimate at one physical rate."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ctx = context if context is not None else TrialContext(code, catalogs)
    if workers <= 1:
        failures = _count_failures(ctx, p, seed, 0, trials)
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_count_failures, ctx, p, seed, int(bounds[w]), int(bounds[w + 1]))
                for w in range(workers)
            ]
            failures = sum(f.result() for f in futures)
    return EstimateWithCI.from_counts(p, trials, failures)


@dataclass(frozen=True)
class SweepResult:
    """Estimates over a physical-error-rate grid for one code."""

    code_id: str
    n_qubits: int
    k: int
    estimates: tuple[EstimateWithCI, ...]
    metadata: dict = field(default_factory=dict)

    @property
    def p_grid(self) -> tuple[float, ...]:
        return tuple(e.p for e in self.estimates)


def sweep(
    code: CssCode,
    catalogs: tuple[SmallSetCatalog, SmallSetCatalog],
    p_grid,
    trials_per_point: int,
    seed: int,
    workers: int = 1,
    code_id: str = "hgp",
    metadata: dict | None = None,
) -> SweepResult:
    """One estimate per grid point; the grid must be strictly increasing."""
    p_grid = [float(p) for p in p_grid]
    if any(b <= a for a, b in zip(p_grid, p_grid[1:])):
        raise ValueError("p_grid must be strictly increasing")
    ctx = TrialContext(code, catalogs)
    params = code.params
    estimates = []
    for idx, p in enumerate(p_grid):
        point_seed = int(np.random.SeedSequence((seed, idx)).generate_state(1, np.uint64)[0])
        estimates.append(
            estimate(code, catalogs, p, trials_per_point, point_seed,
                     workers=workers, context=ctx)
        )
    meta = {
        "seed": seed,
        "trials_per_point": trials_per_point,
        "decoder_version": __version__,
    }
    if metadata:
        meta.update(metadata)
    return SweepResult(
        code_id=code_id,
        n_qubits=params.n_qubits,
        k=params.k,
        estimates=tuple(estimates),
        metadata=meta,
    )


CSV_HEADER = "code_id,N,k,p,trials,failures,p_log,ci99"


def sweep_to_csv(result: SweepResult) -> str:
    lines = [CSV_HEADER]
    for e in result.estimates:
        lines.append(
            f"{result.code_id},{result.n_qubits},{result.k},{e.p!r},"
            f"{e.trials},{e.failures},{e.p_log!r},{e.ci99_halfwidth!r}"
        )
    return "\n".join(lines) + "\n"


def sweep_to_json_dict(result: SweepResult) -> dict:
    points = []
    for e in result.estimates:
        lo, hi = e.wilson99()
        points.append(
            {
                "p": e.p,
                "trials": e.trials,
                "failures": e.failures,
                "p_log": e.p_log,
                "ci99": e.ci99_halfwidth,
                "wilson99": [lo, hi],
            }
        )
    return {
        "code_id": result.code_id,
        "N": result.n_qubits,
        "k": result.k,
        "points": points,
        "metadata": result.metadata,
    }


def sweep_from_json_dict(payload: dict) -> SweepResult:
    estimates = tuple(
        EstimateWithCI(
            p=pt["p"],
            trials=pt["trials"],
            failures=pt["failures"],
            p_log=pt["p_log"],
            ci99_halfwidth=pt["ci99"],
        )
        for pt in payload["points"]
    )
    return SweepResult(
        code_id=payload["code_id"],
        n_qubits=payload["N"],
        k=payload["k"],
        estimates=estimates,
        metadata=payload.get("metadata", {}),
    )


@dataclass(frozen=True)
class ThresholdEstimate:
    p_threshold: float | None
    method_note: str


_THRESHOLD_NOTE = (
    "sub-threshold ordering criterion: largest grid p such that at every "
    "grid point <= p the estimates decrease strictly with N and their 99% "
    "confidence intervals are disjoint; curve crossings are not used "
    "because the rate curves only meet near p_log = 1"
)


def threshold_estimate(sweeps: list[SweepResult]) -> ThresholdEstimate:
    """Largest p with clean sub-threshold ordering across block sizes."""
    if len(sweeps) < 2:
        raise ValueError("need at least two sweeps")
    ordered = sorted(sweeps, key=lambda s: s.n_qubits)
    grid = ordered[0].p_grid
    for s in ordered[1:]:
        if s.p_grid != grid:
            raise ValueError("sweeps must share a common p grid")
    p_th = None
    for idx, p in enumerate(grid):
        holds = True
        for small, big in zip(ordered, ordered[1:]):
            e_s, e_b = small.estimates[idx], big.estimates[idx]
            if not (
                e_b.p_log < e_s.p_log
                and e_b.p_log + e_b.ci99_halfwidth < e_s.p_log - e_s.ci99_halfwidth
            ):
                holds = False
                break
        if not holds:
            break
        p_th = p
    return ThresholdEstimate(p_threshold=p_th, method_note=_THRESHOLD_NOTE)


@dataclass(frozen=True)
class ToricComparison:
    """Block-failure comparison of one code against k/2 toric copies."""

    p: float
    k: int
    hgp_block_fail: float
    hgp_ci99: float
    toric_block_fail: float
    toric_ci99: float


def compare_with_toric(
    hgp_estimate: EstimateWithCI, toric_q: EstimateWithCI, k: int
) -> ToricComparison:
    """Compare block failure of a k-logical-qubit code with k/2 toric copies.

    The toric block rate is 1 - (1 - q_log)^(k/2); its CI comes from the
    first-order delta method on the exponentiation.  Odd k is refused: the
    k/2-copies metric is undefined there.
    """
    if k % 2 != 0:
        raise ValueError(f"k={k} is odd; the k/2-toric-copies metric needs even k")
    if hgp_estimate.p != toric_q.p:
        raise ValueError("estimates were taken at different physical rates")
    half_k = k // 2
    q = toric_q.p_log
    block = 1.0 - (1.0 - q) ** half_k
    deriv = half_k * (1.0 - q) ** (half_k - 1)
    return ToricComparison(
        p=hgp_estimate.p,
        k=k,
        hgp_block_fail=hgp_estimate.p_log,
        hgp_ci99=hgp_estimate.ci99_halfwidth,
        toric_block_fail=block,
        toric_ci99=deriv * toric_q.ci99_halfwidth,
    )


def comparison_to_json_dict(cmp: ToricComparison) -> dict:
    return {
        "p": cmp.p,
        "k": cmp.k,
        "hgp_block_fail": cmp.hgp_block_fail,
        "hgp_ci99": cmp.hgp_ci99,
        "toric_block_fail": cmp.toric_block_fail,
        "toric_ci99": cmp.toric_ci99,
    }


def _toric_trial_fails(code: ToricCode, p: float, stream: TrialStream) -> bool:
    x_err, z_err = sample_noise_dense(code.css.n_qubits, p, stream)
    vertex_syn = code.css.h_x.mat_vec_mul(BitVector.from_dense(z_err))
    corr = mwpm_decode(code, vertex_syn, "z")
    residual = BitVector.from_dense(z_err ^ corr.to_dense())
    if toric_logical_failure(code, residual, "z"):
        return True
    plaq_syn = code.css.h_z.mat_vec_mul(BitVector.from_dense(x_err))
    corr = mwpm_decode(code, plaq_syn, "x")
    residual = BitVector.from_dense(x_err ^ corr.to_dense())
    return toric_logical_failure(code, residual, "x")


def estimate_toric(code: ToricCode, p: float, trials: int, seed: int) -> EstimateWithCI:
    """q_log for the toric code under the same noise and failure rules."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    failures = 0
    for t in range(trials):
        if _toric_trial_fails(code, p, TrialStream(seed, t)):
            failures += 1
    return EstimateWithCI.from_counts(p, trials, failures)


def write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
