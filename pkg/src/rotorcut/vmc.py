"""Variational Monte Carlo over the rotor RBM's Born density.

One optimization step samples the density pi(t) ~ exp(2 log psi(t)) with a
random-walk Metropolis chain, estimates the energy gradient from the
covariance of local energies with the log-derivatives O_k, solves the
regularized stochastic-reconfiguration system (S + lambda I) d = grad with
matrix-free MINRES, and moves the packed parameters against d. The local
energy is exactly the rotor cost: the Hamiltonian is diagonal, so there is
no kinetic contribution.

The chain persists across iterations; each batch discards its first n_warm
steps so the walkers relax after every parameter update.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, minres

from .bmz import procedure_cut
from .graph import Graph
from .objective import TWO_PI, cost
from .rbm import RbmParams, log_derivatives, log_psi


@dataclass(frozen=True)
class VmcConfig:
    """Knobs of the stochastic optimizer.

    n_samp Metropolis steps are taken per iteration and the first n_warm
    are discarded from the estimators, so every batch keeps
    n_samp - n_warm >= 2 samples. minres_max_iter of None means "number of
    parameters".
    """

    n_samp: int = 40
    n_warm: int = 0
    n_iter: int = 1000
    lambda_reg: float = 1e-6
    learning_rate: float = 0.01
    alpha: float = 1.0
    proposal_step: float = 0.3
    minres_tol: float = 1e-10
    minres_max_iter: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.n_warm < 0:
            raise ValueError("n_warm must be >= 0")
        if self.n_samp - self.n_warm < 2:
            raise ValueError("need n_samp - n_warm >= 2 kept samples")
        if self.n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        if self.lambda_reg < 0:
            raise ValueError("lambda_reg must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.proposal_step <= 0:
            raise ValueError("proposal_step must be positive")
        if self.minres_tol <= 0:
            raise ValueError("minres_tol must be positive")
        if self.minres_max_iter is not None and self.minres_max_iter < 1:
            raise ValueError("minres_max_iter must be >= 1 when given")


@dataclass
class ChainState:
    """One Metropolis walker: position, cached log psi, and its generator.

    The cache always equals log_psi(params, theta) for the parameters the
    chain is currently sampling; `accepted` records the outcome of the most
    recent step.
    """

    theta: np.ndarray
    log_psi: float
    rng: np.random.Generator
    accepted: bool = False


@dataclass(frozen=True)
class SrBatch:
    """Samples kept from one iteration's chain segment.

    o_matrix rows are packed log-derivatives, e_loc the rotor cost, both
    aligned 1:1 with `samples`. accept_rate covers the whole segment,
    warm steps included.
    """

    samples: np.ndarray    # (N, n)
    o_matrix: np.ndarray   # (N, P)
    e_loc: np.ndarray      # (N,)
    accept_rate: float


@dataclass(frozen=True)
class SrDiagnostics:
    e_mean: float
    accept_rate: float
    residual: float
    best_energy: float
    best_theta: np.ndarray


@dataclass
class RunTrace:
    """Full record of a VMC run; arrays are indexed by iteration."""

    e_mean: np.ndarray
    accept_rate: np.ndarray
    residual: np.ndarray
    min_e_loc: np.ndarray
    final_params: RbmParams
    best_theta: np.ndarray
    best_energy: float
    best_cut_value: float
    best_cut_assignment: np.ndarray
    config: VmcConfig
    wall_time_s: float


def chain_init(p: RbmParams, seed) -> ChainState:
    """Fresh walker at a uniform random configuration drawn from seed."""
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, TWO_PI, size=p.n)
    return ChainState(theta=theta, log_psi=log_psi(p, theta), rng=rng)


def mh_step(p: RbmParams, s: ChainState, step: float) -> ChainState:
    """One random-walk Metropolis step targeting the Born density.

    Proposes t' = t + delta with delta ~ Uniform(-step, step) per
    coordinate (wrapped mod 2*pi) and accepts with probability
    min(1, exp(2*(log_psi(t') - log_psi(t)))). The proposal is symmetric on
    the torus, so this satisfies detailed balance for pi ~ psi^2.
    """
    delta = s.rng.uniform(-step, step, size=s.theta.size)
    proposal = np.mod(s.theta + delta, TWO_PI)
    lp = log_psi(p, proposal)
    log_ratio = 2.0 * (lp - s.log_psi)
    if np.log(s.rng.random()) < log_ratio:
        return ChainState(theta=proposal, log_psi=lp, rng=s.rng, accepted=True)
    return ChainState(theta=s.theta, log_psi=s.log_psi, rng=s.rng, accepted=False)


def sample_batch(
    g: Graph, p: RbmParams, s: ChainState, cfg: VmcConfig
) -> tuple[SrBatch, ChainState]:
    """Advance the chain n_samp steps, keeping the last n_samp - n_warm.

    Warm steps are discarded without evaluating derivatives or energies.
    The returned chain continues from where the segment ended.
    """
    n_keep = cfg.n_samp - cfg.n_warm
    samples = np.empty((n_keep, p.n))
    o_matrix = np.empty((n_keep, p.n_params))
    e_loc = np.empty(n_keep)
    accepts = 0
    for k in range(cfg.n_samp):
        s = mh_step(p, s, cfg.proposal_step)
        accepts += s.accepted
        idx = k - cfg.n_warm
        if idx >= 0:
            samples[idx] = s.theta
            o_matrix[idx] = log_derivatives(p, s.theta)
            e_loc[idx] = cost(g, s.theta)
    batch = SrBatch(
        samples=samples,
        o_matrix=o_matrix,
        e_loc=e_loc,
        accept_rate=accepts / cfg.n_samp,
    )
    return batch, s


def estimate_forces(batch: SrBatch) -> tuple[float, np.ndarray, np.ndarray]:
    """Monte Carlo energy and gradient estimates from one batch.

    Returns (e_mean, g, o_mean) with g_k = 2*(<e O_k> - <e><O_k>), the
    sampled gradient of E[cost] over the Born density with respect to the
    packed parameters.
    """
    n = batch.e_loc.size
    if n < 2:
        raise ValueError("batch must contain at least 2 samples")
    e_mean = float(batch.e_loc.mean())
    o_mean = batch.o_matrix.mean(axis=0)
    grad = 2.0 * (batch.e_loc @ batch.o_matrix / n - e_mean * o_mean)
    return e_mean, grad, o_mean


def apply_metric(batch: SrBatch, x, lam: float) -> np.ndarray:
    """(S + lam*I) x for the SR metric S = <O O> - <O><O>, matrix-free.

    Uses two passes over the row-centered O matrix; the P x P matrix is
    never formed.
    """
    x = np.asarray(x, dtype=float)
    n, n_params = batch.o_matrix.shape
    if x.shape != (n_params,):
        raise ValueError(f"vector length {x.shape} does not match P={n_params}")
    centered = batch.o_matrix - batch.o_matrix.mean(axis=0)
    return centered.T @ (centered @ x) / n + lam * x


def minres_solve(
    apply: Callable[[np.ndarray], np.ndarray],
    rhs,
    tol: float,
    max_iter: int,
) -> tuple[np.ndarray, float, int]:
    """Solve the symmetric system apply(x) = rhs with MINRES.

    Stops when the residual passes tol relative to |rhs| or at max_iter;
    the true residual |apply(x) - rhs| is measured and returned either way.
    """
    rhs = np.asarray(rhs, dtype=float)
    if not np.all(np.isfinite(rhs)):
        raise FloatingPointError("non-finite right-hand side")
    size = rhs.size
    if np.linalg.norm(rhs) == 0.0:
        return np.zeros(size), 0.0, 0

    iters = 0

    def _count(_):
        nonlocal iters
        iters += 1

    op = LinearOperator((size, size), matvec=apply, dtype=float)
    x, _ = minres(op, rhs, rtol=tol, maxiter=max_iter, callback=_count)
    if not np.all(np.isfinite(x)):
        raise FloatingPointError("non-finite values in MINRES solution")
    residual = float(np.linalg.norm(apply(x) - rhs))
    return x, residual, iters


def sr_iteration(
    g: Graph, p: RbmParams, chain: ChainState, cfg: VmcConfig
) -> tuple[RbmParams, ChainState, SrDiagnostics]:
    """One full stochastic-reconfiguration cycle.

    Sample, estimate forces, solve (S + lambda_reg I) d = grad, and step
    the packed parameters by -learning_rate * d.
    """
    batch, chain = sample_batch(g, p, chain, cfg)
    e_mean, force, _ = estimate_forces(batch)
    max_iter = cfg.minres_max_iter if cfg.minres_max_iter is not None else p.n_params
    delta, residual, _ = minres_solve(
        lambda v: apply_metric(batch, v, cfg.lambda_reg),
        force,
        cfg.minres_tol,
        max_iter,
    )
    updated = RbmParams.unpack(p.pack() - cfg.learning_rate * delta, p.n, p.m)
    k = int(np.argmin(batch.e_loc))
    diag = SrDiagnostics(
        e_mean=e_mean,
        accept_rate=batch.accept_rate,
        residual=residual,
        best_energy=float(batch.e_loc[k]),
        best_theta=batch.samples[k].copy(),
    )
    return updated, chain, diag


def run_vmc(g: Graph, cfg: VmcConfig, init: RbmParams) -> RunTrace:
    """Run cfg.n_iter SR iterations from the given initial parameters.

    The chain starts at uniform random angles drawn from cfg.seed and is
    never restarted. The reported solution is the lowest-cost configuration
    ever sampled (first occurrence on ties), together with its
    Procedure-Cut rounding. Identical (graph, cfg, init) reproduce the
    trace bit for bit.
    """
    if init.n != g.n:
        raise ValueError(f"params are for n={init.n}, graph has n={g.n}")
    t_start = time.perf_counter()

    chain = chain_init(init, cfg.seed)
    p = init
    e_mean = np.empty(cfg.n_iter)
    accept_rate = np.empty(cfg.n_iter)
    residual = np.empty(cfg.n_iter)
    min_e_loc = np.empty(cfg.n_iter)
    best_energy = np.inf
    best_theta = chain.theta.copy()
    for it in range(cfg.n_iter):
        p, chain, diag = sr_iteration(g, p, chain, cfg)
        e_mean[it] = diag.e_mean
        accept_rate[it] = diag.accept_rate
        residual[it] = diag.residual
        min_e_loc[it] = diag.best_energy
        if diag.best_energy < best_energy:
            best_energy = diag.best_energy
            best_theta = diag.best_theta

    best_cut_value, best_cut = procedure_cut(g, best_theta)
    return RunTrace(
        e_mean=e_mean,
        accept_rate=accept_rate,
        residual=residual,
        min_e_loc=min_e_loc,
        final_params=p,
        best_theta=best_theta,
        best_energy=float(best_energy),
        best_cut_value=best_cut_value,
        best_cut_assignment=best_cut,
        config=cfg,
        wall_time_s=time.perf_counter() - t_start,
    )


def write_trace_csv(trace: RunTrace, path) -> None:
    """Per-iteration CSV: iteration, e_mean, accept_rate, residual.

    Floats are written with repr so identical runs produce identical bytes.
    """
    lines = ["iteration,e_mean,accept_rate,residual"]
    for it in range(trace.e_mean.size):
        lines.append(
            f"{it + 1},{float(trace.e_mean[it])!r},{float(trace.accept_rate[it])!r},"
            f"{float(trace.residual[it])!r}"
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def trace_summary(trace: RunTrace) -> dict:
    """JSON-ready summary: best energy, best cut, config echo, wall time."""
    return {
        "best_energy": trace.best_energy,
        "best_cut_value": trace.best_cut_value,
        "best_cut_assignment": [int(v) for v in trace.best_cut_assignment],
        "config": asdict(trace.config),
        "wall_time_s": trace.wall_time_s,
    }
