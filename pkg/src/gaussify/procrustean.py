"""Preparation of the protocol's seed states from weakly squeezed inputs.

Two copies of a two-mode squeezed vacuum pass through one beam splitter per
side; keeping only outcomes where *both* detectors see at least one photon
(without resolving how many) trims the pair into an approximately
two-qubit maximally entangled state.  The detectors cannot distinguish
photon numbers, so the conditional output is a mixture over count pairs.

The side-B splitter is redundant in the matched configuration and is fixed
to the full reflector (T, R) = (0, 1).  The copies enter side B's splitter
in swapped port order; that wiring is what makes the quoted matched
transmittance correct, with the heralding detectors on the two sides
monitoring opposite copies.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, NoClickSupportError
from .fock import (
    MixedState2,
    PureState2,
    from_entries,
    norm_sq,
    purity,
    reduce_to_mode,
    trace_norm_distance,
    von_neumann_entropy,
)
from .iterate import RunOptions, mixed_step, run_protocol
from .optics import BeamSplitter, click_project, mix_pair

MIN_CLICK_PROBABILITY = 1e-300


def tmsv(q, cutoff):
    """Two-mode squeezed vacuum sqrt(1 - q^2) sum q^n |n, n>, truncated.

    The truncated table keeps the analytic coefficients; the missing tail
    weight is ``tmsv_tail_mass(q, cutoff)``.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError("q must lie in [0, 1)")
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    scale = math.sqrt(1.0 - q * q)
    for n in range(cutoff + 1):
        amps[n, n] = scale * q**n
    return PureState2(cutoff, amps)


def tmsv_tail_mass(q, cutoff):
    """Probability weight beyond the cutoff: q^(2 (cutoff + 1))."""
    return float(q ** (2 * (cutoff + 1)))


def optimal_t(q, target_alpha11=1.0):
    """Splitter magnitudes steering the prepared state toward a target.

    Returns (|t|, |r|) with |t| = |(a - sqrt(a^2 + 8 q^2)) / (4 q)| for the
    target ratio a of the one-photon-pair to vacuum amplitude; a = 1 aims at
    the maximally entangled state.
    """
    if q <= 0.0:
        raise DegenerateStateError("degenerate: no photons")
    if target_alpha11 < 0.0:
        raise ValueError("target amplitude ratio must be non-negative")
    a = float(target_alpha11)
    t_mag = abs((a - math.sqrt(a * a + 8.0 * q * q)) / (4.0 * q))
    r_mag = math.sqrt(1.0 - t_mag * t_mag)
    return t_mag, r_mag


@dataclass(frozen=True)
class PrepConfig:
    """Inputs of one preparation run."""

    q: float
    splitter_a: BeamSplitter
    splitter_b: BeamSplitter
    cutoff: int

    @classmethod
    def matched(cls, q, cutoff, transmittance=None):
        """Matched side-A splitter, redundant side B fixed to (0, 1)."""
        if transmittance is None:
            t_mag, r_mag = optimal_t(q)
        else:
            t_mag = float(transmittance)
            r_mag = math.sqrt(1.0 - t_mag * t_mag)
        return cls(
            q=q,
            splitter_a=BeamSplitter(t_mag, r_mag),
            splitter_b=BeamSplitter(0.0, 1.0),
            cutoff=cutoff,
        )


@dataclass(frozen=True)
class PrepResult:
    state: MixedState2
    success_probability: float
    tail_mass: float


def prepare(config):
    """Click-conditioned preparation of the seed state.

    Mixes two squeezed-vacuum copies pairwise, conditions on a click in
    each monitored arm, traces the monitored modes out, and returns the
    normalized conditional state with the total click probability.  The
    output state is truncated to ``config.cutoff`` per mode; the discarded
    in-branch weight is reported as ``tail_mass``.
    """
    if config.q <= 0.0:
        raise DegenerateStateError("degenerate: no photons")
    seed = tmsv(config.q, config.cutoff)
    four = mix_pair(seed, seed, config.splitter_a, config.splitter_b, cross_b=True)
    outcomes = click_project(four)
    p_click = sum(o.probability for o in outcomes)
    if p_click < MIN_CLICK_PROBABILITY:
        raise NoClickSupportError("no click support")

    dim = config.cutoff + 1
    rho = np.zeros((dim * dim, dim * dim), dtype=complex)
    kept_weight = 0.0
    for outcome in outcomes:
        amp = outcome.state.amps[:dim, :dim]
        kept_weight += float(np.sum(np.abs(amp) ** 2))
        flat = np.zeros((dim, dim), dtype=complex)
        flat[: amp.shape[0], : amp.shape[1]] = amp
        flat = flat.ravel()
        rho += np.outer(flat, flat.conj())
    tail = 1.0 - kept_weight / p_click
    rho /= np.trace(rho).real
    rho = 0.5 * (rho + rho.conj().T)
    return PrepResult(MixedState2(config.cutoff, rho), p_click, tail)


def target_bell(phi, cutoff=1):
    """Rank-1 density operator of (|0,0> + exp(-i phi) |1,1>) / sqrt(2)."""
    state = from_entries(
        cutoff,
        {(0, 0): 1.0 / math.sqrt(2.0), (1, 1): np.exp(-1j * phi) / math.sqrt(2.0)},
    )
    return MixedState2.from_pure(state)


def best_phase_bell_distance(omega, scan_points=96, refine_rounds=40):
    """Phase minimizing the trace distance of ``omega`` to the Bell target.

    Coarse scan over [0, 2 pi) followed by golden-section refinement.
    Returns (phi, distance).
    """

    def dist(phi):
        return trace_norm_distance(omega, target_bell(phi, omega.cutoff))

    grid = np.linspace(0.0, 2.0 * math.pi, scan_points, endpoint=False)
    values = [dist(phi) for phi in grid]
    i_best = int(np.argmin(values))
    span = 2.0 * math.pi / scan_points
    lo, hi = grid[i_best] - span, grid[i_best] + span
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - golden * (hi - lo)
    x2 = lo + golden * (hi - lo)
    f1, f2 = dist(x1), dist(x2)
    for _ in range(refine_rounds):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - golden * (hi - lo)
            f1 = dist(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + golden * (hi - lo)
            f2 = dist(x2)
    phi = 0.5 * (lo + hi)
    return phi % (2.0 * math.pi), dist(phi)


@dataclass(frozen=True)
class DistillResult:
    entanglement_ratio: float
    overall_probability: float
    reports: tuple
    purity: float
    entropy_initial: float
    entropy_final: float
    click_probability: float


def _entropy_of_reduction(rho):
    return von_neumann_entropy(reduce_to_mode(rho, "A"))


def distill_pipeline(q, transmittance, iterations, cutoff):
    """Full distillation run: preparation followed by vacuum iterations.

    The entanglement measure is the entropy of the single-mode reduction,
    reported as the ratio of the final state's to the input squeezed
    vacuum's even when the final state is slightly mixed; its purity is
    returned alongside as the caveat.  The overall probability multiplies
    the click probability of the preparation with every iteration's
    vacuum probability.
    """
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie in (0, 1)")
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    config = PrepConfig.matched(q, cutoff, transmittance)
    prep = prepare(config)

    entropy_initial = _entropy_of_reduction(MixedState2.from_pure(tmsv(q, cutoff)))

    rho = prep.state
    probabilities = []
    for _ in range(iterations):
        trace_before = rho.trace
        stepped = mixed_step(rho)
        trace_after = stepped.trace
        probabilities.append(trace_after / trace_before**2)
        rho = MixedState2(stepped.cutoff, stepped.matrix / trace_after)

    entropy_final = _entropy_of_reduction(rho)
    overall = prep.success_probability * float(np.prod(probabilities)) \
        if probabilities else prep.success_probability
    return DistillResult(
        entanglement_ratio=entropy_final / entropy_initial,
        overall_probability=overall,
        reports=tuple(probabilities),
        purity=purity(rho),
        entropy_initial=entropy_initial,
        entropy_final=entropy_final,
        click_probability=prep.success_probability,
    )


def pure_pipeline_reference(state, iterations, cutoff):
    """Pure-state reference for pipeline consistency checks.

    Runs the pure protocol on ``state`` and returns the entropy of the
    single-mode reduction of the final iterate.
    """
    final, _ = run_protocol(
        state, iterations, RunOptions(cutoff_ceiling=cutoff, compute_fidelity=False)
    )
    n2 = norm_sq(final)
    if n2 <= 0.0:
        raise DegenerateStateError("degenerate state")
    return von_neumann_entropy(reduce_to_mode(final, "A"))
