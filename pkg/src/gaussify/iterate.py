"""The iteration map in both closed forms, plus the multi-step driver.

One iteration mixes two identical copies pairwise at balanced beam
splitters and keeps the result only when both monitored outputs show
vacuum.  On Schmidt-diagonal coefficients c[n] the surviving map is

    c'[n] = 2^-n sum_r C(n, r) c[r] c[n-r],

and on a general amplitude table

    a'[m, n] = 2^(-(m+n)/2) sum_{r, s} (-1)^((m+n)-(r+s)) a[r, s]
               a[m-r, n-s] sqrt(C(m, r) C(n, s)).

Both are evaluated here directly (the general form as a factorially scaled
2-D self-convolution); the four-mode construction in ``optics`` serves as
the independent cross-check.
"""

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import convolve2d

from .errors import (
    DegenerateProtocolError,
    DegenerateStateError,
    NoGaussianLimitError,
    NonConvergenceError,
)
from . import fixed_point
from .fock import MixedState2, PureState2, SchmidtDiagonal, norm_sq, overlap
from .optics import BeamSplitter


@dataclass(frozen=True)
class IterationReport:
    """Per-iteration bookkeeping for one run of the protocol.

    ``cumulative_probability`` is the product of per-step conditional
    probabilities: the chance that one specific measurement chain succeeds.
    ``cumulative_probability_tree`` compounds the pairwise tree instead
    (P_i = P_{i-1}^2 * p_i); both are reported, the product is the headline.
    """

    step: int
    step_probability: float
    cumulative_probability: float
    cumulative_probability_tree: float
    norm_sq: float
    fidelity_to_limit: float | None
    tail_mass: float


@dataclass(frozen=True)
class RunOptions:
    cutoff_ceiling: int = 64
    tail_tol: float = 1e-10
    divergence_threshold: float = 1e6
    compute_fidelity: bool = True


def schmidt_step(alpha, cap=None):
    """One iteration on Schmidt-diagonal coefficients.

    The support doubles each step; ``cap`` truncates the output sequence to
    indices <= cap.  Exact binomials keep the sums accurate to machine
    precision at any order.
    """
    c = alpha.coeffs
    if c[0] == 0.0:
        raise DegenerateProtocolError("protocol degenerate")
    n_in = len(c) - 1
    n_out = 2 * n_in
    if cap is not None:
        n_out = min(n_out, cap)
    out = np.empty(n_out + 1)
    for n in range(n_out + 1):
        acc = 0.0
        for r in range(max(0, n - n_in), min(n_in, n) + 1):
            acc += math.comb(n, r) * c[r] * c[n - r]
        out[n] = acc / (1 << n)
    return SchmidtDiagonal(out, leading_unit=alpha.leading_unit and out[0] == 1.0)


def _factorial_scales(count):
    fact = np.array([math.factorial(k) for k in range(count)], dtype=float)
    return np.sqrt(fact)


def general_step_pair(amps_a, amps_b, cap=None):
    """Bilinear core of the general map on two amplitude tables.

    Computes out[m, n] = 2^(-(m+n)/2) sum (-1)^((m+n)-(r+s)) a[r, s]
    b[m-r, n-s] sqrt(C(m, r) C(n, s)) via a scaled 2-D convolution.
    """
    ca, cb = amps_a.shape[0] - 1, amps_b.shape[0] - 1
    sq_a = _factorial_scales(ca + 1)
    sq_b = _factorial_scales(cb + 1)
    idx_a = np.arange(ca + 1)
    sign = (-1.0) ** (idx_a[:, None] + idx_a[None, :])
    scaled_a = amps_a * sign / (sq_a[:, None] * sq_a[None, :])
    scaled_b = amps_b / (sq_b[:, None] * sq_b[None, :])
    conv = convolve2d(scaled_a, scaled_b)
    m_out = np.arange(ca + cb + 1)
    sq_out = _factorial_scales(ca + cb + 1)
    total = m_out[:, None] + m_out[None, :]
    out = (-1.0) ** total * 2.0 ** (-total / 2.0) * sq_out[:, None] * sq_out[None, :]
    out = out * conv
    if cap is not None and cap < ca + cb:
        out = out[: cap + 1, : cap + 1]
    return out


def general_step(state, cap=None):
    """One iteration on a general (possibly complex) amplitude table.

    Output support is twice the input support; odd total photon numbers
    vanish identically after a single application.
    """
    out = general_step_pair(state.amps, state.amps, cap=cap)
    return PureState2(out.shape[0] - 1, out)


def step_probability(before, after):
    """Probability of the both-vacuum outcome for one step.

    Equals norm_sq(after) / norm_sq(before)^2, which is invariant under
    rescaling of the iterate.
    """
    n_before = norm_sq(before)
    if n_before <= 0.0:
        raise DegenerateStateError("degenerate state")
    return norm_sq(after) / n_before**2


def fidelity_to(state, target):
    """Normalized squared overlap |<state|target>|^2 / (|state|^2 |target|^2)."""
    if isinstance(state, SchmidtDiagonal):
        state = state.to_pure()
    if isinstance(target, SchmidtDiagonal):
        target = target.to_pure()
    ns, nt = norm_sq(state), norm_sq(target)
    if ns <= 0.0 or nt <= 0.0:
        raise DegenerateStateError("degenerate state")
    return float(abs(overlap(state, target)) ** 2 / (ns * nt))


def _schmidt_limit(alpha, ceiling):
    lam = alpha.coeffs[1] / alpha.coeffs[0] if len(alpha.coeffs) > 1 else 0.0
    if not 0.0 <= lam < 1.0:
        return None
    n = np.arange(ceiling + 1)
    return SchmidtDiagonal(lam**n)


def _general_limit(state, ceiling):
    gamma = fixed_point.gamma_from_state(state)
    if not fixed_point.is_normalizable(gamma):
        return None
    return fixed_point.limit_coefficients(gamma, ceiling)


def run_protocol(initial, iterations, options=None):
    """Apply the iteration ``iterations`` times with full bookkeeping.

    Returns the final iterate and one IterationReport per step.  Iterates
    are renormalized after each probability extraction (to a unit leading
    coefficient on the Schmidt path, to unit norm on the general path);
    probabilities are unaffected because the map is quadratic.

    Fidelity to the analytic limit state is reported whenever that limit is
    normalizable; computing it requires a nonvanishing vacuum amplitude.
    The run aborts with NonConvergenceError if the renormalized-convention
    iterate's squared norm passes the divergence threshold.
    """
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    opts = options or RunOptions()
    schmidt_path = isinstance(initial, SchmidtDiagonal)

    if schmidt_path:
        if initial.coeffs[0] == 0.0:
            raise DegenerateProtocolError("protocol degenerate")
        current = SchmidtDiagonal(initial.coeffs / initial.coeffs[0], leading_unit=True)
    else:
        current = initial

    limit = None
    if opts.compute_fidelity:
        if schmidt_path:
            limit = _schmidt_limit(current, opts.cutoff_ceiling)
        else:
            limit = _general_limit(current, opts.cutoff_ceiling)

    reports = []
    cum_product = 1.0
    cum_tree = 1.0
    for step in range(1, iterations + 1):
        if schmidt_path:
            stepped = schmidt_step(current)
        else:
            stepped = general_step(current)

        prob = step_probability(current, stepped)

        # truncate to the ceiling, recording the discarded fraction
        tail = 0.0
        if schmidt_path:
            coeffs = stepped.coeffs
            if len(coeffs) - 1 > opts.cutoff_ceiling:
                kept = coeffs[: opts.cutoff_ceiling + 1]
                dropped = float(np.sum(coeffs[opts.cutoff_ceiling + 1 :] ** 2))
                tail = dropped / (dropped + float(np.sum(kept**2)))
                stepped = SchmidtDiagonal(kept)
        else:
            if stepped.cutoff > opts.cutoff_ceiling:
                edge = opts.cutoff_ceiling + 1
                amps = stepped.amps
                dropped = float(
                    np.sum(np.abs(amps[edge:, :]) ** 2)
                    + np.sum(np.abs(amps[:edge, edge:]) ** 2)
                )
                kept = amps[:edge, :edge]
                tail = dropped / (dropped + float(np.sum(np.abs(kept) ** 2)))
                stepped = PureState2(opts.cutoff_ceiling, kept)

        raw_norm_sq = norm_sq(stepped)
        if raw_norm_sq <= 0.0:
            raise DegenerateStateError("degenerate state")

        # growth is judged in the unit-vacuum-amplitude convention, which the
        # unit-norm rescaling below would otherwise mask
        if schmidt_path:
            convention_norm_sq = raw_norm_sq
        else:
            vac = abs(stepped.amps[0, 0])
            convention_norm_sq = raw_norm_sq / vac**2 if vac > 0.0 else math.inf
        if convention_norm_sq > opts.divergence_threshold:
            raise NonConvergenceError(step, convention_norm_sq)

        cum_product *= prob
        cum_tree = cum_tree**2 * prob

        if schmidt_path:
            current = SchmidtDiagonal(
                stepped.coeffs / stepped.coeffs[0], leading_unit=True
            )
        else:
            current = PureState2(stepped.cutoff, stepped.amps / math.sqrt(raw_norm_sq))

        fid = fidelity_to(current, limit) if limit is not None else None
        reports.append(
            IterationReport(
                step=step,
                step_probability=prob,
                cumulative_probability=cum_product,
                cumulative_probability_tree=cum_tree,
                norm_sq=raw_norm_sq,
                fidelity_to_limit=fid,
                tail_mass=tail,
            )
        )
    return current, reports


def mixed_step(rho, out_cutoff=None, branch_tol=1e-13):
    """Density-operator version of one iteration for the mixed pipeline.

    Decomposes rho into eigenbranches, pushes every ordered branch pair
    through the vacuum-conditioned bilinear map, and reassembles the
    un-normalized conditional density operator.  On a rank-1 input this
    reproduces the projector induced by ``general_step`` exactly.

    ``out_cutoff`` defaults to the input cutoff (the mixed pipeline runs at
    a fixed cutoff); eigenbranches below ``branch_tol`` relative weight are
    dropped.
    """
    tr = rho.trace
    if tr <= 0.0:
        raise DegenerateStateError("degenerate state")
    if out_cutoff is None:
        out_cutoff = rho.cutoff
    dim = rho.cutoff + 1
    evals, evecs = np.linalg.eigh(rho.matrix)
    keep = evals > max(evals.max(), 0.0) * branch_tol
    weights = evals[keep]
    branches = [evecs[:, i].reshape(dim, dim) for i in np.nonzero(keep)[0]]

    out_dim = out_cutoff + 1
    vectors = []
    pair_weights = []
    for wj, bj in zip(weights, branches):
        for wk, bk in zip(weights, branches):
            amp = general_step_pair(bj, bk, cap=out_cutoff)
            full = np.zeros((out_dim, out_dim), dtype=complex)
            full[: amp.shape[0], : amp.shape[1]] = amp
            vectors.append(full.ravel())
            pair_weights.append(wj * wk)
    stacked = np.array(vectors)
    w = np.array(pair_weights)
    matrix = (stacked.T * w) @ stacked.conj()
    matrix = 0.5 * (matrix + matrix.conj().T)
    return MixedState2(out_cutoff, matrix)


def balanced_splitter():
    """The splitter realizing the iteration map (for the four-mode oracle)."""
    return BeamSplitter.balanced()
