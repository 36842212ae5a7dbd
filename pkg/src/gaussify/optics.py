"""Beam-splitter unitaries on the Fock basis and post-selection projectors.

A beam splitter conserves total photon number, so its Fock representation is
block diagonal in the total count N.  Blocks are derived from the operator
form U = T^{n1} exp(-conj(R) a2+ a1) exp(R a2 a1+) T^{-n2}, whose action on
creation operators is

    U a1+ U+ = T a1+ - conj(R) a2+,        U a2+ U+ = R a1+ + conj(T) a2+.

Expanding U |p, q> = (U a1+ U+)^p (U a2+ U+)^q |0, 0> / sqrt(p! q!) gives the
matrix elements as binomial sums with no negative powers of T.  (The direct
four-factor operator product is algebraically identical but suffers
|T|^(-N) cancellation; the expansion below is stable down to T = 0, where
the splitter degenerates to a mode swap.)

The four-mode machinery pairs two two-mode states, applies one splitter per
side locally, and conditions on a detector outcome in one output arm of
each splitter.  Four-mode arrays are internal scratch; the public surface
deals in two-mode states plus outcome weights.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegenerateStateError
from .fock import PureState2

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class BeamSplitter:
    """Transmittance / reflectance pair with |T|^2 + |R|^2 = 1."""

    transmittance: complex
    reflectance: complex

    def __post_init__(self):
        t, r = complex(self.transmittance), complex(self.reflectance)
        if abs(abs(t) ** 2 + abs(r) ** 2 - 1.0) > UNITARITY_TOL:
            raise ValueError("|T|^2 + |R|^2 must equal 1 within 1e-12")
        object.__setattr__(self, "transmittance", t)
        object.__setattr__(self, "reflectance", r)

    @classmethod
    def balanced(cls):
        """The 50:50 splitter used by the vacuum-conditioned iteration."""
        s = 1.0 / math.sqrt(2.0)
        return cls(s, s)

    def inverse(self):
        return BeamSplitter(
            self.transmittance.conjugate(), -self.reflectance
        )


@dataclass(frozen=True, eq=False)
class BSMatrix:
    """Fock matrix elements of a beam splitter, one unitary block per total N.

    ``blocks[N][m, p]`` is <m, N-m| U |p, N-p> for N up to 2 * cutoff.
    Entries across different totals vanish identically and are never stored.
    """

    cutoff: int
    splitter: BeamSplitter
    blocks: tuple

    def block(self, total):
        return self.blocks[total]

    def vacuum_row(self, total):
        """<0, N| U |p, N-p> for p = 0..N: the vacuum-detection weights."""
        return self.blocks[total][0, :]


def _block(t, r, total):
    tc, rc = t.conjugate(), r.conjugate()
    dim = total + 1
    blk = np.zeros((dim, dim), dtype=complex)
    fact = [math.factorial(k) for k in range(dim)]
    for p in range(dim):
        q = total - p
        for m in range(dim):
            n = total - m
            acc = 0j
            for j in range(max(0, m - q), min(p, m) + 1):
                acc += (
                    math.comb(p, j)
                    * math.comb(q, m - j)
                    * t**j
                    * (-rc) ** (p - j)
                    * r ** (m - j)
                    * tc ** (q - m + j)
                )
            blk[m, p] = acc * math.sqrt(fact[m] * fact[n] / (fact[p] * fact[q]))
    return blk


@lru_cache(maxsize=64)
def _cached_blocks(t, r, max_total):
    return tuple(_block(t, r, total) for total in range(max_total + 1))


def bs_matrix(bs, cutoff):
    """All Fock matrix elements of ``bs`` for totals up to 2 * cutoff."""
    blocks = _cached_blocks(bs.transmittance, bs.reflectance, 2 * cutoff)
    return BSMatrix(cutoff, bs, blocks)


@dataclass(frozen=True, eq=False)
class FourModeState:
    """Scratch amplitudes after pairwise mixing, before conditioning.

    ``amps[ka, kb, ma, mb]``: ka photons in the monitored output on side A,
    kb on side B, and (ma, mb) in the two kept outputs.
    """

    amps: np.ndarray

    def vacuum_slice(self):
        return self.amps[0, 0]

    def total_weight(self):
        return float(np.sum(np.abs(self.amps) ** 2))


@dataclass(frozen=True, eq=False)
class ClickOutcome:
    """One detector outcome with >= 1 photon seen on each monitored arm."""

    photons_a: int
    photons_b: int
    state: PureState2
    probability: float


def _bs4(bsm, cutoff_a, cutoff_b):
    # tensor [k, m, r, u] = <k, m| U |r, u>, nonzero only on k+m == r+u
    out_dim = cutoff_a + cutoff_b + 1
    tensor = np.zeros((out_dim, out_dim, cutoff_a + 1, cutoff_b + 1), dtype=complex)
    for rr in range(cutoff_a + 1):
        for u in range(cutoff_b + 1):
            total = rr + u
            blk = bsm.block(total)
            ks = np.arange(total + 1)
            tensor[ks, total - ks, rr, u] = blk[:, rr]
    return tensor


def mix_pair(state_a, state_b, bs_alice, bs_bob, cross_b=False):
    """Mix two copies pairwise and return the four-mode output amplitudes.

    Side A mixes (copy-1, copy-2) of the first Fock index through
    ``bs_alice``; side B does the same for the second index through
    ``bs_bob``.  With ``cross_b`` the copies enter side B's splitter in
    swapped port order, the wiring used by the click-conditioned
    preparation step.
    """
    if state_a.cutoff != state_b.cutoff:
        raise ValueError("states must share a cutoff")
    c = state_a.cutoff
    four = np.einsum("rs,uv->rsuv", state_a.amps, state_b.amps)
    bsm_a = bs_matrix(bs_alice, c)
    bsm_b = bs_matrix(bs_bob, c)
    ta = _bs4(bsm_a, c, c)
    tb = _bs4(bsm_b, c, c)
    half = np.einsum("kmru,rsuv->kmsv", ta, four)
    if cross_b:
        out = np.einsum("kmsv,lnvs->klmn", half, tb)
    else:
        out = np.einsum("kmsv,lnsv->klmn", half, tb)
    return FourModeState(out)


def mix_pair_and_project_vacuum(state_a, state_b, bs):
    """Four-mode mixing conditioned on vacuum in both monitored outputs.

    Returns the un-normalized two-mode residue; the output cutoff is the sum
    of the input cutoffs, which holds the result exactly.
    """
    four = mix_pair(state_a, state_b, bs, bs)
    residue = four.vacuum_slice()
    return PureState2(state_a.cutoff + state_b.cutoff, residue)


def click_project(four_mode):
    """Enumerate outcomes with at least one photon in each monitored arm.

    Returns one ``ClickOutcome`` per photon-count pair with nonzero weight;
    for a normalized input the probabilities sum to the total click
    probability, which is at most 1.
    """
    amps = four_mode.amps
    kept_cut = amps.shape[2] - 1
    outcomes = []
    for ka in range(1, amps.shape[0]):
        for kb in range(1, amps.shape[1]):
            branch = amps[ka, kb]
            weight = float(np.sum(np.abs(branch) ** 2))
            if weight == 0.0:
                continue
            outcomes.append(
                ClickOutcome(ka, kb, PureState2(kept_cut, branch), weight)
            )
    return outcomes


def no_click_weights(four_mode):
    """Weights of the complementary outcomes (vacuum on one or both arms)."""
    amps = four_mode.amps
    w_both = float(np.sum(np.abs(amps[0, 0]) ** 2))
    w_a_only = float(np.sum(np.abs(amps[1:, 0]) ** 2))
    w_b_only = float(np.sum(np.abs(amps[0, 1:]) ** 2))
    return w_both, w_a_only, w_b_only


def apply_block_check(bsm):
    """Max unitarity defect over all stored blocks (diagnostic helper)."""
    worst = 0.0
    for total, blk in enumerate(bsm.blocks):
        eye = np.eye(total + 1)
        worst = max(worst, float(np.max(np.abs(blk.conj().T @ blk - eye))))
    return worst
