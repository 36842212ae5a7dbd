"""Analytic characterization of the iteration map's fixed points.

Every fixed point is determined by a complex symmetric 2x2 matrix read off
the initial state's low-order amplitudes.  Its Takagi factorization gives
the normalizability criterion (largest singular value below one) and the
two-mode squeezing parameters of the limit state.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoGaussianLimitError, NotNormalizableError
from .fock import PureState2

TAKAGI_RECOMP_TOL = 1e-10

# exact floating factorial products below this output order, log-space above
_LOG_SPACE_ORDER = 30


@dataclass(frozen=True)
class GammaMatrix:
    """Complex symmetric 2x2 matrix parameterizing a Gaussian limit state."""

    g1: complex
    g2: complex
    g12: complex

    def __post_init__(self):
        object.__setattr__(self, "g1", complex(self.g1))
        object.__setattr__(self, "g2", complex(self.g2))
        object.__setattr__(self, "g12", complex(self.g12))

    @property
    def matrix(self):
        return np.array([[self.g1, self.g12], [self.g12, self.g2]], dtype=complex)

    @classmethod
    def from_matrix(cls, mat):
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (2, 2) or abs(mat[0, 1] - mat[1, 0]) > 1e-12:
            raise ValueError("expected a symmetric 2x2 matrix")
        off = 0.5 * (mat[0, 1] + mat[1, 0])
        return cls(mat[0, 0], mat[1, 1], off)


@dataclass(frozen=True, eq=False)
class TakagiFactorization:
    """Unitary U and non-negative diagonal D with U^T G U = diag(D)."""

    unitary: np.ndarray
    values: np.ndarray  # sorted descending

    def __post_init__(self):
        object.__setattr__(self, "unitary", np.asarray(self.unitary, dtype=complex))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))


@dataclass(frozen=True)
class SqueezingParams:
    """Symmetric 2x2 matrix of generalized two-mode squeezing parameters."""

    z1: complex
    z2: complex
    z12: complex

    @property
    def matrix(self):
        return np.array([[self.z1, self.z12], [self.z12, self.z2]], dtype=complex)

    @property
    def singular_values(self):
        return np.linalg.svd(self.matrix, compute_uv=False)


def gamma_from_state(state):
    """Limit-state matrix from the low-order amplitudes of an initial state.

    With b[m, n] = amps[m, n] / amps[0, 0]:

        g1  = sqrt(2) b[2,0] - b[1,0]^2
        g2  = sqrt(2) b[0,2] - b[0,1]^2
        g12 = b[1,1] - b[1,0] b[0,1]
    """
    a = state.amps
    a00 = a[0, 0]
    if a00 == 0:
        raise NoGaussianLimitError("no Gaussian limit")

    def b(m, n):
        if m > state.cutoff or n > state.cutoff:
            return 0j
        return a[m, n] / a00

    s2 = math.sqrt(2.0)
    g1 = s2 * b(2, 0) - b(1, 0) ** 2
    g2 = s2 * b(0, 2) - b(0, 1) ** 2
    g12 = b(1, 1) - b(1, 0) * b(0, 1)
    return GammaMatrix(g1, g2, g12)


def spectral_norm(gamma):
    """Largest singular value of the 2x2 matrix."""
    return float(np.linalg.svd(gamma.matrix, compute_uv=False)[0])


def is_normalizable(gamma):
    """True iff the associated limit state has finite norm."""
    return spectral_norm(gamma) < 1.0


def takagi(gamma):
    """Takagi factorization U^T G U = diag(s1, s2), s1 >= s2 >= 0.

    Uses the real symmetric embedding [[X, Y], [Y, -X]] of G = X + iY: an
    eigenvector (u; v) with eigenvalue s yields a Takagi vector w = u + iv
    with G conj(w) = s w, and complex orthonormality of the positive-part
    vectors is automatic.  Degenerate singular values are fine; the result
    is then simply one valid choice.
    """
    g = gamma.matrix
    x, y = g.real, g.imag
    embed = np.block([[x, y], [y, -x]])
    evals, evecs = np.linalg.eigh(embed)
    # top two eigenvalues are the singular values
    sigma = np.array([evals[3], evals[2]])
    if sigma[0] < 1e-14:
        return TakagiFactorization(np.eye(2, dtype=complex), np.zeros(2))
    cols = []
    for i in (3, 2):
        w = evecs[:2, i] + 1j * evecs[2:, i]
        cols.append(w)
    w_mat = np.column_stack(cols)
    unitary = w_mat.conj()
    values = np.clip(sigma, 0.0, None)
    return TakagiFactorization(unitary, values)


def squeezing_params(gamma):
    """Two-mode squeezing parameters of the limit state, via Takagi.

    Z = conj(U) arctanh(D) U+ has singular values arctanh of those of the
    input; the overall sign is convention dependent and not asserted.
    """
    if not is_normalizable(gamma):
        raise NotNormalizableError(spectral_norm(gamma))
    fac = takagi(gamma)
    u = fac.unitary
    z = u.conj() @ np.diag(np.arctanh(fac.values)) @ u.conj().T
    z = 0.5 * (z + z.T)
    return SqueezingParams(z[0, 0], z[1, 1], z[0, 1])


def _clog(z):
    # log magnitude and phase of z^k factors, treating 0^0 as 1
    return math.log(abs(z)), cmath.phase(z)


def _coefficient(mm, nn, g1, g2, g12):
    """One limit-state amplitude from the closed-form double sum."""
    if (mm + nn) % 2 == 1:
        return 0j
    odd = mm % 2 == 1
    m, n = (mm - 1) // 2 if odd else mm // 2, (nn - 1) // 2 if odd else nn // 2
    bases = (g12, g1 / 2.0, g2 / 2.0)

    if mm + nn <= _LOG_SPACE_ORDER:
        acc = 0j
        for s in range(min(m, n) + 1):
            k = 2 * s + 1 if odd else 2 * s
            acc += (
                g12**k
                / math.factorial(k)
                * (g1 / 2.0) ** (m - s)
                / math.factorial(m - s)
                * (g2 / 2.0) ** (n - s)
                / math.factorial(n - s)
            )
        return acc * math.sqrt(math.factorial(mm) * math.factorial(nn))

    # log-space accumulation against factorial overflow at high order
    pref_log = 0.5 * (math.lgamma(mm + 1) + math.lgamma(nn + 1))
    logs, phases = [], []
    for s in range(min(m, n) + 1):
        exps = (2 * s + 1 if odd else 2 * s, m - s, n - s)
        log_mag = 0.0
        phase = 0.0
        zero = False
        for base, e in zip(bases, exps):
            if e == 0:
                continue
            if base == 0:
                zero = True
                break
            lm, ph = _clog(base)
            log_mag += e * lm
            phase += e * ph
        if zero:
            continue
        log_mag -= (
            math.lgamma(exps[0] + 1)
            + math.lgamma(exps[1] + 1)
            + math.lgamma(exps[2] + 1)
        )
        logs.append(log_mag + pref_log)
        phases.append(phase)
    if not logs:
        return 0j
    peak = max(logs)
    if peak == -math.inf:
        return 0j
    acc = sum(
        math.exp(lg - peak) * cmath.exp(1j * ph) for lg, ph in zip(logs, phases)
    )
    return acc * math.exp(peak)


def limit_coefficients(gamma, cutoff, require_normalizable=True):
    """Un-normalized amplitudes of the fixed-point state up to ``cutoff``.

    Amplitudes vanish on odd total photon number; amps[0, 0] = 1.  By
    default a spectral norm >= 1 raises (the state has no finite norm); pass
    ``require_normalizable=False`` to evaluate the divergent coefficient
    table anyway, e.g. to exhibit the norm blow-up.
    """
    norm = spectral_norm(gamma)
    if require_normalizable and norm >= 1.0:
        raise NotNormalizableError(norm)
    g1, g2, g12 = gamma.g1, gamma.g2, gamma.g12
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for mm in range(cutoff + 1):
        for nn in range(cutoff + 1):
            amps[mm, nn] = _coefficient(mm, nn, g1, g2, g12)
    return PureState2(cutoff, amps)
