"""Truncated two-mode Fock-space states and the measures defined on them.

States are dense amplitude tables over |m, n> with an explicit per-mode
photon-number cutoff.  All values are immutable after construction and all
operations are pure functions, so everything here is safe to share across
threads.
"""

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateStateError,
    InvalidDensityError,
    StateFormatError,
)

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-9


def _frozen_array(values, dtype):
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PureState2:
    """Two-mode pure state as a dense table of Fock amplitudes.

    ``amps[m, n]`` is the (possibly un-normalized) amplitude on |m, n> with
    0 <= m, n <= cutoff.
    """

    cutoff: int
    amps: np.ndarray

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        arr = _frozen_array(self.amps, complex)
        if arr.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError(
                f"amplitude table shape {arr.shape} does not match cutoff {self.cutoff}"
            )
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amps", arr)

    @property
    def dim(self):
        return self.cutoff + 1


@dataclass(frozen=True, eq=False)
class SchmidtDiagonal:
    """Real non-negative diagonal coefficients c[n] of a state sum c[n] |n, n>.

    With ``leading_unit`` set, the sequence follows the convention c[0] == 1.
    """

    coeffs: np.ndarray
    leading_unit: bool = False

    def __post_init__(self):
        arr = _frozen_array(self.coeffs, float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficient sequence must be non-empty and 1-D")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("Schmidt coefficients must be finite and non-negative")
        if self.leading_unit and arr[0] != 1.0:
            raise ValueError("leading-unit convention requires coeffs[0] == 1 exactly")
        object.__setattr__(self, "coeffs", arr)

    def to_pure(self, cutoff=None):
        """Embed the diagonal sequence into a dense PureState2 table."""
        if cutoff is None:
            cutoff = len(self.coeffs) - 1
        amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
        k = min(cutoff + 1, len(self.coeffs))
        amps[np.arange(k), np.arange(k)] = self.coeffs[:k]
        return PureState2(cutoff, amps)


@dataclass(frozen=True, eq=False)
class MixedState2:
    """Two-mode density operator on the truncated Fock space.

    ``matrix`` is indexed by flattened Fock pairs, row (m, n) -> m * dim + n.
    Hermiticity is enforced at construction; positivity is checked where
    eigenvalues are actually needed.
    """

    cutoff: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = (self.cutoff + 1) ** 2
        arr = _frozen_array(self.matrix, complex)
        if arr.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {arr.shape} does not match cutoff {self.cutoff}"
            )
        if np.max(np.abs(arr - arr.conj().T)) > HERMITICITY_TOL:
            raise InvalidDensityError("matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", arr)

    @property
    def dim(self):
        return self.cutoff + 1

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def as_tensor(self):
        """View as a 4-index array [m, n, m', n']."""
        d = self.dim
        return self.matrix.reshape(d, d, d, d)

    @classmethod
    def from_pure(cls, state):
        flat = state.amps.ravel()
        return cls(state.cutoff, np.outer(flat, flat.conj()))


@dataclass(frozen=True, eq=False)
class ReducedState1:
    """Single-mode density operator obtained by partial trace."""

    cutoff: int
    matrix: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.matrix, complex)
        if arr.shape != (self.cutoff + 1, self.cutoff + 1):
            raise ValueError("matrix shape does not match cutoff")
        if np.max(np.abs(arr - arr.conj().T)) > HERMITICITY_TOL:
            raise InvalidDensityError("matrix is not Hermitian within 1e-12")
        object.__setattr__(self, "matrix", arr)


def vacuum(cutoff=0):
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    amps[0, 0] = 1.0
    return PureState2(cutoff, amps)


def from_entries(cutoff, entries):
    """Build a PureState2 from a {(m, n): amplitude} mapping."""
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for (m, n), val in entries.items():
        amps[m, n] = val
    return PureState2(cutoff, amps)


def norm_sq(state):
    """Squared norm: the sum of |amplitude|^2 over the table."""
    if isinstance(state, SchmidtDiagonal):
        return float(np.sum(state.coeffs * state.coeffs))
    return float(np.sum(np.abs(state.amps) ** 2))


def overlap(a, b):
    """Inner product <a|b>; the smaller table is zero-padded."""
    ca, cb = a.amps, b.amps
    k = min(ca.shape[0], cb.shape[0])
    return complex(np.sum(ca[:k, :k].conj() * cb[:k, :k]))


def normalized(state):
    """Rescale to unit norm."""
    n2 = norm_sq(state)
    if n2 <= 0.0:
        raise DegenerateStateError("degenerate state")
    if isinstance(state, SchmidtDiagonal):
        return SchmidtDiagonal(state.coeffs / np.sqrt(n2))
    return PureState2(state.cutoff, state.amps / np.sqrt(n2))


def reduce_to_mode(state, mode):
    """Partial trace over the other mode, normalized to unit trace.

    ``mode`` selects which subsystem survives: "A" keeps the first Fock
    index, "B" keeps the second.
    """
    if mode not in ("A", "B"):
        raise ValueError("mode must be 'A' or 'B'")
    if isinstance(state, SchmidtDiagonal):
        state = state.to_pure()
    if isinstance(state, PureState2):
        a = state.amps
        if mode == "A":
            red = a @ a.conj().T
        else:
            red = np.einsum("mn,mp->np", a, a.conj())
        cutoff = state.cutoff
    else:
        t = state.as_tensor()
        if mode == "A":
            red = np.einsum("mnpn->mp", t)
        else:
            red = np.einsum("mnmq->nq", t)
        cutoff = state.cutoff
    tr = float(np.trace(red).real)
    if tr <= 0.0:
        raise DegenerateStateError("degenerate state")
    red = (red + red.conj().T) / (2.0 * tr)
    return ReducedState1(cutoff, red)


def von_neumann_entropy(rho):
    """Entropy -sum(p log2 p) of a single-mode density operator, in bits.

    Eigenvalues in [-1e-10, 0) are clipped to zero; anything more negative,
    or a trace away from one, is rejected as an invalid density operator.
    """
    tr = float(np.trace(rho.matrix).real)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensityError(f"invalid density operator: trace {tr!r} != 1")
    evals = np.linalg.eigvalsh(rho.matrix)
    if np.min(evals) < -PSD_TOL:
        raise InvalidDensityError(
            f"invalid density operator: eigenvalue {np.min(evals):.3e} < -1e-10"
        )
    evals = np.clip(evals, 0.0, None)
    evals = evals[evals > 0.0]
    return max(0.0, float(-np.sum(evals * np.log2(evals))))


def trace_norm_distance(a, b):
    """Trace norm ||a - b||_1, the sum of absolute eigenvalues (no 1/2 factor)."""
    if a.cutoff != b.cutoff:
        raise ValueError("states must share a cutoff")
    evals = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(np.sum(np.abs(evals)))


def purity(rho):
    """tr(rho^2) / tr(rho)^2."""
    tr = rho.trace
    if tr <= 0.0:
        raise DegenerateStateError("degenerate state")
    return float(np.trace(rho.matrix @ rho.matrix).real) / tr**2


# --- state file format -------------------------------------------------
#
# Line-oriented text: a header "fock2 cutoff=<N>" followed by one line per
# nonzero amplitude, "m n re im".  Absent amplitudes are zero.

_HEADER_RE = re.compile(r"^fock2 cutoff=(\d+)$")


def write_state(state, path):
    if isinstance(state, SchmidtDiagonal):
        state = state.to_pure()
    lines = [f"fock2 cutoff={state.cutoff}"]
    for m in range(state.cutoff + 1):
        for n in range(state.cutoff + 1):
            z = state.amps[m, n]
            if z != 0:
                lines.append(f"{m} {n} {z.real:.17g} {z.imag:.17g}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_state(path):
    with open(path, "r", encoding="ascii") as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise StateFormatError("empty state file")
    match = _HEADER_RE.match(raw[0].strip())
    if not match:
        raise StateFormatError("expected header 'fock2 cutoff=<N>'", line=1)
    cutoff = int(match.group(1))
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    seen = set()
    for lineno, line in enumerate(raw[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4:
            raise StateFormatError("expected 'm n re im'", line=lineno)
        try:
            m, n = int(parts[0]), int(parts[1])
            re_part, im_part = float(parts[2]), float(parts[3])
        except ValueError:
            raise StateFormatError("malformed number", line=lineno) from None
        if not (0 <= m <= cutoff and 0 <= n <= cutoff):
            raise StateFormatError(
                f"index ({m}, {n}) outside cutoff {cutoff}", line=lineno
            )
        if (m, n) in seen:
            raise StateFormatError(f"duplicate index ({m}, {n})", line=lineno)
        seen.add((m, n))
        amps[m, n] = complex(re_part, im_part)
    return PureState2(cutoff, amps)
