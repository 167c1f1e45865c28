"""Two-photon state evolution and post-selected coincidence statistics.

States
------
A two-photon state over n modes is stored as a map from unordered index
pairs (i, j) with i <= j to complex amplitudes.  The basis kets are the
normalized Fock states: |1_i 1_j> for i < j and |2_i> for i == j.

Evolution uses the symmetric-matrix representation: writing the state as
sum_ij S[i, j] a_i^dag a_j^dag |0> with S symmetric, a circuit unitary U
maps S to U S U^T.  The relation between canonical amplitudes c and S is
c_ij = 2 S_ij for i < j and c_ii = sqrt(2) S_ii.

The brute-force oracle below deliberately avoids this representation and
expands (sum_k U[k,i] a_k^dag)(sum_l U[l,j] a_l^dag)|0> term by term with
explicit factorial normalization, so the two paths check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegeneratePostSelectionError,
    LayoutError,
    NormalizationError,
)
from .modes import CircuitUnitary, ModeLayout

NORM_TOL = 1e-9
SUCCESS_FLOOR = 1e-12


@dataclass(frozen=True)
class PhotonPairState:
    """Normalized two-photon state: amplitudes over unordered mode pairs."""

    layout: ModeLayout
    amplitudes: dict[tuple[int, int], complex]

    def __post_init__(self):
        n = len(self.layout)
        norm_sq = 0.0
        for (i, j), amp in self.amplitudes.items():
            if not (0 <= i <= j < n):
                raise LayoutError(f"mode index pair {(i, j)} invalid for {n} modes")
            norm_sq += abs(amp) ** 2
        if abs(norm_sq - 1.0) >= NORM_TOL:
            raise NormalizationError(f"state norm^2 = {norm_sq!r}, expected 1")

    def amplitude(self, mode_a: str, mode_b: str) -> complex:
        i, j = sorted((self.layout.index(mode_a), self.layout.index(mode_b)))
        return self.amplitudes.get((i, j), 0.0 + 0.0j)


@dataclass(frozen=True)
class PostSelection:
    """Accept outcomes with exactly one photon in each of two mode groups."""

    group_a: frozenset[str]
    group_b: frozenset[str]

    def __init__(self, group_a, group_b):
        object.__setattr__(self, "group_a", frozenset(group_a))
        object.__setattr__(self, "group_b", frozenset(group_b))
        if not self.group_a or not self.group_b:
            raise LayoutError("post-selection groups must be non-empty")
        if self.group_a & self.group_b:
            raise LayoutError("post-selection groups must be disjoint")


@dataclass(frozen=True)
class CoincidenceDistribution:
    """Per-pair coincidence probabilities under a post-selection rule."""

    probabilities: dict[tuple[str, str], float]
    success: float
    conditional: dict[tuple[str, str], float] = field(default_factory=dict)


def _to_symmetric(state: PhotonPairState) -> np.ndarray:
    n = len(state.layout)
    s = np.zeros((n, n), dtype=np.complex128)
    for (i, j), amp in state.amplitudes.items():
        if i == j:
            s[i, i] = amp / math.sqrt(2.0)
        else:
            s[i, j] = s[j, i] = amp / 2.0
    return s


def _from_symmetric(layout: ModeLayout, s: np.ndarray) -> PhotonPairState:
    amps: dict[tuple[int, int], complex] = {}
    n = len(layout)
    for i in range(n):
        for j in range(i, n):
            amp = math.sqrt(2.0) * s[i, i] if i == j else 2.0 * s[i, j]
            if amp != 0.0:
                amps[(i, j)] = complex(amp)
    return PhotonPairState(layout, amps)


def pair_state(layout: ModeLayout, mode_a: str, mode_b: str) -> PhotonPairState:
    """Basis state with one photon in each of two modes (or two in one)."""
    i, j = sorted((layout.index(mode_a), layout.index(mode_b)))
    return PhotonPairState(layout, {(i, j): 1.0 + 0.0j})


def product_state(layout: ModeLayout, amps_a: dict[str, complex],
                  amps_b: dict[str, complex]) -> PhotonPairState:
    """Two photons in single-photon superpositions alpha and beta.

    Builds (sum_i alpha_i a_i^dag)(sum_j beta_j a_j^dag)|0> and normalizes,
    which absorbs the bosonic enhancement when the supports overlap.
    """
    n = len(layout)
    alpha = np.zeros(n, dtype=np.complex128)
    beta = np.zeros(n, dtype=np.complex128)
    for label, amp in amps_a.items():
        alpha[layout.index(label)] = amp
    for label, amp in amps_b.items():
        beta[layout.index(label)] = amp
    if not np.isclose(np.linalg.norm(alpha), 1.0, atol=NORM_TOL):
        raise NormalizationError("control-photon amplitudes not normalized")
    if not np.isclose(np.linalg.norm(beta), 1.0, atol=NORM_TOL):
        raise NormalizationError("target-photon amplitudes not normalized")
    amps: dict[tuple[int, int], complex] = {}
    for i in range(n):
        for j in range(i, n):
            if i == j:
                amp = math.sqrt(2.0) * alpha[i] * beta[i]
            else:
                amp = alpha[i] * beta[j] + alpha[j] * beta[i]
            if amp != 0.0:
                amps[(i, j)] = complex(amp)
    norm = math.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    amps = {k: v / norm for k, v in amps.items()}
    return PhotonPairState(layout, amps)


def evolve_state(circuit: CircuitUnitary, state: PhotonPairState) -> PhotonPairState:
    if circuit.layout != state.layout:
        raise LayoutError("circuit and state layouts differ")
    u = circuit.matrix
    s_out = u @ _to_symmetric(state) @ u.T
    return _from_symmetric(state.layout, s_out)


def evolve_pair(circuit: CircuitUnitary, pair: tuple[str, str]) -> PhotonPairState:
    """Evolve an unordered input pair {mode_a, mode_b} through the circuit."""
    mode_a, mode_b = pair
    return evolve_state(circuit, pair_state(circuit.layout, mode_a, mode_b))


def coincidence_probabilities(state: PhotonPairState,
                              selection: PostSelection) -> CoincidenceDistribution:
    """Probabilities of one photon in group A and one in group B.

    Raises DegeneratePostSelectionError when the total success probability
    falls below 1e-12, so callers never divide by numerical noise.
    """
    layout = state.layout
    for label in selection.group_a | selection.group_b:
        if label not in layout:
            raise LayoutError(f"post-selection mode {label!r} not in layout")
    probs: dict[tuple[str, str], float] = {}
    success = 0.0
    for a in sorted(selection.group_a):
        for b in sorted(selection.group_b):
            p = abs(state.amplitude(a, b)) ** 2
            probs[(a, b)] = p
            success += p
    if success < SUCCESS_FLOOR:
        raise DegeneratePostSelectionError(
            f"post-selection success {success:.3e} below {SUCCESS_FLOOR}")
    conditional = {k: v / success for k, v in probs.items()}
    return CoincidenceDistribution(probs, success, conditional)


def brute_force_oracle(circuit: CircuitUnitary, pair: tuple[str, str]) -> PhotonPairState:
    """Reference evolution by direct operator expansion.

    Expands (sum_k U[k,i] a_k^dag)(sum_l U[l,j] a_l^dag)|0> over all ordered
    (k, l), accumulates coefficients per occupation pattern, and converts to
    normalized kets via sqrt(n!) factors.  Shares no code with evolve_pair.
    """
    layout = circuit.layout
    u = circuit.matrix
    i = layout.index(pair[0])
    j = layout.index(pair[1])
    # normalized input: a_i^dag a_j^dag |0> for i != j, a_i^dag^2 |0> / sqrt(2) otherwise
    prefactor = 1.0 / math.sqrt(2.0) if i == j else 1.0
    n = len(layout)
    coeff: dict[tuple[int, int], complex] = {}
    for k in range(n):
        for l in range(n):
            key = (k, l) if k <= l else (l, k)
            coeff[key] = coeff.get(key, 0.0) + prefactor * u[k, i] * u[l, j]
    amps: dict[tuple[int, int], complex] = {}
    for (k, l), c in coeff.items():
        occupations = [2] if k == l else [1, 1]
        norm_factor = math.sqrt(math.prod(math.factorial(m) for m in occupations))
        amp = c * norm_factor
        if amp != 0.0:
            amps[(k, l)] = amp
    return PhotonPairState(layout, amps)
