"""Mode bookkeeping and single-photon circuit algebra.

Conventions
-----------
A circuit on n labelled optical modes is a single n x n unitary acting on
creation operators, a_i^dag -> sum_k U[k, i] a_k^dag, so column i of U is
the image of input mode i.

Beamsplitter blocks are real: reflection amplitude sqrt(R), transmission
sqrt(1 - R), with the sign flip carried by the reflection on exactly one
side of the splitter.  "Reflection" means the photon stays in its input
fibre; "transmission" means it crosses to the partner mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, LayoutError, UnitarityError

UNITARITY_TOL = 1e-10


@dataclass(frozen=True)
class ModeLayout:
    """Ordered set of unique mode labels defining index assignments."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) == 0:
            raise LayoutError("layout needs at least one mode")
        if len(set(self.labels)) != len(self.labels):
            raise LayoutError("duplicate mode labels in layout")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown mode label {label!r}") from None

    def indices(self, labels) -> tuple[int, ...]:
        return tuple(self.index(lab) for lab in labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self.labels


@dataclass(frozen=True)
class CircuitUnitary:
    """A unitary matrix bound to a mode layout.

    Unitarity is checked on construction: max-norm of U^dag U - I must be
    below 1e-10.
    """

    layout: ModeLayout
    matrix: np.ndarray

    def __post_init__(self):
        n = len(self.layout)
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.shape != (n, n):
            raise LayoutError(f"matrix shape {mat.shape} does not match {n} modes")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(n)))
        if defect >= UNITARITY_TOL:
            raise UnitarityError(f"unitarity defect {defect:.3e} exceeds {UNITARITY_TOL}")
        object.__setattr__(self, "matrix", mat)


def beamsplitter_block(reflectivity: float, signed_side: int = 0) -> np.ndarray:
    """2x2 real beamsplitter block with the sign flip on one reflection.

    signed_side selects which mode's reflection amplitude is -sqrt(R);
    the other three amplitudes are positive.
    """
    if not 0.0 <= reflectivity <= 1.0:
        raise DomainError(f"reflectivity {reflectivity} outside [0, 1]")
    if signed_side not in (0, 1):
        raise DomainError("signed_side must be 0 or 1")
    r = np.sqrt(reflectivity)
    t = np.sqrt(1.0 - reflectivity)
    if signed_side == 0:
        return np.array([[-r, t], [t, r]])
    return np.array([[r, t], [t, -r]])


def identity(layout: ModeLayout) -> CircuitUnitary:
    return CircuitUnitary(layout, np.eye(len(layout), dtype=np.complex128))


def embed(layout: ModeLayout, block: np.ndarray, modes) -> CircuitUnitary:
    """Embed a small unitary block on the given modes, identity elsewhere."""
    block = np.asarray(block, dtype=np.complex128)
    idx = layout.indices(modes)
    if block.shape != (len(idx), len(idx)):
        raise LayoutError("block shape does not match number of modes")
    mat = np.eye(len(layout), dtype=np.complex128)
    mat[np.ix_(idx, idx)] = block
    return CircuitUnitary(layout, mat)


def phase_plate(layout: ModeLayout, mode: str, phi: float) -> CircuitUnitary:
    mat = np.eye(len(layout), dtype=np.complex128)
    i = layout.index(mode)
    mat[i, i] = np.exp(1j * phi)
    return CircuitUnitary(layout, mat)


def hv_swap(layout: ModeLayout, side: str) -> CircuitUnitary:
    """Permutation exchanging the H and V modes of one fibre.

    Swaps every pair of labels of the form ``{side}_H<suffix>`` and
    ``{side}_V<suffix>`` present in the layout, so a swap on side "C"
    exchanges C_H with C_V and C_H2 with C_V2 at once, the way a physical
    90 degree splice rotates every sub-mode carried by the fibre.
    """
    mat = np.eye(len(layout), dtype=np.complex128)
    swapped = 0
    prefix = f"{side}_H"
    for label in layout.labels:
        if not label.startswith(prefix):
            continue
        partner = f"{side}_V" + label[len(prefix):]
        if partner not in layout:
            raise LayoutError(f"no V partner {partner!r} for {label!r}")
        i, j = layout.index(label), layout.index(partner)
        mat[i, i] = mat[j, j] = 0.0
        mat[i, j] = mat[j, i] = 1.0
        swapped += 1
    if swapped == 0:
        raise LayoutError(f"no H/V mode pair found for side {side!r}")
    return CircuitUnitary(layout, mat)


def compose(*circuits: CircuitUnitary) -> CircuitUnitary:
    """Product of circuits in application order: the first argument acts first."""
    if not circuits:
        raise LayoutError("compose needs at least one circuit")
    layout = circuits[0].layout
    mat = np.eye(len(layout), dtype=np.complex128)
    for circ in circuits:
        if circ.layout != layout:
            raise LayoutError("cannot compose circuits on different layouts")
        mat = circ.matrix @ mat
    return CircuitUnitary(layout, mat)
