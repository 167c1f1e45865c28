"""Builders for the post-selected fibre CNOT gate and its imperfection model.

The gate interferes a control and a target photon on a central coupler
whose H-polarization reflectivity is 1/3 while V is fully reflected, with
Hadamard-like mixing of the target's H/V modes before and after and two
1/3 splitters that balance the non-interfering path amplitudes into dump
modes.  Post-selecting one photon in each output arm leaves the CNOT
acting on the polarization qubits with success probability 1/9.

The imperfection model adds:

* partial mode overlap x between the photons: the control photon enters
  with amplitude x in the matched modes C_H/C_V and sqrt(1 - x^2) in
  mismatch copies C_H2/C_V2, which pass through identical coupler
  amplitudes but never share a mode with the target photon;
* preparation and analysis mixers with reflectivities eta_3a/eta_3b
  (control/target, input side) and eta_4a/eta_4b (output side), standing
  in for every waveplate between the logical frame and the couplers, so
  model tables are always evaluated with bare H/V launch and readout;
* residual birefringent phases on the V mode of each output arm.

Outer couplers carry the same physical coefficients as the central one and
act on swapped polarizations, which the builder realizes literally as
hv_swap then coupler then hv_swap.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import DomainError, ParseError
from .metrics import TruthTable, truth_table
from .modes import (
    CircuitUnitary,
    ModeLayout,
    beamsplitter_block,
    compose,
    embed,
    hv_swap,
    phase_plate,
)
from .twophoton import PostSelection, coincidence_probabilities, evolve_state, product_state

IDEAL_LABELS = ("C_H", "C_V", "T_H", "T_V", "D1", "D2")
MODEL_LABELS = (
    "C_H", "C_V", "T_H", "T_V",
    "C_H2", "C_V2", "T_H2", "T_V2",
    "D1_H", "D1_V", "D2_H", "D2_V",
    "D3_H", "D3_V", "D4_H", "D4_V",
)

_ETA_IDEAL = {"ZZ": (1.0, 0.5, 1.0, 0.5), "XX": (0.5, 1.0, 0.5, 1.0)}


def ideal_layout() -> ModeLayout:
    return ModeLayout(IDEAL_LABELS)


def model_layout() -> ModeLayout:
    return ModeLayout(MODEL_LABELS)


def ideal_post_selection() -> PostSelection:
    return PostSelection(("C_H", "C_V"), ("T_H", "T_V"))


def model_post_selection() -> PostSelection:
    """One photon per output fibre; mismatch modes hit the same detectors."""
    return PostSelection(("C_H", "C_V", "C_H2", "C_V2"),
                         ("T_H", "T_V", "T_H2", "T_V2"))


def ideal_eta(basis: str) -> tuple[float, float, float, float]:
    """Mixer reflectivities (eta_3a, eta_3b, eta_4a, eta_4b) for ideal operation.

    eta = 1 is no mixing and eta = 1/2 full Hadamard-like mixing.  In the
    computational basis only the target is mixed; in the diagonal basis the
    roles of control and target are swapped.
    """
    if basis not in _ETA_IDEAL:
        raise DomainError(f"unknown basis {basis!r}")
    return _ETA_IDEAL[basis]


_UNIT = ("r_h_central", "r_v_central", "r_h_outer_c", "r_v_outer_c",
         "r_h_outer_t", "r_v_outer_t", "overlap",
         "eta_3a", "eta_3b", "eta_4a", "eta_4b")


@dataclass(frozen=True)
class GateParams:
    """Physical parameters of the model circuit.

    The eta fields hold the mixer settings for computational-basis
    operation; params_for_basis carries their deviation from ideal over to
    the diagonal basis, where the ideal settings swap arms.  Defaults
    reproduce the ideal gate.
    """

    r_h_central: float = 1.0 / 3.0
    r_v_central: float = 1.0
    r_h_outer_c: float = 1.0 / 3.0
    r_v_outer_c: float = 1.0
    r_h_outer_t: float = 1.0 / 3.0
    r_v_outer_t: float = 1.0
    overlap: float = 1.0
    eta_3a: float = 1.0
    eta_3b: float = 0.5
    eta_4a: float = 1.0
    eta_4b: float = 0.5
    residual_phase_c: float = 0.0
    residual_phase_t: float = 0.0

    def __post_init__(self):
        for name in _UNIT:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"{name} = {value} outside [0, 1]")
        for name in ("residual_phase_c", "residual_phase_t"):
            value = getattr(self, name)
            if not (value == value and abs(value) < 1e6):
                raise DomainError(f"{name} must be a finite phase")


def params_for_basis(params: GateParams, basis: str) -> GateParams:
    """Mixer settings for the requested basis, keeping the per-mixer deviation."""
    xx = ideal_eta(basis)
    if basis == "ZZ":
        return params
    zz = ideal_eta("ZZ")
    deltas = [getattr(params, f) - zz[i]
              for i, f in enumerate(("eta_3a", "eta_3b", "eta_4a", "eta_4b"))]
    return dataclasses.replace(
        params,
        eta_3a=xx[0] + deltas[0], eta_3b=xx[1] + deltas[1],
        eta_4a=xx[2] + deltas[2], eta_4b=xx[3] + deltas[3],
    )


def eta_deltas(params: GateParams) -> tuple[float, float, float, float]:
    zz = ideal_eta("ZZ")
    return tuple(getattr(params, f) - zz[i]
                 for i, f in enumerate(("eta_3a", "eta_3b", "eta_4a", "eta_4b")))


def build_ideal_cnot(layout: ModeLayout | None = None) -> CircuitUnitary:
    """Six-mode ideal network: target mixers, central 1/3, two balancing 1/3."""
    layout = ideal_layout() if layout is None else layout
    third = 1.0 / 3.0
    mixer = embed(layout, beamsplitter_block(0.5, 0), ("T_H", "T_V"))
    central = embed(layout, beamsplitter_block(third, 0), ("C_H", "T_H"))
    balance_c = embed(layout, beamsplitter_block(third, 0), ("C_V", "D1"))
    balance_t = embed(layout, beamsplitter_block(third, 1), ("T_V", "D2"))
    return compose(mixer, central, balance_c, balance_t, mixer)


def _outer_coupler(layout: ModeLayout, arm: str, dump: str, copy_dump: str,
                   r_h: float, r_v: float) -> CircuitUnitary:
    """Output coupler with swapped coefficient roles via explicit 90-degree splices."""
    swaps = compose(hv_swap(layout, arm), hv_swap(layout, dump), hv_swap(layout, copy_dump))
    inner = compose(
        embed(layout, beamsplitter_block(r_h, 1), (f"{arm}_H", f"{dump}_H")),
        embed(layout, beamsplitter_block(r_h, 1), (f"{arm}_H2", f"{copy_dump}_H")),
        embed(layout, beamsplitter_block(r_v, 1), (f"{arm}_V", f"{dump}_V")),
        embed(layout, beamsplitter_block(r_v, 1), (f"{arm}_V2", f"{copy_dump}_V")),
    )
    return compose(swaps, inner, swaps)


def build_model_circuit(params: GateParams, layout: ModeLayout | None = None) -> CircuitUnitary:
    """Full imperfection model with the mixer settings taken literally.

    Sequence: preparation mixers, overlap split of the control photon into
    the mismatch copies, central coupler (plus its copy acting on the
    mismatch sector alone), outer couplers, residual output phases,
    analysis mixers on matched and mismatch modes alike.
    """
    layout = model_layout() if layout is None else layout
    bs = beamsplitter_block
    split = bs(params.overlap ** 2, 1)
    stages = [
        embed(layout, bs(params.eta_3a, 0), ("C_H", "C_V")),
        embed(layout, bs(params.eta_3b, 0), ("T_H", "T_V")),
        embed(layout, split, ("C_H", "C_H2")),
        embed(layout, split, ("C_V", "C_V2")),
        embed(layout, bs(params.r_h_central, 0), ("C_H", "T_H")),
        embed(layout, bs(params.r_h_central, 0), ("C_H2", "T_H2")),
        embed(layout, bs(params.r_v_central, 0), ("C_V", "T_V")),
        embed(layout, bs(params.r_v_central, 0), ("C_V2", "T_V2")),
        _outer_coupler(layout, "C", "D1", "D3", params.r_h_outer_c, params.r_v_outer_c),
        _outer_coupler(layout, "T", "D2", "D4", params.r_h_outer_t, params.r_v_outer_t),
        phase_plate(layout, "C_V", params.residual_phase_c),
        phase_plate(layout, "C_V2", params.residual_phase_c),
        phase_plate(layout, "T_V", params.residual_phase_t),
        phase_plate(layout, "T_V2", params.residual_phase_t),
        embed(layout, bs(params.eta_4a, 0), ("C_H", "C_V")),
        embed(layout, bs(params.eta_4a, 0), ("C_H2", "C_V2")),
        embed(layout, bs(params.eta_4b, 0), ("T_H", "T_V")),
        embed(layout, bs(params.eta_4b, 0), ("T_H2", "T_V2")),
    ]
    return compose(*stages)


def model_truth_table(params: GateParams, basis: str) -> TruthTable:
    """Truth table of the model circuit for one measurement basis.

    The mixers stand in for all preparation and analysis waveplates, so the
    circuit is evaluated with bare H/V launch and readout; basis enters
    through the mixer settings and the table tag.
    """
    circuit = build_model_circuit(params_for_basis(params, basis))
    return truth_table(circuit, basis, model_post_selection(), encoding="ZZ")


# -- coupler visibility -----------------------------------------------------

def _hom_coincidence(overlap: float, reflectivity: float) -> float:
    """Two-photon coincidence probability at a single coupler, via the engine.

    Summed directly from output amplitudes because a balanced coupler with
    full overlap nulls the coincidence rate exactly, which the post-selection
    helper treats as degenerate.
    """
    layout = ModeLayout(("A", "B", "A2", "B2"))
    stages = [
        embed(layout, beamsplitter_block(overlap ** 2, 1), ("A", "A2")),
        embed(layout, beamsplitter_block(reflectivity, 0), ("A", "B")),
        embed(layout, beamsplitter_block(reflectivity, 0), ("A2", "B2")),
    ]
    state = product_state(layout, {"A": 1.0}, {"B": 1.0})
    out = evolve_state(compose(*stages), state)
    return sum(abs(out.amplitude(a, b)) ** 2
               for a in ("A", "A2") for b in ("B", "B2"))


def overlap_to_visibility(overlap: float, reflectivity: float = 1.0 / 3.0) -> float:
    """Coincidence-dip visibility (C_dist - C(x)) / C_dist at the coupler."""
    if not 0.0 <= overlap <= 1.0:
        raise DomainError(f"overlap {overlap} outside [0, 1]")
    if not 0.0 < reflectivity < 1.0:
        raise DomainError("reflectivity must lie strictly inside (0, 1)")
    c_dist = _hom_coincidence(0.0, reflectivity)
    return (c_dist - _hom_coincidence(overlap, reflectivity)) / c_dist


def max_visibility(reflectivity: float = 1.0 / 3.0) -> float:
    return overlap_to_visibility(1.0, reflectivity)


def visibility_to_overlap(visibility: float, reflectivity: float = 1.0 / 3.0) -> float:
    """Invert overlap_to_visibility by bisection on the monotone dip curve."""
    v_max = max_visibility(reflectivity)
    if not 0.0 <= visibility <= v_max + 1e-12:
        raise DomainError(
            f"visibility {visibility} outside achievable range [0, {v_max:.6g}] "
            f"at reflectivity {reflectivity:.6g}")
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if overlap_to_visibility(mid, reflectivity) < visibility:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- parameter configuration files ------------------------------------------

_FIELDS = tuple(f.name for f in dataclasses.fields(GateParams))


def params_to_config(params: GateParams) -> str:
    lines = [f"{name} = {getattr(params, name)!r}" for name in _FIELDS]
    return "\n".join(lines) + "\n"


def params_from_config(text: str) -> GateParams:
    """Parse `key = value` lines; unknown or repeated keys are rejected."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELDS:
            raise ParseError(f"unknown parameter {key!r}", lineno)
        if key in values:
            raise ParseError(f"duplicate parameter {key!r}", lineno)
        try:
            values[key] = float(value.strip())
        except ValueError:
            raise ParseError(f"bad numeric value for {key!r}", lineno) from None
    return GateParams(**values)
