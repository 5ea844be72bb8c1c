"""Synthetic NMR readout spectra from a final density operator.

The weak-coupling Hamiltonian is diagonal, so a spin's spectrum is an exact
line list: one line per configuration of the other four spins, at frequency
shift + sum of +/- J/2 (minus for |0>, plus for |1>), with complex amplitude
given by the corresponding single-quantum coherence after an ideal 90-degree
readout rotation.  The rotation phase is fixed so that the all-|0> state
produces a single positive absorptive line, which makes the net area under a
spin's lines equal to O_i/2 for any state.

Shipped molecule parameters are synthetic: well-separated shifts, ten
distinct pairwise couplings of both signs, 1 Hz linewidth.  They are a stand
in chosen for fully resolved lines, not measured constants of any physical
molecule; real parameters can be supplied as a JSON config.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .simulator import DIM, N_SPINS, DensityOperator, bit_of

AMPLITUDE_SNAP = 1e-12

_RY90 = np.array([[1, -1], [1, 1]], dtype=complex) / np.sqrt(2.0)


@dataclass(frozen=True)
class MoleculeParams:
    """Chemical shifts (Hz, relative to the reference spin), J couplings (Hz), linewidth (Hz FWHM)."""

    shifts: tuple[float, float, float, float, float]
    couplings: np.ndarray
    linewidth_hz: float
    reference_spin: int = 1

    def __post_init__(self) -> None:
        shifts = tuple(float(s) for s in self.shifts)
        if len(shifts) != N_SPINS:
            raise ValueError("need one chemical shift per spin")
        j = np.asarray(self.couplings, dtype=float)
        if j.shape != (N_SPINS, N_SPINS):
            raise ValueError("couplings must be a 5x5 array")
        if np.max(np.abs(j - j.T)) > 1e-12 or np.max(np.abs(np.diag(j))) > 1e-12:
            raise ValueError("couplings must be symmetric with zero diagonal")
        if not self.linewidth_hz > 0:
            raise ValueError("linewidth must be positive")
        if not 1 <= self.reference_spin <= N_SPINS:
            raise ValueError("reference spin out of range")
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "couplings", j)

    def coupling(self, i: int, j: int) -> float:
        return float(self.couplings[i - 1, j - 1])


@dataclass(frozen=True)
class SpectralLine:
    spin: int
    label: str  # configuration of the other four spins, ascending spin order
    frequency_hz: float
    amplitude: complex


@dataclass(frozen=True)
class FrequencyGrid:
    f_min: float
    f_max: float
    points: int

    def __post_init__(self) -> None:
        if not (self.f_min < self.f_max and self.points >= 2):
            raise ValueError("need f_min < f_max and at least 2 points")


@dataclass(frozen=True)
class Spectrum:
    lines: tuple[SpectralLine, ...]
    frequencies_hz: np.ndarray | None = None
    trace: np.ndarray | None = None


def synthetic_molecule() -> MoleculeParams:
    """The shipped synthetic parameter set (see module docstring)."""
    j = np.zeros((5, 5))
    pairs = {
        (1, 2): 54.4, (1, 3): -17.5, (1, 4): 33.1, (1, 5): 12.3,
        (2, 3): 68.9, (2, 4): -7.6, (2, 5): 21.7,
        (3, 4): 41.2, (3, 5): -11.8,
        (4, 5): 76.5,
    }
    for (a, b), val in pairs.items():
        j[a - 1, b - 1] = j[b - 1, a - 1] = val
    return MoleculeParams(
        shifts=(0.0, -13200.0, 9100.0, 21500.0, -4300.0),
        couplings=j,
        linewidth_hz=1.0,
        reference_spin=1,
    )


def load_molecule(path: str | Path) -> MoleculeParams:
    """Read molecule parameters from a JSON config with keys shifts, J, linewidth_hz."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as err:
        raise ValueError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from err
    for key in ("shifts", "J", "linewidth_hz"):
        if key not in data:
            raise ValueError(f"{path}: missing config key {key!r}")
    return MoleculeParams(
        shifts=tuple(data["shifts"]),
        couplings=np.array(data["J"], dtype=float),
        linewidth_hz=float(data["linewidth_hz"]),
        reference_spin=int(data.get("reference_spin", 1)),
    )


def other_spins(spin: int) -> tuple[int, ...]:
    return tuple(q for q in range(1, N_SPINS + 1) if q != spin)


def line_frequency(spin: int, label: str, params: MoleculeParams) -> float:
    """shift[spin] + sum over partners of +/- J/2: minus for |0>, plus for |1>."""
    others = other_spins(spin)
    if len(label) != len(others) or set(label) - {"0", "1"}:
        raise ValueError(f"bad line label {label!r}")
    freq = params.shifts[spin - 1]
    for ch, j in zip(label, others):
        sign = 1.0 if ch == "1" else -1.0
        freq += sign * params.coupling(spin, j) / 2.0
    return freq


def _rotated(rho: DensityOperator, spin: int) -> np.ndarray:
    u = np.eye(1, dtype=complex)
    for q in range(1, N_SPINS + 1):
        u = np.kron(u, _RY90 if q == spin else np.eye(2))
    return u @ rho.matrix @ u.conj().T


def readout_lines(rho: DensityOperator, spin: int, params: MoleculeParams) -> list[SpectralLine]:
    """The 16 labeled lines of one spin's readout spectrum.

    Applies the ideal 90-degree readout rotation on the chosen spin and
    reads the 16 single-quantum coherence elements.  All 16 labels are
    always returned; amplitudes below 1e-12 are snapped to zero.
    """
    if not 1 <= spin <= N_SPINS:
        raise ValueError(f"spin index {spin} out of range")
    rot = _rotated(rho, spin)
    others = other_spins(spin)
    lines = []
    for config in range(16):
        bits = [(config >> (3 - k)) & 1 for k in range(4)]
        label = "".join(str(b) for b in bits)
        row = sum(b << (N_SPINS - q) for b, q in zip(bits, others))  # spin bit = 0
        col = row | (1 << (N_SPINS - spin))
        amp = complex(rot[row, col])
        if abs(amp) < AMPLITUDE_SNAP:
            amp = 0j
        lines.append(SpectralLine(spin, label, line_frequency(spin, label, params), amp))
    return lines


def net_area(lines: list[SpectralLine]) -> float:
    """Sum of the real (absorptive) parts; equals O_i/2 for a normalized state."""
    return float(sum(line.amplitude.real for line in lines))


def render_spectrum(lines: list[SpectralLine], params: MoleculeParams, grid: FrequencyGrid) -> Spectrum:
    """Superpose one complex Lorentzian per line on a uniform frequency grid.

    Each unit line integrates to 1 in its real part and peaks at
    2/(pi*linewidth): amplitude * (1/pi) / (hwhm - i(f - f_line)).
    """
    freqs = np.linspace(grid.f_min, grid.f_max, grid.points)
    hwhm = params.linewidth_hz / 2.0
    trace = np.zeros(grid.points, dtype=complex)
    for line in lines:
        if line.amplitude != 0:
            trace += line.amplitude / np.pi / (hwhm - 1j * (freqs - line.frequency_hz))
    return Spectrum(tuple(lines), freqs, trace)
