"""Analytic effective channel of the swap-terminated teleportation circuit.

Sandwiching the total circuit unitary between environment Bell kets and
computational bras yields sixteen 2x2 operators on S; regrouping them by
the Werner weights gives a four-operator Kraus set, and the end-to-end
channel is a depolarizing map with rate 1 - p. Closed-form trace-distance
expressions for the intermediate and final states follow from the same
decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qmath import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z
from .register import alpha_ket, bell_basis, circuit_unitary

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")


@dataclass(frozen=True)
class BellSandwichTable:
    """The 16 operators <jk| U |B> on S, keyed by (bell label, j, k)."""

    entries: dict[tuple[str, int, int], np.ndarray]

    def __getitem__(self, key: tuple[str, int, int]) -> np.ndarray:
        return self.entries[key]


@dataclass(frozen=True)
class KrausSet:
    """Operator-sum decomposition of the effective channel at resource p."""

    ops: tuple[np.ndarray, ...]
    p: float


def bell_sandwich_table(u: np.ndarray | None = None) -> BellSandwichTable:
    """Environment Bell-sandwich operators of the 8x8 circuit unitary."""
    if u is None:
        u = circuit_unitary()
    u = np.asarray(u, dtype=complex)
    if u.shape != (8, 8):
        raise ValueError("expected the full 8x8 circuit unitary")
    ut = u.reshape(2, 2, 2, 2, 2, 2)  # [s, e1, e2, s', e1', e2']
    entries = {}
    for label, ket in zip(BELL_LABELS, bell_basis()):
        b = ket.reshape(2, 2)
        for j in (0, 1):
            for k in (0, 1):
                entries[(label, j, k)] = np.einsum("stab,ab->st", ut[:, j, k], b)
    return BellSandwichTable(entries)


def kraus_set(p: float) -> KrausSet:
    """Kraus operators {c1 I, c2 Z, c2 X, c2 Y} with Werner-dependent weights."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    c_id = np.sqrt((1.0 + 3.0 * p) / 4.0)
    c_pauli = np.sqrt((1.0 - p) / 4.0)
    return KrausSet(
        (c_id * PAULI_I, c_pauli * PAULI_Z, c_pauli * PAULI_X, c_pauli * PAULI_Y), p
    )


def apply_effective_channel(rho: np.ndarray, p: float) -> np.ndarray:
    """End-to-end channel on S; equals p rho + (1 - p) I/2."""
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for k in kraus_set(p).ops:
        out += k @ rho @ k.conj().T
    return out


def output_fidelity(alpha: float, p: float) -> float:
    """Overlap of the channel output with the input |psi(alpha)>; equals (1+p)/2."""
    psi = alpha_ket(alpha)
    rho = np.outer(psi, psi.conj())
    return float(np.real(psi.conj() @ apply_effective_channel(rho, p) @ psi))


def distance_after_block1(a1: float, a2: float) -> float:
    """Trace distance of the reduced S states after the first block: |a1^2 - a2^2|."""
    for a in (a1, a2):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {a}")
    return abs(a1 * a1 - a2 * a2)


def final_distance(a1: float, a2: float, p: float) -> float:
    """End-to-end trace distance: p times the input-state distance."""
    for a in (a1, a2):
        if not 0.0 <= a <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {a}")
    return p * abs(a1 * np.sqrt(1.0 - a2 * a2) - a2 * np.sqrt(1.0 - a1 * a1))
