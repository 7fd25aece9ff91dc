"""Dense complex linear algebra and quantum-information primitives.

Operators and states are plain complex numpy arrays. States are density
matrices (Hermitian, unit trace, positive semidefinite); all dimensions in
this package are small (<= 64), so every routine works on dense matrices
with deterministic spectral decompositions.

Vectorization is column-stacking throughout: ``vec(|i><j|)`` sits at index
``j*d + i``, and a superoperator ``S`` acts as ``S @ vec(rho) = vec(map(rho))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import linalg as sla

# Structural tolerance for hermiticity/unitarity/trace checks.
STRUCTURE_TOL = 1e-10
# Eigenvalues below this are treated as zero in entropies.
EIG_CLAMP = 1e-12
# Default relative cutoff for the regularized pseudo-inverse.
PINV_TOL = 1e-10

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HADAMARD = (PAULI_X + PAULI_Z) / np.sqrt(2.0)


class SingularMapError(ValueError):
    """Raised when a map has no usable inverse even after regularization."""


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered tensor factors of a composite register.

    The first wire is the most significant factor: for qubit wires
    ``(S, E1, E2)`` the composite basis index is ``b = 4*s + 2*e1 + e2``.
    Wires can be addressed by name or by position.
    """

    wires: tuple[str, ...] = ("S", "E1", "E2")
    dims: tuple[int, ...] = (2, 2, 2)

    def __post_init__(self):
        if len(self.wires) != len(self.dims):
            raise ValueError("wires and dims must have equal length")
        if any(d < 2 for d in self.dims):
            raise ValueError("wire dimensions must be >= 2")
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("wire names must be unique")

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_wires(self) -> int:
        return len(self.wires)

    def positions(self, subset) -> tuple[int, ...]:
        """Resolve a wire subset (names, positions, or a single one) to positions.

        Returns positions in layout order. Raises ValueError for empty,
        unknown, or repeated wires.
        """
        if isinstance(subset, (str, int)):
            subset = (subset,)
        pos = []
        for w in subset:
            if isinstance(w, str):
                if w not in self.wires:
                    raise ValueError(f"unknown wire {w!r}; layout has {self.wires}")
                pos.append(self.wires.index(w))
            else:
                if not 0 <= int(w) < self.n_wires:
                    raise ValueError(f"wire position {w} out of range")
                pos.append(int(w))
        if not pos:
            raise ValueError("wire subset must not be empty")
        if len(set(pos)) != len(pos):
            raise ValueError("wire subset contains duplicates")
        return tuple(sorted(pos))

    def complement(self, subset) -> tuple[int, ...]:
        pos = set(self.positions(subset))
        return tuple(i for i in range(self.n_wires) if i not in pos)


REGISTER = RegisterLayout()
SYSTEM_ANCILLA = RegisterLayout(("S", "A"), (2, 2))


def kron(*mats: np.ndarray) -> np.ndarray:
    """Tensor product of one or more matrices, left factor most significant."""
    if not mats:
        raise ValueError("kron needs at least one factor")
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def dagger(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def is_hermitian(a: np.ndarray, tol: float = STRUCTURE_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def is_unitary(a: np.ndarray, tol: float = STRUCTURE_TOL) -> bool:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0]))) <= tol)


def check_density_matrix(rho: np.ndarray, tol: float = STRUCTURE_TOL) -> None:
    """Validate hermiticity, unit trace, and positivity; raise ValueError if violated."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > tol:
        raise ValueError(f"not Hermitian: max deviation {herm:.3e} > {tol:.1e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"trace {tr} deviates from 1 beyond {tol:.1e}")
    lam_min = float(np.linalg.eigvalsh(rho)[0])
    if lam_min < -tol:
        raise ValueError(f"negative eigenvalue {lam_min:.3e} below -{tol:.1e}")


def _reshaped(rho: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (layout.dim, layout.dim):
        raise ValueError(f"state of dim {rho.shape} does not match layout dim {layout.dim}")
    return rho.reshape(layout.dims + layout.dims)


def partial_trace(rho: np.ndarray, keep, layout: RegisterLayout = REGISTER) -> np.ndarray:
    """Reduced state on the `keep` wires, tracing out the rest."""
    keep_pos = layout.positions(keep)
    n = layout.n_wires
    r = _reshaped(rho, layout)
    # einsum indices: row axis i and col axis i share a letter when traced out
    letters = "abcdefghijkl"
    row = list(letters[:n])
    col = [letters[n + i] if i in keep_pos else letters[i] for i in range(n)]
    out = "".join(row[i] for i in keep_pos) + "".join(col[i] for i in keep_pos)
    d_keep = int(np.prod([layout.dims[i] for i in keep_pos]))
    return np.einsum("".join(row) + "".join(col) + "->" + out, r).reshape(d_keep, d_keep)


def partial_transpose(rho: np.ndarray, side, layout: RegisterLayout = REGISTER) -> np.ndarray:
    """Transpose the row/column indices of the `side` wires."""
    side_pos = layout.positions(side)
    n = layout.n_wires
    r = _reshaped(rho, layout)
    axes = list(range(2 * n))
    for i in side_pos:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return r.transpose(axes).reshape(layout.dim, layout.dim)


def permute_wires(rho: np.ndarray, order, layout: RegisterLayout = REGISTER) -> np.ndarray:
    """Reorder the register wires of `rho` into `order` (a permutation)."""
    pos = [layout.positions(w)[0] if isinstance(w, (str, int)) else w for w in order]
    if sorted(pos) != list(range(layout.n_wires)):
        raise ValueError("order must be a permutation of all wires")
    n = layout.n_wires
    r = _reshaped(rho, layout)
    axes = pos + [n + i for i in pos]
    return r.transpose(axes).reshape(layout.dim, layout.dim)


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values."""
    return float(np.linalg.svd(np.asarray(a, dtype=complex), compute_uv=False).sum())


def trace_distance(r1: np.ndarray, r2: np.ndarray) -> float:
    """Half the trace norm of the difference of two states."""
    r1 = np.asarray(r1)
    r2 = np.asarray(r2)
    if r1.shape != r2.shape:
        raise ValueError(f"dimension mismatch: {r1.shape} vs {r2.shape}")
    return 0.5 * trace_norm(r1 - r2)


def vn_entropy(rho: np.ndarray, clamp: float = EIG_CLAMP) -> float:
    """Von Neumann entropy in bits; eigenvalues below `clamp` contribute 0."""
    lam = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    lam = lam[lam > clamp]
    if lam.size == 0:
        return 0.0
    return float(-(lam * np.log2(lam)).sum())


def mutual_information(rho_ab: np.ndarray, layout: RegisterLayout = SYSTEM_ANCILLA) -> float:
    """Quantum mutual information S(A) + S(B) - S(AB) of a bipartite state."""
    if layout.n_wires != 2:
        raise ValueError("mutual information needs a bipartite layout")
    ra = partial_trace(rho_ab, 0, layout)
    rb = partial_trace(rho_ab, 1, layout)
    return vn_entropy(ra) + vn_entropy(rb) - vn_entropy(rho_ab)


class FractionalUnitary:
    """Continuous interpolation ``U^t`` through the principal matrix logarithm.

    Eigenphases are taken on the principal branch (-pi, pi], with an
    eigenvalue of -1 mapped deterministically to +pi (the closed end), so
    gates carrying a -1 eigenvalue (CNOT, SWAP, Hadamard) interpolate
    without branch ambiguity. A unitary Schur decomposition supplies an
    orthonormal eigenbasis, which keeps spectral projectors well defined
    for degenerate eigenphases. ``at(0)`` is the identity and ``at(1)``
    recovers ``U``.
    """

    def __init__(self, u: np.ndarray, branch_tol: float = 1e-12, check: bool = True):
        u = np.asarray(u, dtype=complex)
        if check and not is_unitary(u):
            raise ValueError("input is not unitary within tolerance")
        t, z = sla.schur(u, output="complex")
        phases = np.angle(np.diagonal(t))
        # snap just-below-the-cut phases (eigenvalue -1 with roundoff) to +pi
        phases = np.where(phases <= -np.pi + branch_tol, phases + 2.0 * np.pi, phases)
        self._basis = z
        self._phases = phases
        self.dim = u.shape[0]

    def at(self, t: float) -> np.ndarray:
        return (self._basis * np.exp(1j * self._phases * t)) @ self._basis.conj().T

    def at_many(self, ts: np.ndarray) -> np.ndarray:
        """Stacked powers, shape (len(ts), d, d)."""
        ts = np.asarray(ts, dtype=float)
        ph = np.exp(1j * np.outer(ts, self._phases))
        return np.einsum("ab,tb,cb->tac", self._basis, ph, self._basis.conj())


def unitary_fractional_power(u: np.ndarray, t: float) -> np.ndarray:
    """Principal fractional power ``U^t`` of a unitary matrix."""
    return FractionalUnitary(u).at(t)


def vec(m: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: element (i, j) lands at index j*d + i."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    return v.reshape(d, d, order="F")


@dataclass(frozen=True, eq=False)
class Superoperator:
    """A d^2 x d^2 matrix acting on column-stacked operators.

    ``singular`` records whether a regularized inverse discarded any
    singular values while producing this map.
    """

    mat: np.ndarray
    d: int
    singular: bool = False

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return unvec(self.mat @ vec(rho), self.d)

    def compose(self, other: "Superoperator") -> "Superoperator":
        """This map after `other` (matrix product self.mat @ other.mat)."""
        return Superoperator(self.mat @ other.mat, self.d,
                             singular=self.singular or other.singular)


def superop_from_action(apply: Callable[[np.ndarray], np.ndarray], d: int) -> Superoperator:
    """Build the matrix of a linear operator-valued map from its action.

    Column ``j*d + i`` is ``vec(apply(|i><j|))``.
    """
    mat = np.zeros((d * d, d * d), dtype=complex)
    for j in range(d):
        for i in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[i, j] = 1.0
            mat[:, j * d + i] = vec(apply(unit))
    return Superoperator(mat, d)


def choi_state(s: Superoperator) -> np.ndarray:
    """Apply ``map (x) identity`` to the normalized maximally entangled state.

    The result lives on system (x) ancilla with the system factor first. It
    has unit trace when the map is trace preserving and is positive
    semidefinite exactly when the map is completely positive.
    """
    d = s.d
    s4 = np.asarray(s.mat, dtype=complex).reshape(d, d, d, d)
    # C[(a,i),(b,j)] = S[b*d+a, j*d+i] / d
    return s4.transpose(1, 3, 0, 2).reshape(d * d, d * d) / d


def regularized_inverse(s: Superoperator, tol: float = PINV_TOL) -> Superoperator:
    """SVD pseudo-inverse discarding singular values below ``tol * sigma_max``.

    The result is flagged ``singular=True`` when anything was discarded;
    a map with no usable singular values raises SingularMapError.
    """
    u, sig, vh = np.linalg.svd(np.asarray(s.mat, dtype=complex))
    if sig[0] <= 0.0:
        raise SingularMapError("map is identically zero")
    keep = sig >= tol * sig[0]
    if not keep.any():
        raise SingularMapError("all singular values below regularization threshold")
    inv = (vh.conj().T[:, keep] / sig[keep]) @ u.conj().T[keep]
    return Superoperator(inv, s.d, singular=not bool(keep.all()))
