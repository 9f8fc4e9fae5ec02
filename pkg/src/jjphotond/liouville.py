"""Hilbert space, Hamiltonian, dissipators, and the master-equation generator.

The system is a two-level junction (|g>, |e>) coupled to a cavity mode
truncated at n_max photons.  Basis ordering is canonical: the state
(j, n) with j in {g=0, e=1} sits at index 2n + j, i.e. g before e within
each photon number.  Density matrices are dim x dim complex arrays with
dim = 2 (n_max + 1).

The generator is

    L[rho] = -i [H, rho] + L_gamma[rho] + L_kappa[rho] + L_T[rho]

with H in units of rad/ns (hbar divided out), the two zero-temperature
Lindblad dissipators, and the trace-decreasing tunneling term
L_T[rho] = -1/2 {Theta, rho}.  In the default rotating-secular frame
H = -Delta Pi_e + (Omega/2)(a^dag sigma- + a sigma+) and Theta keeps only
the level populations, Theta = Gamma_e Pi_e + Gamma_g Pi_g.  The lab-full
frame keeps the bare frequencies in H and the sqrt(Gamma_e Gamma_g)
cross terms in Theta; those cross terms are not invariant under the
rotating-frame transformation (they oscillate near omega_r), which is why
the rotating frame drops them.

Superoperators are available in two interchangeable representations:
matrix-free application to a density matrix, and a dense dim^2 x dim^2
matrix acting on the column-stacked vectorization vec(rho) (column j of
rho occupies entries j*dim .. j*dim+dim-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError
from .params import FRAME_LAB, FRAME_ROTATING, SimParams


@dataclass(frozen=True)
class HilbertSpace:
    """Canonical basis indexing for junction (x) cavity states."""

    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 0:
            raise ConfigError(f"n_max must be >= 0, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, j: int, n: int) -> int:
        """Basis index of junction level j in {0=g, 1=e} with n photons."""
        if j not in (0, 1):
            raise ValueError(f"junction level must be 0 (g) or 1 (e), got {j}")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside 0..{self.n_max}")
        return 2 * n + j

    def label(self, i: int) -> tuple[int, int]:
        """Inverse of index: (j, n) for basis index i."""
        if not 0 <= i < self.dim:
            raise ValueError(f"basis index {i} outside 0..{self.dim - 1}")
        return i % 2, i // 2


def build_space(n_max: int) -> HilbertSpace:
    return HilbertSpace(n_max)


# Junction operators in the (g, e) basis.
_SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)   # |g><e|
_PI_E = np.diag([0.0, 1.0]).astype(complex)
_PI_G = np.diag([1.0, 0.0]).astype(complex)


def annihilator(space: HilbertSpace) -> np.ndarray:
    """Cavity annihilation operator a on the full space."""
    n_dim = space.n_max + 1
    a_cav = np.diag(np.sqrt(np.arange(1, n_dim)), 1).astype(complex)
    return np.kron(a_cav, np.eye(2, dtype=complex))


def sigma_minus(space: HilbertSpace) -> np.ndarray:
    """Junction lowering operator |g><e| on the full space."""
    return np.kron(np.eye(space.n_max + 1, dtype=complex), _SIGMA_MINUS)


def excited_projector(space: HilbertSpace) -> np.ndarray:
    return np.kron(np.eye(space.n_max + 1, dtype=complex), _PI_E)


def ground_projector(space: HilbertSpace) -> np.ndarray:
    return np.kron(np.eye(space.n_max + 1, dtype=complex), _PI_G)


def pure_state(space: HilbertSpace, j: int, n: int) -> np.ndarray:
    """Density matrix |j,n><j,n|."""
    rho = np.zeros((space.dim, space.dim), dtype=complex)
    i = space.index(j, n)
    rho[i, i] = 1.0
    return rho


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho).reshape(-1, order="F")


def unvec(y: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(y).reshape((dim, dim), order="F")


def build_hamiltonian(p: SimParams, space: HilbertSpace) -> np.ndarray:
    """Hamiltonian over hbar, rad/ns, in the configured frame.

    Rotating frame (at omega_r):  -Delta Pi_e + (Omega/2)(a^dag sigma- + a sigma+)
    Lab frame: omega_r (a^dag a + 1/2) + omega_eg Pi_e + same coupling,
    with omega_r = omega_eg + Delta.
    """
    a = annihilator(space)
    sm = sigma_minus(space)
    coupling = 0.5 * p.omega * (a.conj().T @ sm + a @ sm.conj().T)
    if p.frame == FRAME_ROTATING:
        return -p.delta * excited_projector(space) + coupling
    omega_r = p.omega_eg + p.delta
    number = a.conj().T @ a
    ident = np.eye(space.dim, dtype=complex)
    return omega_r * (number + 0.5 * ident) \
        + p.omega_eg * excited_projector(space) + coupling


@dataclass(frozen=True)
class LindbladTerm:
    """Trace-preserving dissipator rate*(c rho c^dag - 1/2 {c^dag c, rho})."""

    op: np.ndarray
    rate: float

    def apply(self, rho: np.ndarray) -> np.ndarray:
        c = self.op
        cdc = c.conj().T @ c
        return self.rate * (c @ rho @ c.conj().T - 0.5 * (cdc @ rho + rho @ cdc))

    def dense(self) -> np.ndarray:
        c = self.op
        dim = c.shape[0]
        ident = np.eye(dim, dtype=complex)
        cdc = c.conj().T @ c
        return self.rate * (
            np.kron(c.conj(), c)
            - 0.5 * np.kron(ident, cdc)
            - 0.5 * np.kron(cdc.T, ident)
        )


@dataclass(frozen=True)
class TunnelingTerm:
    """Trace-decreasing anticommutator term -1/2 {Theta, rho}.

    Applied uniformly to every photon-index pair; written out in junction
    blocks this reproduces the 2x2 block matrix with population entries
    -[Gamma_e rho_ee + sqrt(Gamma_e Gamma_g)/2 (rho_eg + rho_ge)] etc.
    """

    theta: np.ndarray

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return -0.5 * (self.theta @ rho + rho @ self.theta)

    def dense(self) -> np.ndarray:
        dim = self.theta.shape[0]
        ident = np.eye(dim, dtype=complex)
        return -0.5 * (np.kron(ident, self.theta) + np.kron(self.theta.T, ident))


def build_damping_dissipators(
    p: SimParams, space: HilbertSpace
) -> tuple[LindbladTerm, LindbladTerm]:
    """Cavity (kappa) and junction (gamma) zero-temperature dissipators."""
    return (
        LindbladTerm(annihilator(space), p.kappa),
        LindbladTerm(sigma_minus(space), p.gamma),
    )


def build_tunneling(p: SimParams, space: HilbertSpace, mode: str = "secular") -> TunnelingTerm:
    """Tunneling superoperator in secular or full form.

    secular: Theta = Gamma_e Pi_e + Gamma_g Pi_g
    full:    adds sqrt(Gamma_e Gamma_g) (sigma+ + sigma-)
    """
    if mode not in ("secular", "full"):
        raise ValueError(f"tunneling mode must be 'secular' or 'full', got {mode!r}")
    theta = p.gamma_e * excited_projector(space) + p.gamma_g * ground_projector(space)
    if mode == "full":
        sm = sigma_minus(space)
        theta = theta + np.sqrt(p.gamma_e * p.gamma_g) * (sm + sm.conj().T)
    return TunnelingTerm(theta)


class Liouvillian:
    """The time-independent linear map rho -> drho/dt.

    Provides matrix-free application (`apply`) and a dense superoperator
    over column-stacked vec(rho) (`matrix`); the two agree to machine
    precision.  Immutable once built; safe to share across threads.
    """

    def __init__(
        self,
        space: HilbertSpace,
        hamiltonian: np.ndarray,
        dissipators: tuple[LindbladTerm, ...],
        tunneling: TunnelingTerm,
    ):
        self.space = space
        self.hamiltonian = hamiltonian
        self.dissipators = tuple(dissipators)
        self.tunneling = tunneling

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def theta(self) -> np.ndarray:
        """Trace-decay operator: d(Tr rho)/dt = -Tr(Theta rho)."""
        return self.tunneling.theta

    def apply(self, rho: np.ndarray) -> np.ndarray:
        h = self.hamiltonian
        out = -1j * (h @ rho - rho @ h)
        for term in self.dissipators:
            out += term.apply(rho)
        out += self.tunneling.apply(rho)
        return out

    @cached_property
    def matrix(self) -> np.ndarray:
        dim = self.dim
        ident = np.eye(dim, dtype=complex)
        h = self.hamiltonian
        mat = -1j * (np.kron(ident, h) - np.kron(h.T, ident))
        for term in self.dissipators:
            mat = mat + term.dense()
        return mat + self.tunneling.dense()

    def trace_leak(self, rho: np.ndarray) -> float:
        """-Tr(Theta rho), the instantaneous trace decay rate."""
        return float(-np.trace(self.theta @ rho).real)


def assemble(p: SimParams, space: HilbertSpace | None = None) -> Liouvillian:
    """Full generator for the configured frame.

    rotating-secular pairs the rotating-frame Hamiltonian with the secular
    tunneling operator; lab-full pairs the lab-frame Hamiltonian with the
    full one.
    """
    if space is None:
        space = build_space(p.n_max)
    tun_mode = "secular" if p.frame == FRAME_ROTATING else "full"
    return Liouvillian(
        space,
        build_hamiltonian(p, space),
        build_damping_dissipators(p, space),
        build_tunneling(p, space, tun_mode),
    )
