"""Exact statevector QAOA for diagonal cost Hamiltonians.

Basis index ``b`` encodes the assignment whose variable ``i`` equals bit ``i``
of ``b`` (little-endian).  Every routine here minimizes the cost, so the
variational objective is the smallest expectation value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import CapacityError
from .qubo import QuboProblem
from .window import SubQubo

DEFAULT_CAPACITY = 20
DEFAULT_SHOTS = 10_240


@dataclass(frozen=True, eq=False)
class CostDiagonal:
    n_qubits: int
    energies: np.ndarray

    def __post_init__(self):
        if self.energies.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} energies, got {self.energies.shape}")
        if not np.all(np.isfinite(self.energies)):
            raise ValueError("energies must be finite")


@dataclass(frozen=True)
class QaoaParams:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.gammas) != len(self.betas) or not self.gammas:
            raise ValueError("need equal-length, non-empty gamma and beta vectors")
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))

    @property
    def p(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_vector(cls, v) -> QaoaParams:
        v = np.asarray(v, dtype=float)
        p = len(v) // 2
        return cls(tuple(v[:p]), tuple(v[p:]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)


@dataclass(frozen=True)
class OptimizerConfig:
    """Grid + Nelder-Mead settings.  ``grid`` points per angle are used for p = 1."""

    grid: int = 16
    multistarts: int = 8
    xatol: float = 1e-6
    fatol: float = 1e-9
    maxiter: int = 400
    seed: int = 0


@dataclass(frozen=True)
class QaoaConfig:
    depth: int = 1
    shots: int = DEFAULT_SHOTS
    capacity: int = DEFAULT_CAPACITY
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    exact: bool = False

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("QAOA depth must be >= 1")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")


@dataclass
class QaoaResult:
    params: QaoaParams | None
    expectation: float
    samples: dict[int, int]
    shots: int
    best_index: int
    best_bitstring: np.ndarray
    best_energy: float
    exact: bool = False


def index_bits(b: int, n: int) -> np.ndarray:
    return ((b >> np.arange(n)) & 1).astype(np.uint8)


def bitstring(b: int, n: int) -> str:
    """Variable 0 first."""
    return "".join(str(v) for v in index_bits(b, n))


def build_cost_diagonal(sub: SubQubo | QuboProblem, capacity: int = DEFAULT_CAPACITY) -> CostDiagonal:
    """Tabulate the sub-QUBO cost for every basis state."""
    inner = sub.inner if isinstance(sub, SubQubo) else sub
    n = inner.n
    if n > capacity:
        raise CapacityError(f"window of {n} variables exceeds qubit capacity {capacity}")
    dense = np.zeros((n, n))
    rows, cols, vals = inner.pairs
    dense[rows, cols] = vals
    energies = np.zeros(1 << n)
    # fill by doubling: states with top bit q set extend states on bits 0..q-1
    for q in range(n):
        half = 1 << q
        low = energies[:half]
        if q:
            bits = (np.arange(half)[:, None] >> np.arange(q)) & 1
            field_q = bits @ dense[:q, q]
        else:
            field_q = 0.0
        energies[half : 2 * half] = low + inner.linear[q] + field_q
    return CostDiagonal(n, energies)


def _mix(psi: np.ndarray, n: int, beta) -> np.ndarray:
    """Apply exp(-i beta X) on every qubit.  ``psi`` may carry a leading batch axis."""
    batched = psi.ndim == 2
    c = np.cos(beta)
    s = -1j * np.sin(beta)
    if batched:
        c = np.asarray(c)[:, None, None]
        s = np.asarray(s)[:, None, None]
    lead = (psi.shape[0],) if batched else ()
    for q in range(n):
        v = psi.reshape(*lead, -1, 2, 1 << q)
        a0 = v[..., 0, :].copy()
        a1 = v[..., 1, :]
        v[..., 0, :] = c * a0 + s * a1
        v[..., 1, :] = s * a0 + c * a1
    return psi


def evolve(diagonal: CostDiagonal, params: QaoaParams) -> np.ndarray:
    """Statevector after ``p`` layers of cost phase then mixer, from |+>^n."""
    n = diagonal.n_qubits
    dim = 1 << n
    psi = np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)
    for gamma, beta in zip(params.gammas, params.betas):
        psi *= np.exp(-1j * gamma * diagonal.energies)
        _mix(psi, n, beta)
    return psi


def expectation(state: np.ndarray, diagonal: CostDiagonal) -> float:
    if state.shape != diagonal.energies.shape:
        raise ValueError(f"state has shape {state.shape}, diagonal {diagonal.energies.shape}")
    probs = state.real**2 + state.imag**2
    return float(probs @ diagonal.energies)


def qaoa_value(diagonal: CostDiagonal, params: QaoaParams) -> float:
    return expectation(evolve(diagonal, params), diagonal)


def walsh_coefficients(diagonal: CostDiagonal) -> np.ndarray:
    """Coefficients c_S of E(z) = sum_S c_S prod_{i in S} z_i, indexed by bitmask S."""
    c = diagonal.energies.astype(float, copy=True)
    for q in range(diagonal.n_qubits):
        v = c.reshape(-1, 2, 1 << q)
        a0 = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = a0 - v[:, 1, :]
    return c / c.size


@dataclass(frozen=True, eq=False)
class _IsingTerms:
    offset: float
    fields: np.ndarray
    couplings: np.ndarray  # symmetric, zero diagonal
    pairs: tuple[np.ndarray, np.ndarray]


def _quadratic_terms(diagonal: CostDiagonal) -> _IsingTerms | None:
    """Recover (offset, h, J) from a diagonal, or None if it has higher-order terms."""
    n = diagonal.n_qubits
    c = walsh_coefficients(diagonal)
    weight = np.array([bin(S).count("1") for S in range(c.size)])
    scale = 1.0 + np.abs(c).max()
    if np.any(np.abs(c[weight > 2]) > 1e-9 * scale):
        return None
    fields = c[1 << np.arange(n)]
    J = np.zeros((n, n))
    for u in range(n):
        for v in range(u + 1, n):
            J[u, v] = J[v, u] = c[(1 << u) | (1 << v)]
    iu, iv = np.nonzero(np.triu(np.abs(J) > 1e-12 * scale, 1))
    return _IsingTerms(float(c[0]), fields, J, (iu, iv))


def _single_layer_value(terms: _IsingTerms, gamma, beta) -> np.ndarray:
    """Closed-form F_1 for an Ising cost, vectorised over broadcastable angle arrays.

    With c = cos 2b, s = sin 2b and products over spectator spins w:
      <Z_u>     = s sin(2g h_u) prod_w cos(2g J_uw)
      <Z_u Z_v> = c s (<Z_u Y_v> + <Y_u Z_v>) + s^2 <Y_u Y_v>
    where <Z_u Y_v> = cos(2g h_v) sin(2g J_uv) prod_{w != u,v} cos(2g J_vw) and
      <Y_u Y_v> = [cos(2g(h_u - h_v)) prod cos(2g(J_uw - J_vw))
                   - cos(2g(h_u + h_v)) prod cos(2g(J_uw + J_vw))] / 2.
    """
    g = 2.0 * np.asarray(gamma, dtype=float)[..., None]
    b2 = 2.0 * np.asarray(beta, dtype=float)
    h, J = terms.fields, terms.couplings
    s, c = np.sin(b2), np.cos(b2)

    cosJ = np.cos(g[..., None] * J)  # (..., n, n)
    z1 = np.sin(g * h) * cosJ.prod(axis=-1)
    value = terms.offset + s * (z1 @ h)

    iu, iv = terms.pairs
    if iu.size:
        P = iu.size
        rows = np.arange(P)
        Ju, Jv = J[iu], J[iv]  # (P, n)
        juv = J[iu, iv]
        # spectators exclude u and v themselves
        mask = np.ones((P, J.shape[0]))
        mask[rows, iu] = 0.0
        mask[rows, iv] = 0.0
        gp = g[..., None]
        prod_u = np.where(mask > 0, np.cos(gp * Ju), 1.0).prod(axis=-1)
        prod_v = np.where(mask > 0, np.cos(gp * Jv), 1.0).prod(axis=-1)
        sin_j = np.sin(g * juv)
        zy = np.cos(g * h[iv]) * sin_j * prod_v
        yz = np.cos(g * h[iu]) * sin_j * prod_u
        minus = np.cos(g * (h[iu] - h[iv])) * np.cos(gp * (Ju - Jv) * mask).prod(axis=-1)
        plus = np.cos(g * (h[iu] + h[iv])) * np.cos(gp * (Ju + Jv) * mask).prod(axis=-1)
        yy = 0.5 * (minus - plus)
        zz = (c * s)[..., None] * (zy + yz) + (s * s)[..., None] * yy
        value = value + zz @ juv
    return value


def _objective(diagonal: CostDiagonal, p: int):
    """F_p as a function of the flat angle vector (gammas then betas)."""
    terms = _quadratic_terms(diagonal) if p == 1 else None
    if terms is not None:
        return lambda v: float(_single_layer_value(terms, v[0], v[1]))
    return lambda v: qaoa_value(diagonal, QaoaParams.from_vector(v))


def _grid_p1(diagonal: CostDiagonal, points: int) -> np.ndarray:
    """Best point of a points x points grid over [0, pi)^2."""
    angles = np.arange(points) * (np.pi / points)
    terms = _quadratic_terms(diagonal)
    if terms is not None:
        G, B = np.meshgrid(angles, angles, indexing="ij")
        vals = _single_layer_value(terms, G, B)
    else:
        # statevector fallback, batching the beta axis
        n, E = diagonal.n_qubits, diagonal.energies
        vals = np.empty((points, points))
        for i, gamma in enumerate(angles):
            phased = np.exp(-1j * gamma * E) / np.sqrt(E.size)
            batch = np.repeat(phased[None, :], points, axis=0)
            _mix(batch, n, angles)
            vals[i] = (batch.real**2 + batch.imag**2) @ E
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    return np.array([angles[i], angles[j]])


def _simplex(objective, x0: np.ndarray, step: float, cfg: OptimizerConfig) -> tuple[np.ndarray, float]:
    f0 = objective(x0)
    simplex = np.vstack([x0, x0 + step * np.eye(len(x0))])
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": cfg.xatol, "fatol": cfg.fatol, "maxiter": cfg.maxiter},
    )
    if res.fun <= f0:
        return np.asarray(res.x), float(res.fun)
    return x0, f0


def _optimize(diagonal: CostDiagonal, p: int, cfg: OptimizerConfig) -> tuple[QaoaParams, float]:
    objective = _objective(diagonal, p)
    if p == 1:
        x0 = _grid_p1(diagonal, cfg.grid)
        x, val = _simplex(objective, x0, 0.5 * np.pi / cfg.grid, cfg)
        return QaoaParams.from_vector(x), val
    # warm start from the depth p-1 optimum padded with an identity layer,
    # so the result can never be worse than the shallower circuit
    prev, _ = _optimize(diagonal, p - 1, cfg)
    starts = [np.array(prev.gammas + (0.0,) + prev.betas + (0.0,))]
    rng = np.random.default_rng(cfg.seed)
    starts += list(rng.uniform(0.0, np.pi, size=(cfg.multistarts, 2 * p)))
    best_x, best_val = None, np.inf
    for x0 in starts:
        x, val = _simplex(objective, x0, 0.1, cfg)
        if val < best_val:
            best_x, best_val = x, val
    return QaoaParams.from_vector(best_x), best_val


def optimize_params(diagonal: CostDiagonal, p: int = 1, config: OptimizerConfig | None = None) -> QaoaParams:
    """Angles minimizing F_p: coarse grid (p = 1) or random multistarts (p >= 2), refined by Nelder-Mead."""
    if p < 1:
        raise ValueError("p must be >= 1")
    return _optimize(diagonal, p, config or OptimizerConfig())[0]


def sample(state: np.ndarray, shots: int, seed=None) -> dict[int, int]:
    """Multinomial measurement counts keyed by basis index."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.real**2 + state.imag**2
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    hit = np.flatnonzero(counts)
    return dict(zip(hit.tolist(), counts[hit].tolist()))


def solve_subqubo(sub: SubQubo | QuboProblem, config: QaoaConfig | None = None, seed=None) -> QaoaResult:
    """Optimize angles, sample the optimized state, and keep the lowest-energy sample."""
    config = config or QaoaConfig()
    diag = build_cost_diagonal(sub, config.capacity)
    n, E = diag.n_qubits, diag.energies
    if config.exact:
        b = int(np.argmin(E))
        return QaoaResult(None, float(E[b]), {}, 0, b, index_bits(b, n), float(E[b]), exact=True)

    params, _ = _optimize(diag, config.depth, config.optimizer)
    state = evolve(diag, params)
    value = expectation(state, diag)
    counts = sample(state, config.shots, seed)
    seen = np.fromiter(counts, dtype=np.int64)
    b = int(seen[np.lexsort((seen, E[seen]))[0]])
    return QaoaResult(params, value, counts, config.shots, b, index_bits(b, n), float(E[b]))
