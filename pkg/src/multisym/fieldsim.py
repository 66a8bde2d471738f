"""Discrete Maxwell evolution in temporal gauge on a periodic box, with diagnostics.

Layout (Yee): A_i and E^i = Pi^{i0} = d_0 A_i live on edge centres x + (h/2) e_i;
Pi^{ij} = F_ij = d_i A_j - d_j A_i on face centres. A sits on integer time levels,
E half a step behind (a FieldState at time t holds E at t - dt/2).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .legendre import hamiltonian
from .maxwell_space import aname, build_chart, jet, xname
from .observables import dynamical_residual, make_P_phi
from .symalg import Poly

ETA = np.array([1.0, -1.0, -1.0, -1.0])
PAIRS = ((0, 1), (0, 2), (1, 2))        # spatial (i, j) with i < j, 0-based on axes
CSV_HEADER = ["t", "ix", "iy", "iz", "A1", "A2", "A3", "Pi10", "Pi20", "Pi30", "Pi12", "Pi13", "Pi23"]


class InstabilityError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    dims: Tuple[int, int, int]
    h: float
    dt: float
    boundary: str = "periodic"

    @classmethod
    def cube(cls, n: int, length: float = 1.0, cfl: float = 0.5) -> "Grid":
        h = length / n
        return cls((n, n, n), h, cfl * h)

    @property
    def lengths(self) -> Tuple[float, ...]:
        return tuple(d * self.h for d in self.dims)

    @property
    def cell_volume(self) -> float:
        return self.h ** 3

    def stable(self) -> bool:
        return self.dt <= self.h / math.sqrt(3)

    def coords(self, shift=(0.0, 0.0, 0.0)):
        """Meshgrid of physical coordinates offset by shift (in cells)."""
        axes = [(np.arange(n) + s) * self.h for n, s in zip(self.dims, shift)]
        return np.meshgrid(*axes, indexing="ij")

    def edge(self, i: int):
        s = [0.0, 0.0, 0.0]
        s[i] = 0.5
        return self.coords(s)


@dataclass
class FieldState:
    grid: Grid
    t: float
    A: np.ndarray                 # (3, nx, ny, nz), A_1..A_3 at time t
    E: np.ndarray                 # (3, nx, ny, nz), Pi^{10}..Pi^{30} at t - dt/2

    def copy(self) -> "FieldState":
        return FieldState(self.grid, self.t, self.A.copy(), self.E.copy())

    @property
    def Pi_magnetic(self) -> Dict[Tuple[int, int], np.ndarray]:
        """Pi^{ij} = d_i A_j - d_j A_i on faces (only i < j kept)."""
        return {(i, j): curl_face(self.A, i, j, self.grid.h) for i, j in PAIRS}


# -- difference operators (periodic) ----------------------------------------

def dfwd(f, a, h):
    return (np.roll(f, -1, a) - f) / h


def dbwd(f, a, h):
    return (f - np.roll(f, 1, a)) / h


def curl_face(A, i, j, h):
    return dfwd(A[j], i, h) - dfwd(A[i], j, h)


def d4fwd(f, a, h):
    """Fourth-order staggered derivative, result shifted by +h/2."""
    r = lambda s: np.roll(f, -s, a)
    return (27 * (r(1) - f) - (r(2) - r(-1))) / (24 * h)


def d4bwd(f, a, h):
    r = lambda s: np.roll(f, -s, a)
    return (27 * (f - r(-1)) - (r(1) - r(-2))) / (24 * h)


def d4c(f, a, h):
    r = lambda s: np.roll(f, -s, a)
    return (8 * (r(1) - r(-1)) - (r(2) - r(-2))) / (12 * h)


def i4bwd(f, a):
    """Fourth-order interpolation from +h/2-shifted samples back to nodes."""
    r = lambda s: np.roll(f, -s, a)
    return (-r(-2) + 9 * r(-1) + 9 * f - r(1)) / 16


def spectral_derivative(f, a, length=1.0):
    n = f.shape[a]
    k = 2j * np.pi * np.fft.fftfreq(n, d=length / n)
    shape = [1] * f.ndim
    shape[a] = n
    return np.real(np.fft.ifft(np.fft.fft(f, axis=a) * k.reshape(shape), axis=a))


# -- initial data -----------------------------------------------------------

def zero_state(grid: Grid) -> FieldState:
    z = np.zeros((3,) + grid.dims)
    return FieldState(grid, 0.0, z, z.copy())


def plane_wave_A(grid: Grid, t: float, amplitude=1.0, mode=1) -> np.ndarray:
    """A_2 = a sin(k (x^1 - t)), travelling along +x^1."""
    k = 2 * np.pi * mode / grid.lengths[0]
    A = np.zeros((3,) + grid.dims)
    x = grid.edge(1)[0]
    A[1] = amplitude * np.sin(k * (x - t))
    return A


def plane_wave_E(grid: Grid, t: float, amplitude=1.0, mode=1) -> np.ndarray:
    k = 2 * np.pi * mode / grid.lengths[0]
    E = np.zeros((3,) + grid.dims)
    x = grid.edge(1)[0]
    E[1] = -amplitude * k * np.cos(k * (x - t))
    return E


def discrete_frequency(grid: Grid, k: float) -> float:
    """Leapfrog/Yee dispersion: sin(w dt / 2) / dt = sin(k h / 2) / h."""
    return 2 / grid.dt * math.asin(grid.dt / grid.h * math.sin(k * grid.h / 2))


def plane_wave(grid: Grid, amplitude=1.0, mode=1, t0=0.0, uniform_e=(0.0, 0.0, 0.0),
               discrete: bool = True) -> FieldState:
    """Plane wave A_2 = a sin(k x^1 - w t).

    With `discrete` the frequency is the scheme's own, and E at t0 - dt/2 is the
    exact backward difference of A, so the run is a pure travelling mode; the
    continuous wave (w = k) seeds a small counter-propagating partner instead.
    """
    k = 2 * np.pi * mode / grid.lengths[0]
    if discrete and grid.dt / grid.h * abs(math.sin(k * grid.h / 2)) > 1:
        discrete = False            # beyond the CFL limit the mode has no real discrete frequency
    if not discrete:
        A = plane_wave_A(grid, t0, amplitude, mode)
        E = plane_wave_E(grid, t0 - grid.dt / 2, amplitude, mode)
    else:
        w = discrete_frequency(grid, k)
        x = grid.edge(1)[0]
        A = np.zeros((3,) + grid.dims)
        E = np.zeros((3,) + grid.dims)
        A[1] = amplitude * np.sin(k * x - w * t0)
        E[1] = (A[1] - amplitude * np.sin(k * x - w * (t0 - grid.dt))) / grid.dt
    for i, c in enumerate(uniform_e):
        A[i] += c * t0
        E[i] += c
    return FieldState(grid, t0, A, E)


def uniform_e_state(grid: Grid, e) -> FieldState:
    s = zero_state(grid)
    for i, c in enumerate(e):
        s.E[i] += c
    return s


# -- evolution --------------------------------------------------------------

def curl_curl(A, h):
    """-d_j Pi^{ij} on the E^i edges."""
    out = np.zeros_like(A)
    for i in range(3):
        for j in range(3):
            if i != j:
                out[i] -= dbwd(curl_face(A, i, j, h), j, h)
    return out


def step(state: FieldState, J: Optional[Callable] = None) -> FieldState:
    g = state.grid
    rhs = curl_curl(state.A, g.h)
    if J is not None:
        rhs = rhs + J(state.t, g)
    E = state.E + g.dt * rhs
    A = state.A + g.dt * E
    return FieldState(g, state.t + g.dt, A, E)


def _norm(s: FieldState) -> float:
    return float(np.sqrt(np.sum(s.A ** 2) + np.sum(s.E ** 2)))


def evolve(state: FieldState, steps: int, J: Optional[Callable] = None, growth: float = 1e3,
           callback: Optional[Callable[[FieldState], None]] = None) -> FieldState:
    """Leapfrog steps of d_0 Pi^{i0} + d_j Pi^{ij} = J^i, d_0 A_i = Pi^{i0}."""
    ref = max(_norm(state), 1.0)
    s = state
    for _ in range(steps):
        s = step(s, J)
        n = _norm(s)
        if not np.isfinite(n) or n > growth * ref:
            raise InstabilityError(f"field norm grew to {n:.3e} at t={s.t:.4g} (dt/h={s.grid.dt / s.grid.h:.3g})")
        if callback is not None:
            callback(s)
    return s


def trajectory(state: FieldState, steps: int, J=None, growth=1e3) -> List[FieldState]:
    out = [state]
    evolve(state, steps, J, growth, out.append)
    return out


# -- collocated snapshot ----------------------------------------------------

@dataclass
class Snapshot:
    """Node-collocated fields at time t: A_mu, Pi^{mu nu}, jets dA[beta, lam] = d_beta A_lam."""
    t: float
    h: float
    A: np.ndarray          # (4, ...) with A_0 = 0
    Pi: np.ndarray         # (4, 4, ...) antisymmetric
    dA: np.ndarray         # (4, 4, ...)


def snapshot(state: FieldState, J=None) -> Snapshot:
    g = state.grid
    h = g.h
    nxt = step(state, J)
    E = 0.5 * (state.E + nxt.E)           # E at time t; equals the centred d_0 A
    shape = (4,) + g.dims
    A = np.zeros(shape)
    Pi = np.zeros((4,) + shape)
    dA = np.zeros((4,) + shape)
    for i in range(3):
        A[i + 1] = i4bwd(state.A[i], i)
        Pi[i + 1, 0] = i4bwd(E[i], i)
        Pi[0, i + 1] = -Pi[i + 1, 0]
        dA[0, i + 1] = Pi[i + 1, 0]
    for i, j in PAIRS:
        # fourth-order curl on the faces, then back to the nodes
        f = d4fwd(state.A[j], i, h) - d4fwd(state.A[i], j, h)
        v = i4bwd(i4bwd(f, i), j)
        Pi[i + 1, j + 1] = v
        Pi[j + 1, i + 1] = -v
    for lam in range(3):
        for beta in range(3):
            if beta == lam:
                dA[beta + 1, lam + 1] = d4bwd(state.A[lam], lam, h)
            else:
                dA[beta + 1, lam + 1] = d4c(A[lam + 1], beta, h)
    return Snapshot(state.t, h, A, Pi, dA)


def F_lower_from_jets(s: Snapshot) -> np.ndarray:
    return s.dA - np.swapaxes(s.dA, 0, 1)


def raise2(F: np.ndarray) -> np.ndarray:
    return F * ETA[:, None, None, None, None] * ETA[None, :, None, None, None]


def lagrangian_density(F_up: np.ndarray) -> np.ndarray:
    """L = -(1/4) F_{ab} F^{ab} for an antisymmetric F^{ab}."""
    F_lo = raise2(F_up)
    return -0.25 * np.sum(F_lo * F_up, axis=(0, 1))


def stress_energy(state: FieldState, J=None) -> Tuple[np.ndarray, np.ndarray]:
    """Canonical S^a_b = delta^a_b L - F^{la} d_b A_l and symmetric Sbar^{ab}."""
    s = snapshot(state, J)
    Fup = raise2(F_lower_from_jets(s))
    L = lagrangian_density(Fup)
    S = -np.einsum("la...,bl...->ab...", Fup, s.dA)
    for a in range(4):
        S[a, a] += L
    F_mixed = Fup * ETA[None, :, None, None, None]       # F^{a}_{l}
    FF = np.sum(raise2(Fup) * Fup, axis=(0, 1))
    Sbar = -np.einsum("al...,bl...->ab...", Fup, F_mixed)
    for a in range(4):
        Sbar[a, a] += 0.25 * ETA[a] * FF
    return S, Sbar


def hamiltonian_tensor(state: FieldState, J=None) -> Tuple[np.ndarray, np.ndarray]:
    """h^a_b = Pi^{la} d_b A_l - delta^a_b L, and h^0_0 from H - (e + Pi^{la} d_a A_l, a >= 1)."""
    s = snapshot(state, J)
    L = lagrangian_density(s.Pi)
    Hm = np.einsum("la...,bl...->ab...", s.Pi, s.dA)
    for a in range(4):
        Hm[a, a] -= L
    H_minus_e = -0.25 * np.sum(raise2(s.Pi) * s.Pi, axis=(0, 1))
    spatial = np.einsum("la...,al...->...", s.Pi[:, 1:], s.dA[1:])
    return Hm, H_minus_e - spatial


# -- energy and constraints -------------------------------------------------

def energy(state: FieldState) -> float:
    """Leapfrog-conserved discretisation of (1/2) int (E^2 + B^2).

    Uses E at t - dt/2 with the curls at t - dt and t, which the scheme keeps
    constant to round-off in vacuum.
    """
    g = state.grid
    prev = state.A - g.dt * state.E
    w = np.sum(state.E ** 2)
    for i, j in PAIRS:
        w += np.sum(curl_face(prev, i, j, g.h) * curl_face(state.A, i, j, g.h))
    return 0.5 * float(w) * g.cell_volume


def energy_density_integral(state: FieldState, J=None) -> float:
    """Midpoint quadrature of h^0_0 on the slice of the state's time."""
    _, h00 = hamiltonian_tensor(state, J)
    return float(np.sum(h00)) * state.grid.cell_volume


def constraint_residual(states: Sequence[FieldState], J=None) -> float:
    """RMS of d_nu Pi^{mu nu} - J^mu on four consecutive states, fourth-order stencils.

    The E samples sit at t_k - dt/2, so the time derivative is centred on
    states[1].t, where A is sampled directly.
    """
    if len(states) != 4:
        raise ValueError("need four consecutive states")
    g = states[0].grid
    h, dt = g.h, g.dt
    E = [s.E for s in states]
    dEdt = (E[0] - 27 * E[1] + 27 * E[2] - E[3]) / (24 * dt)
    t_c = states[1].t
    A = states[1].A
    Ec = (-E[0] + 9 * E[1] + 9 * E[2] - E[3]) / 16
    res = []
    for i in range(3):
        r = dEdt[i].copy()
        for j in range(3):
            if j != i:
                Pij = d4fwd(A[j], i, h) - d4fwd(A[i], j, h)
                r += d4bwd(Pij, j, h)
        if J is not None:
            r -= J(t_c, g)[i]
        res.append(r)
    div = sum(d4bwd(Ec[i], i, h) for i in range(3))
    res.append(div)
    tot = sum(float(np.sum(r ** 2)) for r in res)
    return math.sqrt(tot / (4 * np.prod(g.dims)))


def l2_error_plane_wave(state: FieldState, amplitude=1.0, mode=1) -> float:
    exact = plane_wave_A(state.grid, state.t, amplitude, mode)
    return float(np.sqrt(np.sum((state.A - exact) ** 2) / np.sum(exact ** 2)))


# -- functionals and brackets -----------------------------------------------

TestFunction = Callable[..., np.ndarray]


def functional_E(state: FieldState, k: int, test: TestFunction, J=None) -> float:
    """int F^{k0} test d^3x on the slice of the state's time (k = 1..3)."""
    if k not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    s = snapshot(state, J)
    X = state.grid.coords()
    return float(np.sum(s.Pi[k, 0] * test(*X))) * state.grid.cell_volume


def functional_B(state: FieldState, k: int, test: TestFunction, J=None) -> float:
    """-(1/2) eps^{kij} int F_ij test d^3x (k = 1..3)."""
    if k not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    s = snapshot(state, J)
    F = F_lower_from_jets(s)
    X = state.grid.coords()
    tot = np.zeros(state.grid.dims)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            e = _eps3(k, i, j)
            if e:
                tot = tot - 0.5 * e * F[i, j]
    return float(np.sum(tot * test(*X))) * state.grid.cell_volume


def _eps3(i, j, k) -> int:
    if len({i, j, k}) < 3:
        return 0
    return 1 if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


@dataclass
class Functional:
    """Linear functional given by its gradients with respect to A_i and E^i on the nodes."""
    dA: np.ndarray
    dE: np.ndarray


def smeared_E(grid: Grid, i: int, test: TestFunction) -> Functional:
    vol = grid.cell_volume
    dA = np.zeros((3,) + grid.dims)
    dE = np.zeros((3,) + grid.dims)
    dE[i - 1] = test(*grid.coords()) * vol
    return Functional(dA, dE)


def smeared_B(grid: Grid, k: int, test: TestFunction) -> Functional:
    """B^k = eps^{kab} int A_b d_a test, spectral derivative."""
    vol = grid.cell_volume
    f = test(*grid.coords())
    dA = np.zeros((3,) + grid.dims)
    for a in (1, 2, 3):
        for b in (1, 2, 3):
            e = _eps3(k, a, b)
            if e:
                dA[b - 1] += e * spectral_derivative(f, a - 1, grid.lengths[a - 1]) * vol
    return Functional(dA, np.zeros((3,) + grid.dims))


def discrete_bracket(F: Functional, G: Functional, vol: float) -> float:
    """{F, G} with {A_i(x), E^j(y)} = delta_ij delta_xy / h^3."""
    return float(np.sum(F.dA * G.dE) - np.sum(F.dE * G.dA)) / vol


def smeared_bracket(test1: TestFunction, test2: TestFunction, k: int, i: int, n: int = 32,
                    kinds: str = "BE") -> float:
    """Discrete {X^k(test1), Y^i(test2)} for X, Y in {B, E}."""
    grid = Grid.cube(n)
    make = {"B": smeared_B, "E": smeared_E}
    F = make[kinds[0]](grid, k, test1)
    G = make[kinds[1]](grid, i, test2)
    return discrete_bracket(F, G, grid.cell_volume)


def smeared_kernel(test1: TestFunction, test2: TestFunction, k: int, i: int, n: int = 32) -> float:
    """-eps^{kij} sum (d_j test1) test2 h^3."""
    grid = Grid.cube(n)
    X = grid.coords()
    f1, f2 = test1(*X), test2(*X)
    out = 0.0
    for j in (1, 2, 3):
        e = _eps3(k, i, j)
        if e:
            out -= e * float(np.sum(spectral_derivative(f1, j - 1) * f2)) * grid.cell_volume
    return out


# -- slice invariance -------------------------------------------------------

@dataclass
class SliceResult:
    value0: float
    value1: float
    delta: float
    t0: float
    t1: float


def _p_phi_check(phi: Sequence) -> None:
    chart = build_chart("ddw")
    o = make_P_phi(phi, chart)
    if not o.algebraic or not dynamical_residual(o, hamiltonian(chart)).is_zero():
        raise ValueError("P_phi with this phi is not a dynamical observable")


def functional_P_phi(state: FieldState, phi: Sequence, J=None) -> float:
    """int phi_mu Pi^{mu 0} dy_0 on a constant-time slice (positive orientation)."""
    s = snapshot(state, J)
    X = state.grid.coords()
    env = {xname(0): state.t, xname(1): X[0], xname(2): X[1], xname(3): X[2]}
    tot = 0.0
    for m in range(1, 4):
        tot = tot + np.sum(poly_numeric(Poly.coerce(phi[m]), env) * s.Pi[m, 0])
    return float(tot) * state.grid.cell_volume


def slice_invariance(kind: str, states: Sequence[FieldState], phi=None, J=None) -> SliceResult:
    """Evaluate a dynamical functional on the first and last state of a trajectory."""
    a, b = states[0], states[-1]
    if kind == "energy":
        f = lambda s: energy_density_integral(s, J)
    elif kind == "P_phi":
        if phi is None:
            raise ValueError("P_phi needs phi")
        _p_phi_check(phi)
        f = lambda s: functional_P_phi(s, phi, J)
    else:
        raise ValueError(f"unknown functional {kind!r}")
    v0, v1 = f(a), f(b)
    scale = max(abs(v0), abs(v1))
    delta = abs(v1 - v0) / scale if scale > 0 else 0.0
    return SliceResult(v0, v1, delta, a.t, b.t)


# -- numeric evaluation of symbolic expressions -----------------------------

def poly_numeric(p: Poly, env: Dict[str, object]):
    out = 0.0
    for mono, c in p.items():
        term = float(c)
        for v, e in mono:
            term = term * env[v] ** e
        out = out + term
    return out


# -- 2D Lepage-Dedecker flatness --------------------------------------------

@dataclass
class FlatnessReport:
    n: int
    history: List[float]
    mean_F12: float
    final_deviation: float
    divergence_residual: float
    iterations: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "history": self.history,
            "mean_F12": self.mean_F12,
            "final_deviation": self.final_deviation,
            "divergence_residual": self.divergence_residual,
            "iterations": self.iterations,
        }


def _ld2_system():
    from .hamilton import derive, ld2_flatness_symbolic
    return ld2_flatness_symbolic(derive(build_chart("ld2"), sigma=1))


def ld2_flatness(A1: np.ndarray, A2: np.ndarray, flux: float = 0.0, tol: float = 1e-10,
                 max_iter: int = 50) -> FlatnessReport:
    """Relax 2D data on the unit torus until the sigma = 1 divergence rows hold.

    A = (A1, A2) periodic plus a uniform background F_12 = flux. Each sweep evaluates
    the multimomenta from the Legendre rows, measures the divergence residual, and
    applies a spectral Poisson correction A <- A + (-d_2 chi, d_1 chi).
    """
    sysd = _ld2_system()
    n = A1.shape[0]
    A1 = A1.astype(float).copy()
    A2 = A2.astype(float).copy()
    kx = 2j * np.pi * np.fft.fftfreq(n, d=1.0 / n)
    K1, K2 = np.meshgrid(kx, kx, indexing="ij")
    lap = K1 ** 2 + K2 ** 2
    lap[0, 0] = 1.0
    history: List[float] = []

    def jets(a1, a2):
        env = {}
        for name, f in ((aname(1), a1), (aname(2), a2)):
            env[jet(name, 1)] = spectral_derivative(f, 0)
            env[jet(name, 2)] = spectral_derivative(f, 1)
        env[jet(aname(2), 1)] = env[jet(aname(2), 1)] + flux
        return env

    def measure(a1, a2):
        env = jets(a1, a2)
        pis = {k: poly_numeric(v, env) for k, v in sysd["pi"].items()}
        div1 = spectral_derivative(pis["Pi[A1,1]"], 0) + spectral_derivative(pis["Pi[A1,2]"], 1)
        div2 = spectral_derivative(pis["Pi[A2,1]"], 0) + spectral_derivative(pis["Pi[A2,2]"], 1)
        F12 = env[jet(aname(2), 1)] - env[jet(aname(1), 2)]
        return F12, max(float(np.max(np.abs(div1))), float(np.max(np.abs(div2))))

    it = 0
    while True:
        F12, div = measure(A1, A2)
        dev = float(np.max(np.abs(F12 - F12.mean())))
        history.append(dev)
        if dev < tol:
            break
        if it >= max_iter:
            raise ConvergenceError(f"deviation {dev:.3e} after {it} sweeps")
        rhs = np.fft.fft2(-(F12 - F12.mean()))
        chi_hat = rhs / lap
        chi_hat[0, 0] = 0.0
        chi = np.real(np.fft.ifft2(chi_hat))
        A1 = A1 - spectral_derivative(chi, 1)
        A2 = A2 + spectral_derivative(chi, 0)
        it += 1
    return FlatnessReport(n, history, float(F12.mean()), history[-1], div, it)


# -- simulation driver ------------------------------------------------------

DEFAULT_CONFIG = {
    "dims": [32, 32, 32],
    "h": None,
    "dt": None,
    "steps": 100,
    "init": {"kind": "plane_wave", "amplitude": 1.0, "mode": 1},
    "tolerances": {"growth": 1e3},
    "snapshot_every": 0,
}


def load_config(cfg: dict) -> Tuple[Grid, dict]:
    unknown = set(cfg) - set(DEFAULT_CONFIG)
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    c = {**DEFAULT_CONFIG, **cfg}
    dims = c["dims"]
    if isinstance(dims, int):
        dims = [dims] * 3
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or min(dims) < 4:
        raise ValueError("dims must be three integers >= 4")
    h = float(c["h"]) if c["h"] is not None else 1.0 / dims[0]
    dt = float(c["dt"]) if c["dt"] is not None else h / 2
    return Grid(dims, h, dt), c


def initial_state(grid: Grid, init: dict) -> FieldState:
    kind = init.get("kind", "plane_wave")
    if kind == "zero":
        return zero_state(grid)
    if kind == "plane_wave":
        return plane_wave(grid, init.get("amplitude", 1.0), init.get("mode", 1),
                          uniform_e=init.get("uniform_e", (0.0, 0.0, 0.0)))
    if kind == "uniform_e":
        return uniform_e_state(grid, init.get("e", (1.0, 0.0, 0.0)))
    raise ValueError(f"unknown init kind {kind!r}")


def snapshot_rows(state: FieldState) -> List[list]:
    s = snapshot(state)
    rows = []
    nx, ny, nz = state.grid.dims
    for ix in range(nx):
        for iy in range(ny):
            for iz in range(nz):
                p = (ix, iy, iz)
                rows.append([state.t, ix, iy, iz,
                             s.A[1][p], s.A[2][p], s.A[3][p],
                             s.Pi[1, 0][p], s.Pi[2, 0][p], s.Pi[3, 0][p],
                             s.Pi[1, 2][p], s.Pi[1, 3][p], s.Pi[2, 3][p]])
    return rows


def write_csv(path, states: Sequence[FieldState]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for st in states:
            for r in snapshot_rows(st):
                w.writerow([repr(float(r[0]))] + r[1:4] + [f"{float(v):.17g}" for v in r[4:]])


def simulate(cfg: dict) -> Tuple[dict, List[FieldState]]:
    """Run a configured simulation; returns the JSON diagnostics and snapshot states."""
    grid, c = load_config(cfg)
    s = initial_state(grid, c["init"])
    growth = float(c["tolerances"].get("growth", 1e3))
    every = int(c["snapshot_every"] or 0)
    series = []
    snaps = [s] if every else []
    window = [s]
    e0 = energy(s)

    def record(st):
        window.append(st)
        if len(window) > 4:
            window.pop(0)
        entry = {"t": st.t, "energy": energy(st)}
        if len(window) == 4:
            entry["constraint_residual"] = constraint_residual(window)
        series.append(entry)

    series.append({"t": s.t, "energy": e0})
    k = 0

    def cb(st):
        nonlocal k
        k += 1
        record(st)
        if every and k % every == 0:
            snaps.append(st)

    final = evolve(s, int(c["steps"]), growth=growth, callback=cb)
    drift = abs(series[-1]["energy"] - e0) / e0 if e0 else abs(series[-1]["energy"])
    diag = {
        "grid": {"dims": list(grid.dims), "h": grid.h, "dt": grid.dt, "boundary": grid.boundary},
        "steps": int(c["steps"]),
        "energy_drift": drift,
        "series": series,
    }
    if c["init"].get("kind", "plane_wave") == "plane_wave":
        diag["l2_error"] = l2_error_plane_wave(final, c["init"].get("amplitude", 1.0), c["init"].get("mode", 1)) \
            if not any(c["init"].get("uniform_e", ())) else None
    if every and (not snaps or snaps[-1] is not final):
        snaps.append(final)
    return diag, snaps


def eta0_slice_density():
    """Symbolic pullback of -d_0 -| (theta - H dy) to a constant-time slice of the Legendre graph.

    Returns (density, expected) where expected = H - (e + Pi^{mu a} d_a A_mu, a >= 1).
    """
    from .maxwell_space import ENERGY, dy, piname, theta
    from .symalg import Form, Multivector, contract, graph_pullback

    chart = build_chart("ddw")
    H = hamiltonian(chart).poly
    form = -contract(Multivector.basis(chart, xname(0)), theta(chart) - dy(chart) * H)
    jets = {}
    for m in chart.idx:
        jets[aname(m)] = {xname(r): Poly.var(jet(aname(m), r)) for r in chart.idx}
    for m, v in chart.pairs():
        jets[piname(m, v)] = {xname(r): Poly.var(jet(piname(m, v), r)) for r in chart.idx}
    jets[ENERGY] = {xname(r): Poly.var(jet(ENERGY, r)) for r in chart.idx}
    pulled = graph_pullback(form, jets, {})
    # restrict to x^0 = const: keep the dx^1 dx^2 dx^3 component
    key = Form.basis(chart, xname(1), xname(2), xname(3))
    (k0,) = key.terms
    density = pulled.terms.get(k0, Poly.const(0))
    expected = H - Poly.var(ENERGY)
    for m in chart.idx:
        for a in (1, 2, 3):
            expected = expected - Poly.var(piname(m, a)) * Poly.var(jet(aname(m), a))
    return density, expected
