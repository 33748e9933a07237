"""Core linear-algebra services for port systems ``x'(t) = A x(t) + P u(t)``.

Construction and validation of (A, P) pairs, dense eigendecomposition with a
deterministic eigenvalue ordering, matrix exponentials, and forced-trajectory
integration on [0, T] with the initial state pinned at the origin.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFiniteEntry,
    NotAProjection,
    OverflowRisk,
    SignalDomainError,
)

# Default tolerances; every operation accepts an override.
PROJ_TOL = 1e-10
SPEC_TOL = 1e-8
EXP_TOL = 1e-12
SYM_TOL = 1e-12

_DOMAIN_SLACK = 1e-9


def _as_square_matrix(M, name):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{name} must be a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteEntry(f"{name} contains non-finite entries")
    return M


def _freeze(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LinearPortSystem:
    """A pair (A, P) of a system matrix and a projection onto the ports."""

    A: np.ndarray
    P: np.ndarray
    n: int


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a real matrix.

    ``eigenvalues`` are sorted by descending real part, ties by descending
    imaginary part, so conjugate pairs sit adjacent with the positive
    imaginary member first.  ``G`` holds eigenvectors as columns and
    ``H = G^{-1}``; both are populated even in the repeated-eigenvalue case
    (via a pseudo-inverse fallback) but ``diagonalizable`` is only set when
    the minimum eigenvalue gap exceeds the tolerance and the reconstruction
    ``G diag(lambda) H`` matches the input.
    """

    eigenvalues: np.ndarray
    G: np.ndarray
    H: np.ndarray
    diagonalizable: bool
    cond_G: float
    min_gap: float


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    T: float


def make_system(A, P, proj_tol: float = PROJ_TOL) -> LinearPortSystem:
    """Validate and build a port system from a system matrix and a projection.

    Raises ``DimensionMismatch``, ``NonFiniteEntry`` or ``NotAProjection``
    when ``P @ P`` differs from ``P`` by more than ``proj_tol`` relative to
    ``max(1, ||P||_F)``.
    """
    if proj_tol <= 0:
        raise ValueError("proj_tol must be positive")
    A = _as_square_matrix(A, "A")
    P = _as_square_matrix(P, "P")
    if A.shape != P.shape:
        raise DimensionMismatch(f"A has shape {A.shape} but P has shape {P.shape}")
    defect = np.linalg.norm(P @ P - P)
    if defect > proj_tol * max(1.0, np.linalg.norm(P)):
        raise NotAProjection(f"||P@P - P||_F = {defect:.3e} exceeds tolerance")
    return LinearPortSystem(A=_freeze(A), P=_freeze(P), n=A.shape[0])


def _eig_order(eigenvalues):
    # descending real part, then descending imaginary part: conjugate pairs
    # become adjacent with the positive-imaginary member first
    return np.lexsort((-eigenvalues.imag, -eigenvalues.real))


def spectrum(A, spec_tol: float = SPEC_TOL) -> Spectrum:
    """Eigendecomposition with deterministic ordering and a gap-based
    diagonalizability flag.

    Never fails on repeated eigenvalues: when the minimum pairwise gap is at
    most ``spec_tol`` the flag is False and G, H come from a pseudo-inverse
    fallback.
    """
    A = _as_square_matrix(A, "A")
    n = A.shape[0]
    try:
        eigenvalues, G = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    order = _eig_order(eigenvalues)
    eigenvalues = eigenvalues[order]
    G = G[:, order]

    # canonicalize conjugate pairs: the negative-imaginary member of a pair is
    # stored as the exact conjugate of its partner
    used = np.zeros(n, dtype=bool)
    for i in range(n):
        if used[i] or eigenvalues[i].imag <= 0.0:
            continue
        target = np.conj(eigenvalues[i])
        for j in range(i + 1, n):
            if not used[j] and np.isclose(eigenvalues[j], target, rtol=1e-12, atol=1e-12):
                eigenvalues[j] = target
                G[:, j] = np.conj(G[:, i])
                used[i] = used[j] = True
                break

    if n > 1:
        diffs = np.abs(eigenvalues[:, None] - eigenvalues[None, :])
        min_gap = float(diffs[~np.eye(n, dtype=bool)].min())
    else:
        min_gap = np.inf

    scale = max(1.0, float(np.linalg.norm(A)))
    diagonalizable = min_gap > spec_tol
    if diagonalizable:
        H = np.linalg.inv(G)
        recon = np.linalg.norm(G @ np.diag(eigenvalues) @ H - A)
        diagonalizable = recon <= spec_tol * scale
    if not diagonalizable:
        H = np.linalg.pinv(G)
    cond_G = float(np.linalg.cond(G))
    return Spectrum(
        eigenvalues=_freeze(eigenvalues),
        G=_freeze(G),
        H=_freeze(H),
        diagonalizable=bool(diagonalizable),
        cond_G=cond_G,
        min_gap=min_gap,
    )


def matrix_exponential(A, t: float, exp_tol: float = EXP_TOL) -> np.ndarray:
    """Matrix exponential ``exp(A t)`` via scaling-and-squaring Pade.

    Raises ``OverflowRisk`` when the result is not representable in double
    precision.
    """
    A = _as_square_matrix(A, "A")
    if not np.isfinite(t):
        raise NonFiniteEntry("t must be finite")
    # cheap pre-check: a Gershgorin bound on the real spectral abscissa
    M = A * t
    row_bound = np.max(np.diag(M) + np.sum(np.abs(M - np.diag(np.diag(M))), axis=1))
    if row_bound > 700.0:
        raise OverflowRisk(f"exp(At) would overflow (growth bound {row_bound:.1f})")
    E = scipy.linalg.expm(M)
    if not np.all(np.isfinite(E)):
        raise OverflowRisk("exp(At) overflowed double precision")
    return E


def max_sym_eigenvalue(M) -> float:
    """Largest eigenvalue of the symmetric part ``(M + M^T) / 2``."""
    M = _as_square_matrix(M, "M")
    try:
        vals = np.linalg.eigvalsh(0.5 * (M + M.T))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"symmetric eigensolve failed: {exc}") from exc
    return float(vals[-1])


def top_sym_eigenpair(M):
    """Largest eigenvalue of the symmetric part and its unit eigenvector."""
    M = _as_square_matrix(M, "M")
    vals, vecs = np.linalg.eigh(0.5 * (M + M.T))
    return float(vals[-1]), vecs[:, -1].copy()


# -- forced integration -------------------------------------------------------


def _signal_hooks(u, T):
    """Return (vector_eval, knots, piecewise_constant) for a signal-like u.

    Accepts the Signal dataclasses from :mod:`locact.signals` or any callable
    t -> R^n.
    """
    from . import signals as _sig

    if _sig.is_signal(u):
        if _sig.horizon(u) < T * (1.0 - _DOMAIN_SLACK):
            raise SignalDomainError(
                f"signal horizon {_sig.horizon(u)} is shorter than T={T}"
            )
        def evaluate(ts):
            return np.atleast_2d(_sig.eval_signal(u, ts))
        return evaluate, _sig.breakpoints(u), _sig.is_piecewise_constant(u)
    if callable(u):
        def evaluate(ts):
            ts = np.atleast_1d(ts)
            try:
                vals = np.asarray(u(ts), dtype=float)
                if vals.ndim == 2 and vals.shape[0] == ts.size:
                    return vals
                if vals.ndim == 1 and ts.size == 1:
                    return vals[None, :]
            except Exception:
                pass
            return np.stack([np.atleast_1d(np.asarray(u(t), dtype=float)) for t in ts])
        return evaluate, (), False
    raise TypeError(f"cannot evaluate input signal of type {type(u)!r}")


def _segment_grid(T, knots, steps):
    """Split [0, T] at the interior knots and spread the step budget.

    Steps go proportionally to segment length, but narrow segments (signal
    windows, pulse edges) keep a floor so their features stay resolved when
    the horizon dwarfs them.
    """
    interior = sorted(k for k in knots if 1e-12 * max(1.0, T) < k < T * (1.0 - 1e-12))
    edges = [0.0] + interior + [T]
    lengths = np.diff(edges)
    floor = 2 if len(lengths) == 1 else max(2, min(2048, steps // 8))
    counts = [max(floor, int(round(steps * L / T))) for L in lengths]
    return edges, counts


def _rk4_forced(A, P, evaluate, T, steps, knots, piecewise_constant,
                want_states=True):
    """Classical RK4 for ``x' = A x + P u``, x(0) = 0, jointly integrating the
    energy integrand ``z' = <x, P u>``.

    The grid is split at the signal's discontinuities so no step straddles a
    jump; on piecewise-constant signals each segment uses its midpoint value,
    which realizes the one-sided limits at the jump points.
    """
    n = A.shape[0]
    edges, counts = _segment_grid(T, knots, steps)
    x = np.zeros(n)
    W = 0.0
    all_times = [np.array([0.0])]
    all_states = [x[None, :].copy()] if want_states else None
    for (lo, hi), m in zip(zip(edges[:-1], edges[1:]), counts):
        h = (hi - lo) / m
        grid = lo + h * np.arange(m + 1)
        grid[-1] = hi
        if piecewise_constant:
            const = evaluate(np.array([0.5 * (lo + hi)]))[0]
            U1 = np.broadcast_to(const, (m, n))
            U2, U3 = U1, U1
        else:
            U1 = evaluate(grid[:-1])
            U2 = evaluate(grid[:-1] + 0.5 * h)
            U3 = evaluate(grid[1:])
        F1 = U1 @ P.T
        F2 = U2 @ P.T
        F3 = U3 @ P.T
        states = np.empty((m, n)) if want_states else None
        for k in range(m):
            f1, f2, f3 = F1[k], F2[k], F3[k]
            k1 = A @ x + f1
            z1 = x @ f1
            y = x + (0.5 * h) * k1
            k2 = A @ y + f2
            z2 = y @ f2
            y = x + (0.5 * h) * k2
            k3 = A @ y + f2
            z3 = y @ f2
            y = x + h * k3
            k4 = A @ y + f3
            z4 = y @ f3
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            W += (h / 6.0) * (z1 + 2.0 * z2 + 2.0 * z3 + z4)
            if want_states:
                states[k] = x
        all_times.append(grid[1:])
        if want_states:
            all_states.append(states)
    times = np.concatenate(all_times)
    states = np.concatenate(all_states) if want_states else None
    return times, states, W


def solve_forced(sys: LinearPortSystem, u, T: float, steps: int) -> Trajectory:
    """Integrate ``x' = A x + P u(t)`` with x(0) = 0 on [0, T].

    Fixed-step classical RK4 on a uniform grid, split at the discontinuity
    points of two-pulse signals.  ``u`` may be a Signal or a callable.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    evaluate, knots, pwc = _signal_hooks(u, T)
    times, states, _ = _rk4_forced(sys.A, sys.P, evaluate, T, steps, knots, pwc)
    return Trajectory(times=_freeze(times), states=_freeze(states), T=float(T))


def forced_energy(sys: LinearPortSystem, u, T: float, steps: int) -> float:
    """Single-resolution energy integral; see :func:`locact.activity.energy_integral`
    for the error-estimating wrapper."""
    if T <= 0:
        raise ValueError("T must be positive")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    evaluate, knots, pwc = _signal_hooks(u, T)
    _, _, W = _rk4_forced(sys.A, sys.P, evaluate, T, steps, knots, pwc,
                          want_states=False)
    return W


# -- matrix file ingestion ----------------------------------------------------


def parse_matrix_json(text: str) -> np.ndarray:
    """Parse ``{"n": int, "rows": [[...], ...]}``."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid matrix JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "rows" not in obj:
        raise ValueError("matrix JSON must be an object with 'n' and 'rows'")
    n = int(obj["n"])
    rows = obj["rows"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"expected {n} rows of {n} entries")
    return np.array(rows, dtype=float)


def parse_matrix_text(text: str) -> np.ndarray:
    """Parse whitespace-separated text: first line ``n``, then n rows."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix file")
    n = int(lines[0].split()[0])
    if len(lines) - 1 < n:
        raise DimensionMismatch(f"expected {n} data rows, found {len(lines) - 1}")
    rows = [[float(v) for v in lines[1 + i].split()] for i in range(n)]
    if any(len(r) != n for r in rows):
        raise DimensionMismatch("row length differs from declared n")
    return np.array(rows, dtype=float)


def format_matrix_json(M) -> str:
    M = np.asarray(M, dtype=float)
    rows = ",\n    ".join(
        "[" + ", ".join(format(v, ".17g") for v in row) + "]" for row in M
    )
    return '{"n": %d, "rows": [\n    %s\n]}\n' % (M.shape[0], rows)


def format_matrix_text(M) -> str:
    M = np.asarray(M, dtype=float)
    lines = [str(M.shape[0])]
    lines += [" ".join(format(v, ".17g") for v in row) for row in M]
    return "\n".join(lines) + "\n"


def load_matrix(path) -> np.ndarray:
    """Load a matrix from a JSON or whitespace-text file (sniffed)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return parse_matrix_json(text)
    return parse_matrix_text(text)
