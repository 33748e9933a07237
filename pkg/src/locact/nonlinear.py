"""Nonlinear port systems and the equilibrium linearization pipeline.

A nonlinear port system is ``x'(t) = f(x) - P D(x)`` with kinetic part f,
dissipation map D, and a projection P selecting the port variables.  The
pipeline finds an equilibrium, linearizes the kinetic part there (not the
full right-hand side: the dissipation enters only through the input channel),
and hands the resulting linear port system to the activity and genericity
analyses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import activity, genericity, linsys
from .errors import (
    BranchLost,
    DimensionMismatch,
    NoConvergence,
    NonFiniteEvaluation,
    NoSignChange,
    NotAnEquilibrium,
    StageError,
    ZeroProjection,
)

NEWTON_TOL = 1e-10
STAB_TOL = 1e-9
FD_STEP = 1e-6


@dataclass(frozen=True)
class NonlinearPortSystem:
    f: Callable
    D: Callable
    P: np.ndarray
    n: int
    jacobian_f: Optional[Callable] = None
    jacobian_D: Optional[Callable] = None
    family: Optional[str] = None
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class EquilibriumReport:
    x_star: np.ndarray
    residual: float
    jacobian_full: np.ndarray
    jacobian_kinetic: np.ndarray
    stability: str  # Stable | Unstable | Marginal
    notes: str = ""


def jacobian_fd(f: Callable, x, h: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian, column i = (f(x + h e_i) - f(x - h e_i)) / (2h)."""
    if h <= 0:
        raise ValueError("finite-difference step h must be positive")
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    cols = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        fp = np.asarray(f(x + e), dtype=float).ravel()
        fm = np.asarray(f(x - e), dtype=float).ravel()
        if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
            raise NonFiniteEvaluation(f"f is non-finite near coordinate {i}")
        cols.append((fp - fm) / (2.0 * h))
    return np.column_stack(cols)


def _g_and_jacobian(sys: NonlinearPortSystem, x):
    g = np.asarray(sys.f(x), dtype=float).ravel() - sys.P @ np.asarray(sys.D(x), dtype=float).ravel()
    Jf = sys.jacobian_f(x) if sys.jacobian_f is not None else jacobian_fd(sys.f, x)
    JD = sys.jacobian_D(x) if sys.jacobian_D is not None else jacobian_fd(sys.D, x)
    return g, np.asarray(Jf, dtype=float) - sys.P @ np.asarray(JD, dtype=float)


def _kinetic_jacobian(sys: NonlinearPortSystem, x):
    if sys.jacobian_f is not None:
        return np.asarray(sys.jacobian_f(x), dtype=float)
    return jacobian_fd(sys.f, x)


def _stability_label(J, stab_tol=STAB_TOL):
    m = float(np.linalg.eigvals(J).real.max())
    if m > stab_tol:
        return "Unstable"
    if m < -stab_tol:
        return "Stable"
    return "Marginal"


def find_equilibrium(sys: NonlinearPortSystem, x_guess, newton_tol: float = NEWTON_TOL,
                     max_iter: int = 100) -> EquilibriumReport:
    """Damped Newton for ``f(x) - P D(x) = 0``.

    Armijo backtracking with halving (up to 30 halvings per step); a singular
    Jacobian switches to a pseudo-inverse step and is flagged in the report
    notes.  Raises ``NoConvergence`` (carrying the best iterate) when the
    residual never reaches ``newton_tol``.
    """
    x = np.asarray(x_guess, dtype=float).ravel().copy()
    if x.size != sys.n:
        raise DimensionMismatch(f"guess has dimension {x.size}, system has {sys.n}")
    notes = []
    g, J = _g_and_jacobian(sys, x)
    res = float(np.linalg.norm(g))
    best_x, best_res = x.copy(), res
    for _ in range(max_iter):
        if res <= newton_tol:
            break
        try:
            if np.linalg.cond(J) > 1e14:
                raise np.linalg.LinAlgError("ill-conditioned")
            step = np.linalg.solve(J, -g)
        except np.linalg.LinAlgError:
            step = -np.linalg.pinv(J) @ g
            if "pseudo-inverse step" not in notes:
                notes.append("pseudo-inverse step")
        alpha = 1.0
        for _ in range(30):
            x_new = x + alpha * step
            g_new = np.asarray(sys.f(x_new), dtype=float).ravel() \
                - sys.P @ np.asarray(sys.D(x_new), dtype=float).ravel()
            if np.all(np.isfinite(g_new)) and \
                    np.linalg.norm(g_new) <= (1.0 - 1e-4 * alpha) * res:
                break
            alpha *= 0.5
        else:
            x_new = x + alpha * step
        x = x_new
        g, J = _g_and_jacobian(sys, x)
        res = float(np.linalg.norm(g))
        if res < best_res:
            best_x, best_res = x.copy(), res
    if best_res > newton_tol:
        raise NoConvergence(
            f"Newton stalled at residual {best_res:.3e} (tol {newton_tol:.1e})",
            best_x=best_x, best_residual=best_res,
        )
    x = best_x
    _, J_full = _g_and_jacobian(sys, x)
    J_kin = _kinetic_jacobian(sys, x)
    return EquilibriumReport(
        x_star=x, residual=best_res, jacobian_full=J_full,
        jacobian_kinetic=J_kin, stability=_stability_label(J_full),
        notes="; ".join(notes),
    )


def linearize_at(sys: NonlinearPortSystem, x_star,
                 newton_tol: float = NEWTON_TOL) -> linsys.LinearPortSystem:
    """Linear port system at an equilibrium: A is the Jacobian of the kinetic
    part f only (the dissipation channel is replaced by the input), P is kept."""
    x_star = np.asarray(x_star, dtype=float).ravel()
    g = np.asarray(sys.f(x_star), dtype=float).ravel() \
        - sys.P @ np.asarray(sys.D(x_star), dtype=float).ravel()
    res = float(np.linalg.norm(g))
    if res > 10.0 * newton_tol:
        raise NotAnEquilibrium(f"residual {res:.3e} exceeds 10 * newton_tol")
    A = _kinetic_jacobian(sys, x_star)
    return linsys.make_system(A, sys.P)


# -- model builders -------------------------------------------------------------


def fhn_system(mu: float, beta: float = 1.28, gamma: float = 0.12,
               xi: float = 0.1) -> NonlinearPortSystem:
    """FitzHugh-Nagumo with a dissipation term on the first (port) variable:

    ``x' = -y - (x^3/3 - x) - mu x``, ``y' = xi (x - beta y + gamma)``.

    Kinetics f(x, y) = (-y - (x^3/3 - x), xi (x - beta y + gamma)), dissipation
    D(x, y) = mu (x, y), projection P = diag(1, 0), so -P D contributes
    exactly -mu x to the first equation.
    """
    mu, beta, gamma, xi = float(mu), float(beta), float(gamma), float(xi)

    def f(z):
        x, y = z
        return np.array([-y - (x**3 / 3.0 - x), xi * (x - beta * y + gamma)])

    def D(z):
        return mu * np.asarray(z, dtype=float)

    def jac_f(z):
        x, _ = z
        return np.array([[1.0 - x * x, -1.0], [xi, -xi * beta]])

    def jac_D(_):
        return mu * np.eye(2)

    P = np.diag([1.0, 0.0])
    return NonlinearPortSystem(
        f=f, D=D, P=P, n=2, jacobian_f=jac_f, jacobian_D=jac_D,
        family="fhn", params={"mu": mu, "beta": beta, "gamma": gamma, "xi": xi},
    )


def fhn_equilibrium_guesses(mu: float, beta: float, gamma: float, xi: float):
    """Starting points for the FitzHugh-Nagumo equilibrium search.

    For xi != 0 the equilibrium condition reduces to the cubic
    ``x^3 - 3 (1 - mu - 1/beta) x + 3 gamma / beta = 0`` with y = (x+gamma)/beta;
    its real roots give exact-to-roundoff guesses.
    """
    if xi != 0.0 and beta != 0.0:
        roots = np.roots([1.0, 0.0, -3.0 * (1.0 - mu - 1.0 / beta),
                          3.0 * gamma / beta])
        guesses = []
        for r in roots:
            if abs(r.imag) < 1e-9:
                x = float(r.real)
                guesses.append(np.array([x, (x + gamma) / beta]))
        if guesses:
            return guesses
    return [np.array([-1.0, -0.6]), np.zeros(2)]


def hopf_locate(builder: Callable, mu_lo: float, mu_hi: float, tol: float = 1e-6,
                x_guess=None, newton_tol: float = NEWTON_TOL):
    """Bisection in the parameter of the real spectral abscissa of the full
    equilibrium Jacobian, following the equilibrium branch by continuation.

    Returns a :class:`HopfResult`; ``is_hopf`` records whether the crossing
    eigenvalue pair is genuinely complex at the located parameter (a real
    crossing is a fold/steady bifurcation instead).
    """
    if not (mu_lo < mu_hi):
        raise NoSignChange("mu_lo must be strictly below mu_hi")

    state = {"x": None if x_guess is None else np.asarray(x_guess, dtype=float)}

    def eval_at(mu, guess):
        sys = builder(mu)
        if guess is None:
            if sys.family == "fhn":
                guess = fhn_equilibrium_guesses(**sys.params)[0]
            else:
                guess = np.zeros(sys.n)
        report = find_equilibrium(sys, guess, newton_tol=newton_tol)
        eigs = np.linalg.eigvals(report.jacobian_full)
        return report, float(eigs.real.max()), eigs

    def continued(mu):
        try:
            report, phi, eigs = eval_at(mu, state["x"])
        except NoConvergence:
            # step-halving continuation from the last converged point
            x = state["x"]
            mu_from = state.get("mu_from", mu_lo)
            for k in (2, 4, 8, 16):
                try:
                    x_tmp = x
                    for j in range(1, k + 1):
                        mu_j = mu_from + (mu - mu_from) * j / k
                        report, phi, eigs = eval_at(mu_j, x_tmp)
                        x_tmp = report.x_star
                    break
                except NoConvergence:
                    continue
            else:
                raise BranchLost(f"equilibrium branch lost near mu = {mu}")
        state["x"] = report.x_star
        state["mu_from"] = mu
        return report, phi, eigs

    rep_lo, phi_lo, _ = continued(mu_lo)
    rep_hi, phi_hi, _ = continued(mu_hi)
    if phi_lo == 0.0 or phi_hi == 0.0:
        pass  # an endpoint sits exactly on the crossing; bisection still works
    elif np.sign(phi_lo) == np.sign(phi_hi):
        raise NoSignChange(
            f"spectral abscissa has the same sign at both ends "
            f"({phi_lo:.3e}, {phi_hi:.3e})"
        )
    lo, hi = float(mu_lo), float(mu_hi)
    state["x"] = rep_lo.x_star
    state["mu_from"] = lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        _, phi_mid, _ = continued(mid)
        if np.sign(phi_mid) == np.sign(phi_lo):
            lo = mid
            phi_lo = phi_mid
        else:
            hi = mid
    mu_star = 0.5 * (lo + hi)
    report, _, eigs = continued(mu_star)
    crossing = eigs[int(np.argmax(eigs.real))]
    return HopfResult(
        mu_star=mu_star, is_hopf=bool(abs(crossing.imag) > 1e-6),
        crossing_eigenvalue=complex(crossing), equilibrium=report.x_star,
        bracket=(lo, hi),
    )


@dataclass(frozen=True)
class HopfResult:
    mu_star: float
    is_hopf: bool
    crossing_eigenvalue: complex
    equilibrium: np.ndarray
    bracket: tuple


def discrete_laplacian(N: int, boundary: str = "dirichlet") -> np.ndarray:
    """Five-point-stencil Laplacian on the N x N grid as an N^2 x N^2 matrix.

    Boundary closures: Dirichlet drops missing neighbors (ghost value 0),
    Neumann mirrors them (ghost equals the boundary node), Toroidal wraps.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    kind = boundary.lower()
    if kind not in ("dirichlet", "neumann", "toroidal"):
        raise ValueError(f"unknown boundary type: {boundary!r}")
    size = N * N
    M = np.zeros((size, size))

    def idx(j, k):
        return j * N + k

    for j in range(N):
        for k in range(N):
            row = idx(j, k)
            M[row, row] += -4.0
            for dj, dk in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                jj, kk = j + dj, k + dk
                if 0 <= jj < N and 0 <= kk < N:
                    M[row, idx(jj, kk)] += 1.0
                elif kind == "neumann":
                    M[row, row] += 1.0
                elif kind == "toroidal":
                    M[row, idx(jj % N, kk % N)] += 1.0
                # dirichlet: missing neighbor contributes 0
    return M


def rd_single_cell(f_a: Callable, f_b: Callable, D_coeffs, m: int,
                   n: int) -> NonlinearPortSystem:
    """Single reaction cell under Dirichlet closure: the diffusion of the m
    port variables reduces to ``-4 D_i x_i``, expressed as the dissipation map
    ``D(x) = (4 D_1 x_1, ..., 4 D_m x_m, 0, ...)`` with P projecting onto the
    first m coordinates."""
    if not (1 <= m <= n):
        raise DimensionMismatch(f"need 1 <= m <= n, got m={m}, n={n}")
    D_coeffs = np.asarray(D_coeffs, dtype=float).ravel()
    if D_coeffs.size != m:
        raise DimensionMismatch(f"expected {m} diffusion coefficients, got {D_coeffs.size}")
    if np.any(D_coeffs <= 0):
        raise ValueError("diffusion coefficients must be positive")

    def f(x):
        x = np.asarray(x, dtype=float).ravel()
        fa = np.asarray(f_a(x), dtype=float).ravel()
        fb = np.asarray(f_b(x), dtype=float).ravel() if n > m else np.zeros(0)
        if fa.size != m or fb.size != n - m:
            raise DimensionMismatch(
                f"kinetics returned sizes ({fa.size}, {fb.size}), "
                f"expected ({m}, {n - m})"
            )
        return np.concatenate([fa, fb])

    def D(x):
        x = np.asarray(x, dtype=float).ravel()
        out = np.zeros(n)
        out[:m] = 4.0 * D_coeffs * x[:m]
        return out

    P = np.diag([1.0] * m + [0.0] * (n - m))
    return NonlinearPortSystem(f=f, D=D, P=P, n=n, family="rd_cell",
                               params={"m": m, "n": n, "D": D_coeffs.tolist()})


# -- the full pipeline -----------------------------------------------------------


def analyze_equilibrium_pipeline(sys: NonlinearPortSystem, x_guess,
                                 cfg: Optional[activity.WitnessSearchConfig] = None) -> dict:
    """Equilibrium -> kinetic linearization -> activity verdict -> genericity
    membership, plus the edge-of-chaos classification for the FitzHugh-Nagumo
    family; stage failures raise ``StageError`` labelled with the stage."""
    from . import complexity

    def run(stage, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:
            raise StageError(stage, exc) from exc

    eq = run("find_equilibrium", find_equilibrium, sys, x_guess)
    lin = run("linearize_at", linearize_at, sys, eq.x_star)
    verdict = run("classify_activity", activity.classify_activity, lin, cfg)
    try:
        gen = genericity.in_generic_M(lin)
        gen_json = genericity.report_to_json(gen)
    except ZeroProjection:
        gen_json = None
    edge_json = None
    if sys.family == "fhn":
        rf = complexity.fhn_rational(float(eq.x_star[0]), sys.params["beta"],
                                     sys.params["xi"])
        edge = run("edge_of_chaos_classify", complexity.edge_of_chaos_classify, rf)
        edge_json = complexity.classification_to_json(edge)
        edge_json["Y"] = complexity.rational_to_json(rf)
    return {
        "equilibrium": {
            "x_star": eq.x_star.tolist(),
            "residual": eq.residual,
            "stability": eq.stability,
            "notes": eq.notes,
        },
        "jacobians": {
            "kinetic": eq.jacobian_kinetic.tolist(),
            "full": eq.jacobian_full.tolist(),
            "max_re_eig_full": float(np.linalg.eigvals(eq.jacobian_full).real.max()),
            "max_re_eig_kinetic": float(np.linalg.eigvals(eq.jacobian_kinetic).real.max()),
        },
        "activity": activity.verdict_to_json(verdict),
        "genericity": gen_json,
        "edge_of_chaos": edge_json,
    }
