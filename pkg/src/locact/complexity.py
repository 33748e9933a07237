"""Rational complexity functions Y(s): pole and residue analysis and the
four-condition edge-of-chaos classifier.

A linearized port system is locally active when at least one of the four
conditions holds: (i) a pole in the open right half plane, (ii) a multiple
pole on the imaginary axis, (iii) a simple axis pole whose residue is not a
nonnegative real number, (iv) negative real part of Y(i omega) somewhere on
the axis.  It sits at the edge of chaos when (iv) holds and (i)-(iii) fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import EquilibriumNotFound, NotASimplePole

COEFF_TOL = 1e-12
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class ClassifierTolerances:
    on_axis_tol: float = 1e-7
    resid_tol: float = 1e-9
    axis_val_tol: float = 1e-9
    cluster_tol: float = CLUSTER_TOL


@dataclass(frozen=True)
class RationalFunction:
    """Real-coefficient rational function, coefficients in ascending degree.

    Build through :func:`make_rational`, which trims negligible leading
    coefficients and cancels common root pairs; cancelled roots are recorded.
    """

    num: tuple
    den: tuple
    cancelled: tuple = ()

    def __call__(self, s):
        return npoly.polyval(s, np.asarray(self.num)) / \
            npoly.polyval(s, np.asarray(self.den))


@dataclass(frozen=True)
class PoleSet:
    poles: tuple  # of (location: complex, multiplicity: int)
    on_axis_tol: float


@dataclass(frozen=True)
class EdgeClassification:
    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    locally_active: bool
    edge_of_chaos: bool
    evidence: dict = field(default_factory=dict)


def _trim(coeffs, coeff_tol):
    c = np.asarray(coeffs, dtype=float).ravel()
    if c.size == 0:
        return np.array([0.0])
    scale = float(np.max(np.abs(c)))
    if scale == 0.0:
        return np.array([0.0])
    keep = c.size
    while keep > 1 and abs(c[keep - 1]) <= coeff_tol * scale:
        keep -= 1
    return c[:keep].copy()


def _real_poly_from_roots(roots, lead):
    if len(roots) == 0:
        return np.array([float(lead)])
    c = npoly.polyfromroots(np.asarray(roots, dtype=complex))
    return np.real(c) * float(lead)


def make_rational(num, den, coeff_tol: float = COEFF_TOL,
                  cluster_tol: float = CLUSTER_TOL) -> RationalFunction:
    """Construct a reduced rational function from ascending coefficients.

    Common numerator/denominator roots within ``cluster_tol`` of each other
    are cancelled pairwise and recorded in ``cancelled``.
    """
    num = _trim(num, coeff_tol)
    den = _trim(den, coeff_tol)
    if den.size == 1 and den[0] == 0.0:
        raise ValueError("denominator is identically zero")
    if num.size == 1 and num[0] == 0.0:
        return RationalFunction(num=(0.0,), den=tuple(den.tolist()))
    nroots = list(npoly.polyroots(num)) if num.size > 1 else []
    droots = list(npoly.polyroots(den)) if den.size > 1 else []
    cancelled = []
    kept_d = []
    for dr in droots:
        hit = None
        for i, nr in enumerate(nroots):
            if abs(nr - dr) <= cluster_tol * max(1.0, abs(dr)):
                hit = i
                break
        if hit is None:
            kept_d.append(dr)
        else:
            cancelled.append(complex(dr))
            del nroots[hit]
    if cancelled:
        num = _real_poly_from_roots(nroots, num[-1])
        den = _real_poly_from_roots(kept_d, den[-1])
    return RationalFunction(num=tuple(num.tolist()), den=tuple(den.tolist()),
                            cancelled=tuple(cancelled))


def poles(rf: RationalFunction, cluster_tol: float = CLUSTER_TOL,
          on_axis_tol: float = 1e-7) -> PoleSet:
    """Denominator roots (companion-matrix eigenvalues) clustered into
    multiplicities at pairwise distance ``cluster_tol``."""
    den = np.asarray(rf.den, dtype=float)
    if den.size <= 1:
        return PoleSet(poles=(), on_axis_tol=on_axis_tol)
    roots = np.sort_complex(npoly.polyroots(den))
    clusters = []  # list of [sum, count]
    for r in roots:
        for c in clusters:
            if abs(r - c[0] / c[1]) <= cluster_tol * max(1.0, abs(r)):
                c[0] += r
                c[1] += 1
                break
        else:
            clusters.append([r, 1])
    out = tuple((complex(s / m), int(m)) for s, m in clusters)
    return PoleSet(poles=out, on_axis_tol=on_axis_tol)


def residue_at_simple_pole(rf: RationalFunction, p: complex,
                           cluster_tol: float = CLUSTER_TOL) -> complex:
    """Residue ``num(p) / den'(p)`` at a simple pole p."""
    ps = poles(rf, cluster_tol=cluster_tol)
    match = None
    for loc, mult in ps.poles:
        if abs(loc - p) <= max(1e-6 * (1.0 + abs(p)), cluster_tol):
            match = (loc, mult)
            break
    if match is None:
        raise NotASimplePole(f"{p} is not a pole of the reduced function")
    if match[1] != 1:
        raise NotASimplePole(f"pole at {match[0]} has multiplicity {match[1]}")
    num = np.asarray(rf.num, dtype=float)
    dden = npoly.polyder(np.asarray(rf.den, dtype=float))
    return complex(npoly.polyval(p, num) / npoly.polyval(p, dden))


def _real_part_on_axis_poly(rf: RationalFunction):
    """E(w) with Re Y(i w) = E(w) / |den(i w)|^2, as ascending coefficients."""
    i_pow = 1j ** np.arange(len(rf.num))
    cn = np.asarray(rf.num, dtype=complex) * i_pow
    i_pow_d = 1j ** np.arange(len(rf.den))
    cd = np.conj(np.asarray(rf.den, dtype=complex) * i_pow_d)
    prod = npoly.polymul(cn, cd)
    return np.real(prod)


def asymptotic_axis_sign(rf: RationalFunction, coeff_tol: float = COEFF_TOL) -> int:
    """Sign of Re Y(i omega) as omega -> +inf, from leading coefficients."""
    E = _trim(_real_part_on_axis_poly(rf), coeff_tol)
    lead = E[-1]
    if E.size == 1 and lead == 0.0:
        return 0
    return 1 if lead > 0 else (-1 if lead < 0 else 0)


def _axis_exclusions(rf, on_axis_tol, cluster_tol):
    wins = []
    for loc, _ in poles(rf, cluster_tol=cluster_tol).poles:
        if abs(loc.real) <= on_axis_tol:
            radius = max(1e-8, 1e-6 * (1.0 + abs(loc.imag)))
            wins.append((abs(loc.imag), radius))
    return wins


def min_real_on_axis(rf: RationalFunction, omega_max: Optional[float] = None,
                     grid: int = 4096, on_axis_tol: float = 1e-7,
                     cluster_tol: float = CLUSTER_TOL):
    """Minimize Re Y(i omega) over the axis.

    Combines a symmetric log+linear grid (conjugate symmetry lets the scan
    cover omega >= 0 only), golden-section refinement around the grid
    minimizer, and the exact omega -> inf sign from leading coefficients so
    unbounded behavior is decided analytically.  Samples inside small windows
    around imaginary-axis poles are excluded, with extra samples placed just
    outside the windows.
    """
    num = np.asarray(rf.num, dtype=float)
    den = np.asarray(rf.den, dtype=float)
    if omega_max is None:
        coeffs = np.abs(np.concatenate([num, den]))
        nz = coeffs[coeffs > 0]
        ratio = float(nz.max() / nz.min()) if nz.size else 1.0
        omega_max = 1e4 * max(1.0, min(ratio, 1e6))

    exclusions = _axis_exclusions(rf, on_axis_tol, cluster_tol)

    def re_axis(w):
        w = np.asarray(w, dtype=float)
        s = 1j * w
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.real(npoly.polyval(s, num) / npoly.polyval(s, den))

    half = max(grid // 2, 16)
    lin = np.linspace(0.0, min(10.0, omega_max), half)
    log = np.geomspace(max(min(10.0, omega_max) * 1e-3, 1e-12), omega_max, half)
    ws = np.unique(np.concatenate([lin, log]))
    edge_pts = []
    for center, radius in exclusions:
        edge_pts.extend([center - 1.5 * radius, center + 1.5 * radius])
    if edge_pts:
        ws = np.unique(np.concatenate([ws, np.array(edge_pts)]))
        ws = ws[ws >= 0.0]
    keep = np.ones(ws.size, dtype=bool)
    for center, radius in exclusions:
        keep &= np.abs(ws - center) > radius
    ws = ws[keep]
    vals = re_axis(ws)
    finite = np.isfinite(vals)
    ws, vals = ws[finite], vals[finite]
    idx = int(np.argmin(vals))
    w_star, v_star = float(ws[idx]), float(vals[idx])

    # golden-section refinement in the bracketing neighbors
    lo = ws[idx - 1] if idx > 0 else max(0.0, w_star - 1.0)
    hi = ws[idx + 1] if idx + 1 < ws.size else w_star + 1.0
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a_, b_ = float(lo), float(hi)
    c_ = b_ - phi * (b_ - a_)
    d_ = a_ + phi * (b_ - a_)
    fc, fd = float(re_axis(c_)), float(re_axis(d_))
    for _ in range(80):
        if fc < fd:
            b_, d_, fd = d_, c_, fc
            c_ = b_ - phi * (b_ - a_)
            fc = float(re_axis(c_))
        else:
            a_, c_, fc = c_, d_, fd
            d_ = a_ + phi * (b_ - a_)
            fd = float(re_axis(d_))
    w_ref = c_ if fc < fd else d_
    v_ref = min(fc, fd)
    if np.isfinite(v_ref) and v_ref < v_star and \
            all(abs(w_ref - c) > r for c, r in exclusions):
        w_star, v_star = float(w_ref), float(v_ref)

    # analytic tail: if Re Y is eventually negative, chase it past the grid
    if asymptotic_axis_sign(rf) < 0 and v_star >= 0.0:
        w_tail = omega_max
        for _ in range(12):
            w_tail *= 10.0
            v_tail = float(re_axis(np.array([w_tail]))[0])
            if np.isfinite(v_tail) and v_tail < 0.0:
                w_star, v_star = w_tail, v_tail
                break
    return w_star, v_star


def edge_of_chaos_classify(rf: RationalFunction,
                           tols: Optional[ClassifierTolerances] = None) -> EdgeClassification:
    """Evaluate the four local-activity conditions and the edge-of-chaos flag."""
    tols = tols or ClassifierTolerances()
    ps = poles(rf, cluster_tol=tols.cluster_tol, on_axis_tol=tols.on_axis_tol)
    evidence = {}

    right = [(loc, m) for loc, m in ps.poles if loc.real > tols.on_axis_tol]
    cond_i = bool(right)
    if right:
        evidence["i"] = {"pole": right[0][0], "multiplicity": right[0][1]}

    axis = [(loc, m) for loc, m in ps.poles if abs(loc.real) <= tols.on_axis_tol]
    multi = [(loc, m) for loc, m in axis if m >= 2]
    cond_ii = bool(multi)
    if multi:
        evidence["ii"] = {"pole": multi[0][0], "multiplicity": multi[0][1]}

    cond_iii = False
    for loc, m in axis:
        if m != 1:
            continue
        res = residue_at_simple_pole(rf, loc, cluster_tol=tols.cluster_tol)
        bad = abs(res.imag) > tols.resid_tol or res.real < -tols.resid_tol
        if bad:
            cond_iii = True
            evidence["iii"] = {"pole": loc, "residue": res}
            break

    w_star, v_star = min_real_on_axis(rf, on_axis_tol=tols.on_axis_tol,
                                      cluster_tol=tols.cluster_tol)
    cond_iv = v_star < -tols.axis_val_tol
    evidence["iv"] = {"omega": w_star, "re_Y": v_star}

    locally_active = cond_i or cond_ii or cond_iii or cond_iv
    edge = cond_iv and not (cond_i or cond_ii or cond_iii)
    return EdgeClassification(
        cond_i=cond_i, cond_ii=cond_ii, cond_iii=cond_iii, cond_iv=cond_iv,
        locally_active=locally_active, edge_of_chaos=edge, evidence=evidence,
    )


# -- the FitzHugh-Nagumo instance ----------------------------------------------


def fhn_rational(x_d: float, beta: float, xi: float) -> RationalFunction:
    """Complexity function of the linearized FitzHugh-Nagumo port system at an
    equilibrium with first coordinate ``x_d``:

    ``Y(s) = (s^2 + (xi beta + x_d^2 - 1) s + xi beta (x_d^2 - 1) + xi) / (s + xi beta)``
    """
    d = x_d * x_d - 1.0
    num = [xi * beta * d + xi, xi * beta + d, 1.0]
    den = [xi * beta, 1.0]
    return make_rational(num, den)


def fhn_complexity_function(mu: float, beta: float, gamma: float, xi: float,
                            x_guess=None) -> RationalFunction:
    """FitzHugh-Nagumo complexity function at the equilibrium for the given
    parameters; the equilibrium is located by the nonlinear module."""
    from . import nonlinear
    from .errors import NoConvergence

    sys = nonlinear.fhn_system(mu, beta, gamma, xi)
    guesses = []
    if x_guess is not None:
        guesses.append(np.asarray(x_guess, dtype=float))
    else:
        guesses.extend(nonlinear.fhn_equilibrium_guesses(mu, beta, gamma, xi))
    for guess in guesses:
        try:
            report = nonlinear.find_equilibrium(sys, guess)
        except NoConvergence:
            continue
        return fhn_rational(float(report.x_star[0]), beta, xi)
    raise EquilibriumNotFound(
        f"no equilibrium found for mu={mu}, beta={beta}, gamma={gamma}, xi={xi}"
    )


def rational_to_json(rf: RationalFunction) -> dict:
    return {"num": list(rf.num), "den": list(rf.den)}


def classification_to_json(ec: EdgeClassification) -> dict:
    def _plain(value):
        if isinstance(value, complex):
            return {"re": value.real, "im": value.imag}
        return value

    evidence = {
        key: {k: _plain(v) for k, v in info.items()}
        for key, info in ec.evidence.items()
    }
    return {
        "cond_i": ec.cond_i, "cond_ii": ec.cond_ii, "cond_iii": ec.cond_iii,
        "cond_iv": ec.cond_iv, "locally_active": ec.locally_active,
        "edge_of_chaos": ec.edge_of_chaos, "evidence": evidence,
    }
