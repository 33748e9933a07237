"""Input-signal families: Friedrichs mollifier signals, discontinuous
two-pulse signals, their mollified continuous approximations, and sampled
signals with linear interpolation.

All signals live on a finite horizon [0, T]; evaluation outside the horizon
raises ``SignalDomainError`` rather than zero-extending.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SignalDomainError, SmoothingTooWide

_DOMAIN_SLACK = 1e-9


def mollifier(t):
    """The Friedrichs bump ``exp(1/(t^2 - 1))`` on (-1, 1), exactly 0 outside."""
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    inv = 1.0 / (t[inside] ** 2 - 1.0)
    out[inside] = np.exp(inv)
    return float(out[0]) if scalar else out


def mollifier_derivative(t):
    """Derivative of the bump: ``-2t/(t^2-1)^2 * mollifier(t)``, 0 outside (-1, 1)."""
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    # evaluate as -2t * inv^2 * exp(inv); exp underflows to 0 before inv^2
    # can overflow, so the product stays finite
    inv = 1.0 / (t[inside] ** 2 - 1.0)
    out[inside] = -2.0 * t[inside] * inv * inv * np.exp(inv)
    return float(out[0]) if scalar else out


@lru_cache(maxsize=1)
def mollifier_mass() -> float:
    """Integral of the bump over its support, via composite Gauss-Legendre."""
    nodes, weights = np.polynomial.legendre.leggauss(48)
    total = 0.0
    panels = np.linspace(-1.0, 1.0, 9)
    for lo, hi in zip(panels[:-1], panels[1:]):
        s = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        total += 0.5 * (hi - lo) * float(np.dot(weights, mollifier(s)))
    return total


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(32)
_N_PANELS = 12


def mollifier_cdf(y):
    """Normalized antiderivative ``int_{-1}^{y} rho / int rho``, clamped to [0, 1].

    Composite Gauss-Legendre on the support; there is no closed-form
    antiderivative.
    """
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y).astype(float)
    yc = np.clip(y, -1.0, 1.0)
    acc = np.zeros_like(yc)
    span = yc + 1.0
    offsets = np.linspace(0.0, 1.0, _N_PANELS + 1)
    for p in range(_N_PANELS):
        lo = -1.0 + span * offsets[p]
        hi = -1.0 + span * offsets[p + 1]
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        s = half[:, None] * _GL_NODES[None, :] + mid[:, None]
        acc += half * (mollifier(s.ravel()).reshape(s.shape) @ _GL_WEIGHTS)
    out = acc / mollifier_mass()
    out[y <= -1.0] = 0.0
    out[y >= 1.0] = 1.0
    return float(out[0]) if scalar else out


def _unit(v, name):
    v = np.asarray(v, dtype=float).ravel()
    nv = np.linalg.norm(v)
    if not np.all(np.isfinite(v)) or nv == 0.0:
        raise ValueError(f"{name} must be a finite nonzero vector")
    return v / nv


def _finite_vec(v, name):
    v = np.asarray(v, dtype=float).ravel()
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} must be finite")
    return v


def _frozen(a):
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TwoPulse:
    """Scalar two-pulse profile ``a X_[0,1/k] + b X_[T-1/k,T]`` along a unit
    direction; left-continuous at the interior jumps."""

    a: float
    b: float
    k: float
    T: float
    direction: np.ndarray

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError("T must be positive")
        if self.k < 2.0 / self.T * (1.0 - 1e-12):
            raise ValueError(f"k must be at least 2/T = {2.0 / self.T}; pulses overlap")
        object.__setattr__(self, "direction", _frozen(_unit(self.direction, "direction")))


@dataclass(frozen=True)
class MollifierReal:
    """``u(t) = rho'(2t/T - 1) e^(lam t) v`` driving a real eigendirection."""

    lam: float
    v: np.ndarray
    T: float

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError("T must be positive")
        object.__setattr__(self, "v", _frozen(_finite_vec(self.v, "v")))


@dataclass(frozen=True)
class MollifierComplex:
    """``u(t) = h'(t) e^(alpha t) (sin(beta t) v1 + cos(beta t) v2)`` with the
    window ``h(t) = rho((t - t0)/eps)``."""

    alpha: float
    beta: float
    v1: np.ndarray
    v2: np.ndarray
    t0: float
    eps: float
    T: float

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError("T must be positive")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.t0 - self.eps < -1e-12 or self.t0 + self.eps > self.T * (1 + 1e-12):
            raise ValueError("window [t0-eps, t0+eps] must lie inside [0, T]")
        v1 = _finite_vec(self.v1, "v1")
        v2 = _finite_vec(self.v2, "v2")
        if v1.shape != v2.shape:
            raise ValueError("v1 and v2 must have the same dimension")
        object.__setattr__(self, "v1", _frozen(v1))
        object.__setattr__(self, "v2", _frozen(v2))


@dataclass(frozen=True)
class MollifiedTwoPulse:
    """Continuous approximation of a two-pulse: convolution with the
    normalized mollifier of width ``eps_s``."""

    base: TwoPulse
    eps_s: float

    def __post_init__(self):
        k, T = self.base.k, self.base.T
        if not (0.0 < self.eps_s < 0.5 / k) or self.eps_s >= 0.5 * (T - 2.0 / k):
            if T - 2.0 / k <= 0 and abs(self.eps_s) > 0:
                raise SmoothingTooWide("pulses are adjacent; no room to mollify")
            raise SmoothingTooWide(
                f"eps_s = {self.eps_s} must satisfy 0 < eps_s < 1/(2k) and "
                f"eps_s < (T - 2/k)/2"
            )

    @property
    def T(self):
        return self.base.T


@dataclass(frozen=True)
class Sampled:
    """Knot-value pairs with linear interpolation between knots."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[0] != times.size:
            raise ValueError("values must have shape (len(times), n)")
        if times.size < 2 or np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing with >= 2 knots")
        if abs(times[0]) > 1e-12:
            raise ValueError("sampled signals must start at t = 0")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ValueError("non-finite sample data")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "values", _frozen(values))

    @property
    def T(self):
        return float(self.times[-1])


Signal = (TwoPulse, MollifierReal, MollifierComplex, MollifiedTwoPulse, Sampled)


def is_signal(u) -> bool:
    return isinstance(u, Signal)


def horizon(sig) -> float:
    return float(sig.T)


def dimension(sig) -> int:
    if isinstance(sig, TwoPulse):
        return sig.direction.size
    if isinstance(sig, MollifierReal):
        return sig.v.size
    if isinstance(sig, MollifierComplex):
        return sig.v1.size
    if isinstance(sig, MollifiedTwoPulse):
        return sig.base.direction.size
    if isinstance(sig, Sampled):
        return sig.values.shape[1]
    raise TypeError(f"not a signal: {type(sig)!r}")


def breakpoints(sig):
    """Interior times where the signal is not smooth, or where its support
    starts and ends (integration grid knots)."""
    if isinstance(sig, TwoPulse):
        return (1.0 / sig.k, sig.T - 1.0 / sig.k)
    if isinstance(sig, MollifierComplex):
        return (sig.t0 - sig.eps, sig.t0 + sig.eps)
    if isinstance(sig, MollifiedTwoPulse):
        b = sig.base
        e = sig.eps_s
        return tuple(
            t for t in (e, 1.0 / b.k - e, 1.0 / b.k + e,
                        b.T - 1.0 / b.k - e, b.T - 1.0 / b.k + e, b.T - e)
        )
    if isinstance(sig, Sampled) and sig.times.size <= 257:
        return tuple(sig.times[1:-1])
    return ()


def is_piecewise_constant(sig) -> bool:
    return isinstance(sig, TwoPulse)


def _check_domain(sig, t):
    T = horizon(sig)
    slack = _DOMAIN_SLACK * max(1.0, T)
    t = np.asarray(t, dtype=float)
    if np.any(t < -slack) or np.any(t > T + slack):
        raise SignalDomainError(
            f"evaluation time outside [0, {T}] (got range "
            f"[{float(np.min(t))}, {float(np.max(t))}])"
        )
    return np.clip(t, 0.0, T)


def _two_pulse_profile(sig: TwoPulse, t):
    first = t <= 1.0 / sig.k
    second = t > sig.T - 1.0 / sig.k
    return sig.a * first + sig.b * second


def _mollified_profile(sig: MollifiedTwoPulse, t):
    b, e = sig.base, sig.eps_s
    def window(lo, hi):
        return mollifier_cdf((t - lo) / e) - mollifier_cdf((t - hi) / e)
    return b.a * window(0.0, 1.0 / b.k) + b.b * window(b.T - 1.0 / b.k, b.T)


def eval_signal(sig, t):
    """Evaluate a signal at scalar or array times; returns shape (n,) or (m, n)."""
    scalar = np.asarray(t).ndim == 0
    t = np.atleast_1d(_check_domain(sig, t))
    if isinstance(sig, TwoPulse):
        out = np.outer(_two_pulse_profile(sig, t), sig.direction)
    elif isinstance(sig, MollifierReal):
        out = np.outer(mollifier_derivative(2.0 * t / sig.T - 1.0) * np.exp(sig.lam * t), sig.v)
    elif isinstance(sig, MollifierComplex):
        hprime = mollifier_derivative((t - sig.t0) / sig.eps) / sig.eps
        amp = hprime * np.exp(sig.alpha * t)
        out = (amp * np.sin(sig.beta * t))[:, None] * sig.v1 + \
              (amp * np.cos(sig.beta * t))[:, None] * sig.v2
    elif isinstance(sig, MollifiedTwoPulse):
        out = np.outer(_mollified_profile(sig, t), sig.base.direction)
    elif isinstance(sig, Sampled):
        out = np.stack(
            [np.interp(t, sig.times, sig.values[:, j]) for j in range(sig.values.shape[1])],
            axis=1,
        )
    else:
        raise TypeError(f"not a signal: {type(sig)!r}")
    return out[0] if scalar else out


def mollify_two_pulse(base: TwoPulse, eps_s: float) -> MollifiedTwoPulse:
    """Continuous mollification of a two-pulse signal.

    Requires ``0 < eps_s < 1/(2k)`` and ``eps_s < (T - 2/k)/2`` so the
    smoothed pulses neither merge nor spill out of the plateau structure;
    violations raise ``SmoothingTooWide``.
    """
    return MollifiedTwoPulse(base=base, eps_s=float(eps_s))


def l2_distance(sig_a, sig_b, T: float, samples: int = 20001) -> float:
    """L2([0,T]) distance between two signals by composite-trapezoid quadrature."""
    t = np.linspace(0.0, T, samples)
    diff = eval_signal(sig_a, t) - eval_signal(sig_b, t)
    return float(np.sqrt(np.trapezoid(np.sum(diff * diff, axis=1), t)))


# -- serialization -------------------------------------------------------------


def signal_to_json(sig) -> dict:
    """Tagged-union dict representation, ``{"variant": ..., parameters...}``."""
    if isinstance(sig, TwoPulse):
        return {"variant": "TwoPulse", "a": sig.a, "b": sig.b, "k": sig.k,
                "T": sig.T, "direction": sig.direction.tolist()}
    if isinstance(sig, MollifierReal):
        return {"variant": "MollifierReal", "lam": sig.lam, "v": sig.v.tolist(),
                "T": sig.T}
    if isinstance(sig, MollifierComplex):
        return {"variant": "MollifierComplex", "alpha": sig.alpha, "beta": sig.beta,
                "v1": sig.v1.tolist(), "v2": sig.v2.tolist(), "t0": sig.t0,
                "eps": sig.eps, "T": sig.T}
    if isinstance(sig, MollifiedTwoPulse):
        return {"variant": "MollifiedTwoPulse", "base": signal_to_json(sig.base),
                "eps_s": sig.eps_s}
    if isinstance(sig, Sampled):
        return {"variant": "Sampled", "times": sig.times.tolist(),
                "values": sig.values.tolist()}
    raise TypeError(f"not a signal: {type(sig)!r}")


def signal_from_json(obj: dict):
    variant = obj.get("variant")
    if variant == "TwoPulse":
        return TwoPulse(a=obj["a"], b=obj["b"], k=obj["k"], T=obj["T"],
                        direction=np.asarray(obj["direction"], dtype=float))
    if variant == "MollifierReal":
        return MollifierReal(lam=obj["lam"], v=np.asarray(obj["v"], dtype=float),
                             T=obj["T"])
    if variant == "MollifierComplex":
        return MollifierComplex(alpha=obj["alpha"], beta=obj["beta"],
                                v1=np.asarray(obj["v1"], dtype=float),
                                v2=np.asarray(obj["v2"], dtype=float),
                                t0=obj["t0"], eps=obj["eps"], T=obj["T"])
    if variant == "MollifiedTwoPulse":
        return MollifiedTwoPulse(base=signal_from_json(obj["base"]),
                                 eps_s=obj["eps_s"])
    if variant == "Sampled":
        return Sampled(times=np.asarray(obj["times"], dtype=float),
                       values=np.asarray(obj["values"], dtype=float))
    raise ValueError(f"unknown signal variant: {variant!r}")
