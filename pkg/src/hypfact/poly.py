"""Arbitrary-precision complex polynomials.

Coefficients are mpmath ``mpc`` values stored in ascending degree order
(``coeffs[i]`` multiplies ``z**i``) and are never mutated after
construction.  The working binary precision is mpmath's global precision;
throughout this package it is referred to as the context precision P.

The disk norm of a polynomial is estimated two-sided: a rigorous upper
bound from the coefficient sums and a sampled lower bound from equispaced
points on the boundary circle.  Root extraction uses simultaneous
Ehrlich-Aberth refinement seeded from a double-precision eigenvalue solve
of the scaled companion matrix.
"""
from __future__ import annotations

import cmath
import math
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath
import numpy as np
from mpmath import mp, mpc, mpf

NEG_INF = float("-inf")  # degree of the zero polynomial

# Trailing (highest-degree) coefficients below 2**-(P-16) relative to the
# largest coefficient are treated as rounding dust and trimmed.
TRIM_GUARD_BITS = 16

ROOT_SWEEP_BUDGET = 200


class PrecisionError(ArithmeticError):
    """A computation cannot meet its accuracy contract at the current precision."""


class NonFiniteError(ArithmeticError):
    """A NaN or infinity appeared where a finite value is required."""


def current_precision() -> int:
    return mp.prec


def set_precision(bits: int) -> None:
    if bits < 32:
        raise ValueError("precision below 32 bits is not supported")
    mp.prec = bits


@contextmanager
def precision(bits: int):
    """Temporarily run with context precision `bits`."""
    old = mp.prec
    mp.prec = bits
    try:
        yield
    finally:
        mp.prec = old


def to_mpc(value) -> mpc:
    """Convert a scalar to a finite mpc; reject NaN/inf."""
    z = mpc(value) if not isinstance(value, mpc) else value
    if not (mpmath.isfinite(z.real) and mpmath.isfinite(z.imag)):
        raise NonFiniteError(f"non-finite scalar {z!r}")
    return z


def _mag(c: mpc) -> mpf:
    return abs(c)


class Poly:
    """Immutable dense polynomial over mpc coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        vals = [to_mpc(c) for c in coeffs]
        self.coeffs = tuple(_trim(vals))

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls((0,) * k + (c,))

    @classmethod
    def variable(cls) -> "Poly":
        return cls((0, 1))

    # -- basic structure ----------------------------------------------

    @property
    def degree(self):
        """Degree, or -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> mpc:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return mpc(0)

    def max_coeff_mag(self) -> mpf:
        if not self.coeffs:
            return mpf(0)
        return max(_mag(c) for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        return f"Poly(deg={len(self.coeffs) - 1})"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = to_mpc(other)
            return Poly(tuple(c * v for v in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero()
        out = [mpc(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                if cb == 0:
                    continue
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    __rmul__ = __mul__

    def __call__(self, z) -> mpc:
        """Evaluate by Horner's rule at context precision."""
        z = to_mpc(z)
        acc = mpc(0)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return to_mpc(acc)

    # -- calculus -------------------------------------------------------

    def differentiate(self) -> "Poly":
        if len(self.coeffs) <= 1:
            return Poly.zero()
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def antiderivative(self) -> "Poly":
        """Antiderivative vanishing at 0; exact inverse of differentiate."""
        if self.is_zero():
            return Poly.zero()
        return Poly((0,) + tuple(c / (i + 1) for i, c in enumerate(self.coeffs)))

    def translate(self, w) -> "Poly":
        """p(z + w) via iterated synthetic multiplication (Taylor shift)."""
        w = to_mpc(w)
        if self.is_zero():
            return Poly.zero()
        out = [self.coeffs[-1]]
        for c in reversed(self.coeffs[:-1]):
            nxt = [mpc(0)] * (len(out) + 1)
            for j, v in enumerate(out):
                nxt[j + 1] = nxt[j + 1] + v
                nxt[j] = nxt[j] + w * v
            nxt[0] = nxt[0] + c
            out = nxt
        return Poly(out)

    def recenter_zero(self) -> "Poly":
        """Copy with the constant coefficient set to exactly zero."""
        if self.is_zero():
            return self
        return Poly((mpc(0),) + self.coeffs[1:])


def _coerce(v) -> Poly:
    return v if isinstance(v, Poly) else Poly.const(v)


def _trim(vals: list) -> list:
    """Drop trailing coefficients that are zero at working precision."""
    if not vals:
        return vals
    maxmag = max(_mag(c) for c in vals)
    if maxmag == 0:
        return []
    thresh = maxmag * mpf(2) ** (-(mp.prec - TRIM_GUARD_BITS))
    end = len(vals)
    while end > 0 and _mag(vals[end - 1]) <= thresh:
        end -= 1
    return vals[:end]


# -- disk norms ---------------------------------------------------------


@dataclass(frozen=True)
class DiskNormEstimate:
    """Two-sided estimate of max |p(z)| over |z| <= radius.

    `upper` (sum of |c_i| R^i, computed at context precision) is the
    rigorous side; `lower` comes from sampling the boundary circle and is
    evaluated in scaled double precision, so it is a diagnostic estimate.
    """

    radius: mpf
    lower: mpf
    upper: mpf
    samples: int


def default_samples(deg) -> int:
    d = int(deg) if deg != NEG_INF and deg > 0 else 0
    return max(4 * d + 64, 256)


def disk_norm(p: Poly, R, samples: int | None = None) -> DiskNormEstimate:
    """Estimate the sup norm of p on the closed disk of radius R."""
    R = mpf(R)
    if R < 0:
        raise ValueError("radius must be nonnegative")
    if samples is None:
        samples = default_samples(p.degree)
    if samples < 1:
        raise ValueError("need at least one sample point")
    if p.is_zero():
        return DiskNormEstimate(radius=R, lower=mpf(0), upper=mpf(0), samples=samples)

    scaled = [_mag(c) * R**i for i, c in enumerate(p.coeffs)]
    upper = mpf(0)
    for s in scaled:
        upper += s
    if R == 0:
        lower = _mag(p.coeff(0))
        return DiskNormEstimate(radius=R, lower=min(lower, upper), upper=upper, samples=samples)

    # Sampled lower bound: evaluate the radius-normalized polynomial on the
    # unit circle in double precision.  Normalizing each coefficient by the
    # largest term keeps everything inside double range regardless of the
    # coefficient dynamics.
    s_norm = max(scaled)
    if s_norm == 0:
        return DiskNormEstimate(radius=R, lower=mpf(0), upper=upper, samples=samples)
    coeffs_f = np.empty(len(p.coeffs), dtype=np.complex128)
    for i, c in enumerate(p.coeffs):
        m = scaled[i] / s_norm
        if m == 0:
            coeffs_f[i] = 0.0
            continue
        phase = c / _mag(c)
        coeffs_f[i] = complex(float(phase.real), float(phase.imag)) * float(m)
    theta = 2.0 * np.pi * np.arange(samples) / samples
    pts = np.exp(1j * theta)
    vals = np.polyval(coeffs_f[::-1], pts)
    lower = s_norm * mpf(float(np.max(np.abs(vals))))
    return DiskNormEstimate(radius=R, lower=min(lower, upper), upper=upper, samples=samples)


# -- Euclidean division --------------------------------------------------


def divide(g: Poly, f: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder with g = f*q + r and deg r < deg f."""
    if f.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    dg, df = len(g.coeffs) - 1, len(f.coeffs) - 1
    if g.is_zero() or dg < df:
        return Poly.zero(), g
    rem = list(g.coeffs)
    fl = f.coeffs[-1]
    q = [mpc(0)] * (dg - df + 1)
    for i in range(dg - df, -1, -1):
        c = rem[i + df] / fl
        q[i] = c
        if c != 0:
            for j in range(df):
                rem[i + j] = rem[i + j] - c * f.coeffs[j]
        rem[i + df] = mpc(0)
    return Poly(q), Poly(rem[:df])


# -- root finding --------------------------------------------------------


def product_of_factors(roots: Sequence, lead=1) -> Poly:
    """Expand lead * prod (z - root_i)."""
    acc = [to_mpc(lead)]
    for r in roots:
        r = to_mpc(r)
        nxt = [mpc(0)] * (len(acc) + 1)
        for j, v in enumerate(acc):
            nxt[j + 1] = nxt[j + 1] + v
            nxt[j] = nxt[j] - r * v
        acc = nxt
    return Poly(acc)


def product_one_minus(zeros: Sequence) -> Poly:
    """Expand prod (1 - z/a_i); all a_i must be nonzero."""
    acc = [mpc(1)]
    for a in zeros:
        a = to_mpc(a)
        if a == 0:
            raise ZeroDivisionError("factor zero at the origin")
        w = -1 / a
        nxt = [mpc(0)] * (len(acc) + 1)
        for j, v in enumerate(acc):
            nxt[j] = nxt[j] + v
            nxt[j + 1] = nxt[j + 1] + w * v
        acc = nxt
    return Poly(acc)


def _initial_root_guesses(coeffs: Sequence[mpc]) -> list[mpc]:
    """Double-precision companion-matrix estimates of the roots.

    Coefficients are rescaled z -> rho*w (rho from the Cauchy bound of the
    monic form, computed in log2 space) so their dynamic range fits double
    precision even when raw magnitudes span thousands of bits.
    """
    d = len(coeffs) - 1
    logs = [mpmath.log(_mag(c), 2) if c != 0 else None for c in coeffs]
    top = logs[d]
    slopes = [
        float((logs[i] - top) / (d - i)) for i in range(d) if logs[i] is not None
    ]
    log_rho = max(slopes) if slopes else 0.0
    log_rho = min(max(log_rho, -16000.0), 16000.0)
    shift = max(
        float(logs[i]) + i * log_rho for i in range(d + 1) if logs[i] is not None
    )
    arr = np.zeros(d + 1, dtype=np.complex128)
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        e = float(logs[i]) + i * log_rho - shift
        if e < -800.0:
            continue
        phase = c / _mag(c)
        arr[i] = complex(float(phase.real), float(phase.imag)) * (2.0**e)
    try:
        ws = np.roots(arr[::-1])
    except Exception:
        ws = np.array([])
    rho = mpf(2) ** log_rho
    guesses = []
    for w in ws:
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            continue
        guesses.append(rho * mpc(w.real, w.imag))
    if len(guesses) != d:
        # fall back to scaled roots of unity on the Cauchy circle
        guesses = [
            rho * mpc(mpmath.cos(2 * mpmath.pi * (j + 0.25) / d),
                      mpmath.sin(2 * mpmath.pi * (j + 0.25) / d))
            for j in range(d)
        ]
    return guesses


def _eval_with_derivative(coeffs: Sequence[mpc], z: mpc) -> tuple[mpc, mpc]:
    p = mpc(0)
    dp = mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def roots(p: Poly, sweep_budget: int = ROOT_SWEEP_BUDGET) -> list[tuple[mpc, mpf]]:
    """All roots of p with per-root relative residuals.

    Returns deg(p) pairs (root, |p(root)| / sum_i |c_i| |root|^i).  Raises
    PrecisionError if the simultaneous refinement does not converge or the
    factored form fails to reconstruct p to 2**-(P/2) relative.
    """
    if p.is_zero() or len(p.coeffs) <= 1:
        raise ValueError("root finding needs a nonconstant polynomial")
    base_prec = mp.prec
    zero_count = 0
    coeffs = list(p.coeffs)
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
        zero_count += 1
    out: list[tuple[mpc, mpf]] = [(mpc(0), mpf(0))] * zero_count
    d = len(coeffs) - 1
    if d == 0:
        _check_reconstruction(p, [r for r, _ in out])
        return out
    if d == 1:
        r = -coeffs[0] / coeffs[1]
        out.append((r, _root_residual(coeffs, r)))
        _check_reconstruction(p, [r for r, _ in out])
        return out

    with mpmath.extraprec(64):
        zs = _initial_root_guesses(coeffs)
        tol = mpf(2) ** (-(base_prec + 16))
        converged = False
        for _ in range(sweep_budget):
            max_step = mpf(0)
            pvals = []
            for i, z in enumerate(zs):
                pv, dv = _eval_with_derivative(coeffs, z)
                pvals.append((pv, dv))
            new_zs = list(zs)
            for i, z in enumerate(zs):
                pv, dv = pvals[i]
                if pv == 0:
                    continue
                if dv == 0:
                    new_zs[i] = z * (1 + mpf(2) ** (-base_prec // 2)) + mpf(2) ** (-base_prec // 2)
                    max_step = max(max_step, mpf(1))
                    continue
                newton = pv / dv
                s = mpc(0)
                for j, zj in enumerate(zs):
                    if j != i:
                        dz = z - zj
                        if dz == 0:
                            dz = mpf(2) ** (-base_prec) * (1 + abs(z))
                        s += 1 / dz
                denom = 1 - newton * s
                step = newton if denom == 0 else newton / denom
                new_zs[i] = z - step
                max_step = max(max_step, abs(step) / (1 + abs(z)))
            zs = new_zs
            if max_step <= tol:
                converged = True
                break
        if not converged:
            raise PrecisionError(
                "root refinement did not converge within the sweep budget; "
                "raise the working precision"
            )

    result = out + [(to_mpc(z), _root_residual(coeffs, z)) for z in zs]
    _check_reconstruction(p, [r for r, _ in result])
    return result


def _root_residual(coeffs: Sequence[mpc], z: mpc) -> mpf:
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    az = abs(z)
    scale = mpf(0)
    pw = mpf(1)
    for c in coeffs:
        scale += _mag(c) * pw
        pw *= az
    if scale == 0:
        return mpf(0)
    return abs(acc) / scale


def _check_reconstruction(p: Poly, rts: Sequence[mpc]) -> None:
    lead = p.coeffs[-1]
    rebuilt = product_of_factors(rts, lead)
    scale = p.max_coeff_mag()
    tol = scale * mpf(2) ** (-(mp.prec // 2))
    n = max(len(p.coeffs), len(rebuilt.coeffs))
    for i in range(n):
        if _mag(rebuilt.coeff(i) - p.coeff(i)) > tol:
            raise PrecisionError(
                "factored form fails to reconstruct the polynomial; "
                "raise the working precision"
            )
