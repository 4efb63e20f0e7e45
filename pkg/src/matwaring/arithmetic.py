"""Scalar tower: exact Gaussian rationals, mpmath complex approximations and
the tolerance policy shared by the rest of the package.

Exact inputs live in Q(i) as :class:`GaussianRational`.  Anything that needs
a k-th root of an eigenvalue is carried out on ``mpc`` numbers produced by the
``MPContext`` owned by a :class:`ToleranceProfile`; every profile has its own
context, so no global mpmath precision is ever touched.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple, Optional, Sequence

import gmpy2
from gmpy2 import mpq
from mpmath.ctx_mp import MPContext

from . import _poly
from .exceptions import IllConditioned, NonConvergence, ParseError

__all__ = [
    "GaussianRational",
    "ToleranceProfile",
    "DEFAULT_PROFILE",
    "RootCluster",
    "is_exact",
    "is_approx",
    "as_scalar",
    "to_approx",
    "kth_root_scalar",
    "poly_roots",
    "root_clusters",
]

_MPQ = type(mpq(0))


def _rat(x):
    if isinstance(x, _MPQ):
        return x
    if isinstance(x, (int, Rational)):
        return mpq(x)
    if isinstance(x, str):
        return mpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


class GaussianRational:
    """Exact element ``re + im*i`` of Q(i).

    Instances are treated as immutable.  Both parts are ``gmpy2.mpq`` values,
    which are always stored in lowest terms.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _rat(re)
        self.im = _rat(im)

    @classmethod
    def _raw(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # -- text format ---------------------------------------------------------
    _NUM = r"\d+(?:/\d+)?"
    _GRAMMAR = re.compile(
        rf"^(?:(?P<re>[+-]?{_NUM})(?P<im1>[+-](?:{_NUM})?i)?|(?P<im2>[+-]?(?:{_NUM})?i))$"
    )

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse ``a/b+c/di`` style text; omitted parts default to zero."""
        if not isinstance(text, str):
            raise ParseError(f"expected a string, got {type(text).__name__}")
        s = text.strip()
        m = cls._GRAMMAR.match(s)
        if m is None:
            raise ParseError(f"invalid Gaussian rational {text!r}")
        try:
            re_part = mpq(m.group("re").lstrip("+")) if m.group("re") else mpq(0)
            im_text = m.group("im1") or m.group("im2")
            im_part = mpq(0)
            if im_text:
                coeff = im_text[:-1]
                if coeff in ("", "+"):
                    im_part = mpq(1)
                elif coeff == "-":
                    im_part = mpq(-1)
                else:
                    im_part = mpq(coeff.lstrip("+"))
        except ZeroDivisionError:
            raise ParseError(f"zero denominator in {text!r}") from None
        return cls._raw(re_part, im_part)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __repr__(self):
        return f"GaussianRational('{self}')"

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, _MPQ, Rational)):
            return GaussianRational._raw(mpq(other), mpq(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if b == 0 and d == 0:
            return GaussianRational._raw(a * c, b)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c, d = o.re, o.im
        if d == 0:
            if c == 0:
                raise ZeroDivisionError("division by zero Gaussian rational")
            return GaussianRational._raw(self.re / c, self.im / c)
        den = c * c + d * d
        a, b = self.re, self.im
        return GaussianRational._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return (GaussianRational._raw(mpq(1), mpq(0)) / self) ** (-e)
        result = GaussianRational._raw(mpq(1), mpq(0))
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conjugate(self):
        return GaussianRational._raw(self.re, -self.im)

    def norm2(self):
        """Exact squared modulus ``re**2 + im**2``."""
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return math.sqrt(self.norm2())

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def is_real(self):
        return self.im == 0

    def to_fractions(self):
        return Fraction(int(self.re.numerator), int(self.re.denominator)), Fraction(
            int(self.im.numerator), int(self.im.denominator)
        )


ZERO = GaussianRational._raw(mpq(0), mpq(0))
ONE = GaussianRational._raw(mpq(1), mpq(0))


@functools.lru_cache(maxsize=None)
def _context(prec):
    ctx = MPContext()
    ctx.prec = prec
    return ctx


@dataclass(frozen=True)
class ToleranceProfile:
    """Precision and thresholds used by every numerical decision.

    Unset thresholds derive from ``precision_bits``: ``eps_rank`` and
    ``eps_cluster`` default to ``2**(-p/4)`` and ``eps_residual`` to
    ``2**(-p/2)``.
    """

    precision_bits: int = 256
    eps_rank: Optional[object] = None
    eps_cluster: Optional[object] = None
    eps_residual: Optional[object] = None
    seed: int = 0
    guard_bits: int = field(default=64, repr=False)

    def __post_init__(self):
        p = self.precision_bits
        if not isinstance(p, int) or p < 16:
            raise ValueError(f"precision_bits must be an integer >= 16, got {p!r}")
        ctx = _context(p)
        defaults = {
            "eps_rank": ctx.power(2, -ctx.mpf(p) / 4),
            "eps_cluster": ctx.power(2, -ctx.mpf(p) / 4),
            "eps_residual": ctx.power(2, -ctx.mpf(p) / 2),
        }
        for name, default in defaults.items():
            value = getattr(self, name)
            value = default if value is None else ctx.mpf(value)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
            object.__setattr__(self, name, value)

    @property
    def ctx(self) -> MPContext:
        return _context(self.precision_bits)

    @property
    def work_ctx(self) -> MPContext:
        """Context with guard bits, for intermediate root computations."""
        return _context(self.precision_bits + self.guard_bits)

    def with_precision(self, bits: int) -> "ToleranceProfile":
        return ToleranceProfile(precision_bits=bits, seed=self.seed)


DEFAULT_PROFILE = ToleranceProfile()


def is_approx(x) -> bool:
    return hasattr(x, "_mpc_") or hasattr(x, "_mpf_")


def is_exact(x) -> bool:
    return isinstance(x, (GaussianRational, int, _MPQ, Rational))


def as_scalar(x):
    """Coerce user input to a GaussianRational when exact, else leave it approximate.

    Strings go through the Gaussian-rational grammar; Python floats and
    complex numbers are converted exactly (binary fractions).
    """
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, (int, _MPQ, Rational)):
        return GaussianRational._raw(mpq(x), mpq(0))
    if isinstance(x, str):
        return GaussianRational.parse(x)
    if isinstance(x, float):
        return GaussianRational._raw(mpq(x), mpq(0))
    if isinstance(x, complex):
        return GaussianRational._raw(mpq(x.real), mpq(x.imag))
    if is_approx(x):
        return x
    if hasattr(x, "item"):  # numpy scalar
        return as_scalar(x.item())
    raise TypeError(f"unsupported scalar type {type(x).__name__}")


def _mpf_from_rat(ctx, q):
    return ctx.mpf(int(q.numerator)) / int(q.denominator)


def to_approx(x, profile: ToleranceProfile = DEFAULT_PROFILE, ctx=None):
    """Round a scalar to an ``mpc`` of the profile's precision."""
    ctx = ctx or profile.ctx
    if isinstance(x, GaussianRational):
        return ctx.mpc(_mpf_from_rat(ctx, x.re), _mpf_from_rat(ctx, x.im))
    if isinstance(x, (int, _MPQ, Rational)):
        q = mpq(x)
        return ctx.mpc(_mpf_from_rat(ctx, q))
    return ctx.mpc(x)


def kth_root_scalar(z, k: int, profile: ToleranceProfile = DEFAULT_PROFILE):
    """Principal k-th root, argument in ``(-pi/k, pi/k]``."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    ctx = profile.ctx
    z = to_approx(z, profile)
    if z == 0:
        return ctx.mpc(0)
    if k == 1:
        return z
    if z.imag == 0 and z.real > 0:
        return ctx.mpc(ctx.root(z.real, k))
    return ctx.mpc(ctx.root(z, k))


class RootCluster(NamedTuple):
    """One distinct root with its multiplicity; ``exact`` is set when the root
    was identified as a Gaussian rational and verified by exact evaluation."""

    value: object
    multiplicity: int
    exact: Optional[GaussianRational]


def _mpf_to_fraction(x):
    sign, man, exp, _ = x._mpf_
    if not man:
        return Fraction(0)
    frac = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -frac if sign else frac


def _identify(value, poly, ctx):
    """Try to recognise ``value`` as an exact Gaussian-rational root of ``poly``."""
    dens = 1
    for c in poly:
        dens = math.lcm(dens, int(c.re.denominator), int(c.im.denominator))
    bound = max(dens * dens, 1)
    parts = []
    for comp in (value.real, value.imag):
        parts.append(_mpf_to_fraction(ctx.mpf(comp)).limit_denominator(bound))
    q = GaussianRational(*parts)
    # the rounded value may be a different exact root, so require closeness too
    close = ctx.fabs(value - to_approx(q, ctx=ctx)) <= ctx.power(2, -ctx.prec // 4) * (1 + ctx.fabs(value))
    if close and _poly.evaluate(poly, q) == 0:
        return q
    return None


def _numeric_simple_roots(poly, profile):
    """Roots of a square-free exact polynomial, computed with guard bits."""
    wctx = profile.work_ctx
    d = _poly.degree(poly)
    if d == 1:
        root = -poly[0] / poly[1]
        return [(to_approx(root, profile), root)]
    coeffs = [to_approx(c, ctx=wctx) for c in reversed(poly)]
    try:
        roots, err = wctx.polyroots(
            coeffs, maxsteps=400, extraprec=2 * wctx.prec, error=True
        )
    except wctx.NoConvergence as exc:
        raise NonConvergence(f"polyroots failed on degree {d}: {exc}") from None
    approx_poly = [to_approx(c, ctx=wctx) for c in poly]
    out = []
    for r in roots:
        r = wctx.mpc(r)
        # Newton polish on the exact polynomial
        for _ in range(3):
            val, der = _poly.evaluate_with_derivative(approx_poly, r)
            if der == 0:
                break
            r = r - val / der
        exact = _identify(r, poly, wctx)
        out.append((to_approx(exact if exact is not None else r, profile), exact))
    return out


def _check_separation(clusters, profile):
    ctx = profile.ctx
    limit = 4 * profile.eps_cluster
    for i in range(len(clusters)):
        for j in range(i + 1, len(clusters)):
            if ctx.fabs(clusters[i].value - clusters[j].value) < limit:
                raise IllConditioned(
                    "distinct eigenvalue clusters closer than 4*eps_cluster"
                )


def _exact_clusters(poly, profile):
    poly = _poly.monic(poly)
    clusters = []
    zero_mult = 0
    while _poly.degree(poly) > 0 and poly[0] == 0:
        poly = poly[1:]
        zero_mult += 1
    if zero_mult:
        clusters.append(RootCluster(profile.ctx.mpc(0), zero_mult, ZERO))
    if _poly.degree(poly) > 0:
        for mult, factor in _poly.squarefree(poly):
            for value, exact in _numeric_simple_roots(factor, profile):
                clusters.append(RootCluster(value, mult, exact))
    return clusters


def _approx_clusters(coeffs, profile):
    ctx = profile.ctx
    wctx = profile.work_ctx
    d = len(coeffs) - 1
    high_to_low = [wctx.mpc(c) for c in reversed(coeffs)]
    try:
        roots = wctx.polyroots(high_to_low, maxsteps=800, extraprec=3 * wctx.prec)
    except wctx.NoConvergence as exc:
        raise NonConvergence(f"polyroots failed on degree {d}: {exc}") from None
    roots = [ctx.mpc(r) for r in roots]
    # single-linkage clustering at radius eps_cluster
    groups = [[r] for r in roots]
    merged = True
    while merged:
        merged = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(
                    ctx.fabs(a - b) <= profile.eps_cluster
                    for a in groups[i]
                    for b in groups[j]
                ):
                    groups[i].extend(groups.pop(j))
                    merged = True
                    break
            if merged:
                break
    clusters = [RootCluster(ctx.fsum(g) / len(g), len(g), None) for g in groups]
    scale = (1 + max(ctx.fabs(c) for c in coeffs)) ** d
    for cl in clusters:
        val = ctx.polyval(high_to_low, cl.value)
        if ctx.fabs(val) > profile.eps_rank * scale:
            raise NonConvergence("root residual exceeds eps_rank bound")
    return clusters


def root_clusters(coeffs: Sequence, profile: ToleranceProfile = DEFAULT_PROFILE):
    """Distinct roots of a monic polynomial with their multiplicities.

    ``coeffs[i]`` is the coefficient of ``z**i``; the last entry must be 1.
    Exact coefficients go through a square-free factorisation so that the
    iterative solver only ever sees simple roots.
    """
    coeffs = [as_scalar(c) for c in coeffs]
    if len(coeffs) < 2:
        raise ValueError("polynomial must have degree >= 1")
    if all(isinstance(c, GaussianRational) for c in coeffs):
        if coeffs[-1] != 1:
            raise ValueError("polynomial must be monic")
        clusters = _exact_clusters(coeffs, profile)
    else:
        approx = [to_approx(c, profile) for c in coeffs]
        if approx[-1] != 1:
            raise ValueError("polynomial must be monic")
        clusters = _approx_clusters(approx, profile)
    _check_separation(clusters, profile)
    return clusters


def poly_roots(coeffs: Sequence, profile: ToleranceProfile = DEFAULT_PROFILE):
    """All roots of a monic polynomial, repeated according to multiplicity."""
    out = []
    for cl in root_clusters(coeffs, profile):
        out.extend([cl.value] * cl.multiplicity)
    return out
