"""Closed-form meromorphic continuation of tube and distance zeta functions.

Every tube function in :mod:`fraczeta.tubefn` integrates term by term against
``t**(s-Q-1)`` into one of three closed forms, with ``w = s - sigma`` and
``sigma = Q - alpha``:

``SimpleZetaTerm``    ``c * delta**w / w``                         (simple pole at ``sigma``)
``LatticeZetaTerm``   ``c (hi**w - lo**w) (m b**-w)**k0 / (w (1 - m b**-w))``
``IntervalZetaTerm``  ``c (hi**w - lo**w) / w``                    (entire)

A lattice term has poles where ``m b**-w = 1``, i.e. on the vertical line
``Re s = sigma + log m / log b`` spaced ``2 pi / log b`` apart.  Its apparent
singularity at ``w = 0`` is removable unless ``m = 1``.  All poles of this algebra
are simple: each term has at most simple poles and sums of simple poles are simple.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError, NotAPoleError, PoleError, UnsupportedOrderError
from .tubefn import TubeFunction, as_fraction, evaluate_tube, fraction_str

#: relative size below which a summed residue counts as cancelled
CANCEL_RTOL = 1e-9
#: lattice members probed when deciding whether a family survives cancellation
FAMILY_PROBE = 16
_LOC_TOL = 1e-9


def exprel(x: complex) -> complex:
    """``(exp(x) - 1) / x`` with the removable point at 0 filled in."""
    if abs(x) < 0.05:
        # Horner form of the Taylor series, truncation error < 1e-15
        acc = 1.0 / 40320
        for k in (5040, 720, 120, 24, 6, 2, 1):
            acc = 1.0 / k + x * acc
        return acc
    return (cmath.exp(x) - 1.0) / x


def _band_ratio(w: complex, hi: float, lo: float) -> complex:
    """``(hi**w - lo**w) / w``, finite at ``w = 0``."""
    span = math.log(hi / lo)
    return cmath.exp(w * math.log(lo)) * span * exprel(w * span)


def log_ratio(m: Fraction, b: Fraction) -> tuple[Fraction, bool]:
    """``log m / log b`` as a rational, and whether the value is exact.

    Exact when ``m**q == b**p`` for some ``q <= 64``; otherwise a rational
    approximation of the float ratio is returned with ``False``.
    """
    m, b = Fraction(m), Fraction(b)
    if m == 1:
        return Fraction(0), True
    r = math.log(m) / math.log(b)
    for q in range(1, 65):
        p = round(r * q)
        if abs(r * q - p) < 1e-9 and m**q == b**p:
            return Fraction(p, q), True
    return Fraction(r).limit_denominator(10**12), False


@dataclass(frozen=True)
class SimpleZetaTerm:
    coeff: float
    sigma: Fraction
    delta: float
    exact: Fraction | None = None

    def value(self, s: complex) -> complex:
        w = s - float(self.sigma)
        return self.coeff * cmath.exp(w * math.log(self.delta)) / w


@dataclass(frozen=True)
class LatticeZetaTerm:
    coeff: float
    sigma: Fraction
    hi: Fraction
    lo: Fraction
    base: Fraction
    growth: Fraction
    k0: int
    exact: Fraction | None = None

    @property
    def spacing(self) -> float:
        return 2 * math.pi / math.log(self.base)

    def pole_line(self) -> tuple[Fraction, bool] | None:
        """Real part of the pole lattice, or ``None`` if the term is entire (``m = 0``)."""
        if self.growth == 0:
            return None
        shift, exact = log_ratio(self.growth, self.base)
        return self.sigma + shift, exact

    def geometric(self, s: complex) -> complex:
        """``m * b**-w``."""
        w = s - float(self.sigma)
        return cmath.exp(math.log(self.growth) - w * math.log(self.base))

    def value(self, s: complex) -> complex:
        w = s - float(self.sigma)
        num = self.coeff * _band_ratio(w, float(self.hi), float(self.lo))
        if self.growth == 0:
            return num if self.k0 == 0 else 0j
        y = math.log(self.growth) - w * math.log(self.base)
        denom = -y * exprel(y)  # 1 - m b^-w
        if denom == 0:
            raise PoleError(f"lattice pole at s={s}")
        return num * cmath.exp(self.k0 * y) / denom

    def residue_at(self, s_star: complex, w_is_zero: bool = False) -> complex:
        """Residue at a lattice point ``s_star`` (where ``m b**-w = 1``)."""
        log_b = math.log(self.base)
        if w_is_zero:
            return self.coeff * math.log(self.hi / self.lo) / log_b
        w = s_star - float(self.sigma)
        hi_w = cmath.exp(w * math.log(self.hi))
        lo_w = cmath.exp(w * math.log(self.lo))
        return self.coeff * (hi_w - lo_w) / (w * log_b)


@dataclass(frozen=True)
class LatticeAtomTerm(LatticeZetaTerm):
    """Point masses ``c m**k`` at ``t = hi * b**-k``: ``c hi**w (m b**-w)**k0 / (1 - m b**-w)``.

    ``lo`` is unused and kept equal to ``hi``.
    """

    def value(self, s: complex) -> complex:
        w = s - float(self.sigma)
        num = self.coeff * cmath.exp(w * math.log(self.hi))
        if self.growth == 0:
            return num if self.k0 == 0 else 0j
        y = math.log(self.growth) - w * math.log(self.base)
        denom = -y * exprel(y)
        if denom == 0:
            raise PoleError(f"lattice pole at s={s}")
        return num * cmath.exp(self.k0 * y) / denom

    def residue_at(self, s_star: complex, w_is_zero: bool = False) -> complex:
        w = s_star - float(self.sigma)
        return self.coeff * cmath.exp(w * math.log(self.hi)) / math.log(self.base)


@dataclass(frozen=True)
class IntervalZetaTerm:
    coeff: float
    sigma: Fraction
    hi: Fraction
    lo: Fraction
    exact: Fraction | None = None

    def value(self, s: complex) -> complex:
        return self.coeff * _band_ratio(s - float(self.sigma), float(self.hi), float(self.lo))


@dataclass(frozen=True)
class OffsetTerm:
    """Entire summand ``coeff * base**(s - shift)``."""

    coeff: float
    base: float
    shift: Fraction

    def value(self, s: complex) -> complex:
        return self.coeff * cmath.exp((s - float(self.shift)) * math.log(self.base))


@dataclass(frozen=True)
class MeromorphicZeta:
    """``(a + b s) * sum(terms) + sum(entire_part)``; ``linear=None`` means the factor 1."""

    terms: tuple
    ambient_q: Fraction
    kind: str = "tube"
    linear: tuple[Fraction, Fraction] | None = None
    entire_part: tuple[OffsetTerm, ...] = ()

    def __call__(self, s: complex) -> complex:
        return eval_zeta(self, s)

    def factor(self, s: complex) -> complex:
        if self.linear is None:
            return 1.0
        a, b = self.linear
        return float(a) + float(b) * s

    def simple_groups(self) -> dict[Fraction, list[SimpleZetaTerm]]:
        groups: dict[Fraction, list[SimpleZetaTerm]] = {}
        for term in self.terms:
            if isinstance(term, SimpleZetaTerm):
                groups.setdefault(term.sigma, []).append(term)
        return groups


# --------------------------------------------------------------------------
# construction


def continue_tube_zeta(tf: TubeFunction, q) -> MeromorphicZeta:
    """Continuation of ``int_0^delta t**(s-Q-1) |A_t| dt`` to the whole plane."""
    q = as_fraction(q)
    if q <= 0:
        raise DomainError("ambient dimension must be positive")
    return MeromorphicZeta(tuple(_integrate_terms(tf, q, weight_by_alpha=False)), q, "tube")


def distance_zeta(tf: TubeFunction, q) -> MeromorphicZeta:
    """Distance zeta ``int t**(s-Q) d|A_t|`` from the Stieltjes measure of ``tf``.

    Each term ``c t**alpha`` has density ``c alpha t**(alpha-1)``, so the closed forms
    are those of :func:`continue_tube_zeta` with coefficients multiplied by ``alpha``.
    A band switching on at ``lo`` and off at ``hi < delta`` also puts point masses
    ``+c lo**alpha`` and ``-c hi**alpha`` there; for a continuous ``tf`` the masses of
    adjacent bands cancel.  This route is independent of :func:`to_distance_zeta`.
    """
    q = as_fraction(q)
    if q <= 0:
        raise DomainError("ambient dimension must be positive")
    terms = tuple(_integrate_terms(tf, q, weight_by_alpha=True)) + tuple(_jump_terms(tf, q))
    return MeromorphicZeta(terms, q, "distance")


def _jump_terms(tf: TubeFunction, q: Fraction):
    delta = float(tf.delta)
    for fam in tf.ladders:
        top_is_delta = abs(fam.top - delta) <= 1e-15 * delta
        for term in fam.terms:
            if term.coeff == 0:
                continue
            sigma = q - term.exponent
            yield LatticeAtomTerm(term.coeff, sigma, fam.lo, fam.lo, fam.base, term.growth, fam.k0)
            yield LatticeAtomTerm(-term.coeff, sigma, fam.hi, fam.hi, fam.base, term.growth,
                                  fam.k0 + 1 if top_is_delta else fam.k0)
    for piece in tf.pieces:
        for term in piece.terms:
            if term.coeff == 0:
                continue
            sigma = q - term.exponent
            yield OffsetTerm(term.coeff * float(piece.lo) ** float(term.exponent), float(piece.lo), sigma)
            if abs(float(piece.hi) - delta) > 1e-15 * delta:
                yield OffsetTerm(-term.coeff * float(piece.hi) ** float(term.exponent), float(piece.hi), sigma)


def _integrate_terms(tf: TubeFunction, q: Fraction, weight_by_alpha: bool):
    def scaled(term):
        if not weight_by_alpha:
            return term.coeff, term.exact
        alpha = term.exponent
        exact = None if term.exact is None else term.exact * alpha
        return term.coeff * float(alpha), exact

    delta = float(tf.delta)
    for term in tf.terminal:
        c, exact = scaled(term)
        if c != 0:
            yield SimpleZetaTerm(c, q - term.exponent, delta, exact)
    for fam in tf.ladders:
        if fam.top > delta * (1 + 1e-15):
            raise DomainError("ladder bands extend beyond delta")
        for term in fam.terms:
            c, exact = scaled(term)
            if c != 0:
                yield LatticeZetaTerm(c, q - term.exponent, fam.hi, fam.lo, fam.base, term.growth, fam.k0, exact)
    for piece in tf.pieces:
        for term in piece.terms:
            c, exact = scaled(term)
            if c != 0:
                yield IntervalZetaTerm(c, q - term.exponent, piece.hi, piece.lo, exact)


def to_distance_zeta(zt: MeromorphicZeta, q, delta, measure_at_delta: float) -> MeromorphicZeta:
    """``delta**(s-Q) |A_delta| + (Q - s) * zt(s)``."""
    if zt.kind != "tube":
        raise DomainError("to_distance_zeta expects a tube zeta function")
    if zt.linear is not None or zt.entire_part:
        raise DomainError("tube zeta must be a plain term sum")
    q = as_fraction(q)
    entire = (OffsetTerm(float(measure_at_delta), float(delta), q),) if measure_at_delta else ()
    return MeromorphicZeta(zt.terms, q, "distance", (q, Fraction(-1)), entire)


def tube_and_distance(tf: TubeFunction, q) -> tuple[MeromorphicZeta, MeromorphicZeta]:
    zt = continue_tube_zeta(tf, q)
    return zt, to_distance_zeta(zt, q, tf.delta, evaluate_tube(tf, float(tf.delta)))


# --------------------------------------------------------------------------
# poles


@dataclass(frozen=True)
class Window:
    re_min: float = -math.inf
    re_max: float = math.inf
    im_max: float = 20.0

    def contains_re(self, re) -> bool:
        return self.re_min <= float(re) <= self.re_max

    def to_dict(self) -> dict:
        enc = lambda x: None if math.isinf(x) else x
        return {"re_min": enc(self.re_min), "re_max": enc(self.re_max), "im_max": self.im_max}

    @classmethod
    def from_dict(cls, d: dict) -> "Window":
        dec = lambda x, default: default if x is None else float(x)
        return cls(dec(d.get("re_min"), -math.inf), dec(d.get("re_max"), math.inf), float(d.get("im_max", 20.0)))


@dataclass(frozen=True)
class Pole:
    re: Fraction
    im: float
    order: int
    residue: complex
    residue_exact: Fraction | None = None

    @property
    def location(self) -> complex:
        return complex(float(self.re), self.im)

    def to_dict(self) -> dict:
        d = {"re": fraction_str(self.re), "im": self.im, "order": self.order,
             "residue": {"re": self.residue.real, "im": self.residue.imag}}
        if self.residue_exact is not None:
            d["residue_exact"] = fraction_str(self.residue_exact)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Pole":
        ex = d.get("residue_exact")
        return cls(as_fraction(d["re"]), float(d["im"]), int(d["order"]),
                   complex(d["residue"]["re"], d["residue"]["im"]),
                   None if ex is None else as_fraction(ex))


@dataclass(frozen=True)
class _FamilyResidue:
    """Closed-form residue ``n -> sum_j res_j(re + i n spacing)`` of one lattice family."""

    re: Fraction
    spacing: float
    terms: tuple[LatticeZetaTerm, ...]
    linear: tuple[Fraction, Fraction] | None
    extra_at_zero: complex = 0j

    def contributions(self, n: int) -> list[complex]:
        s_star = complex(float(self.re), n * self.spacing)
        out = [t.residue_at(s_star, w_is_zero=(n == 0 and t.sigma == self.re)) for t in self.terms]
        if n == 0 and self.extra_at_zero:
            out.append(self.extra_at_zero)
        if self.linear is not None:
            a, b = self.linear
            f = float(a) + float(b) * s_star
            out = [c * f for c in out]
        return out

    def __call__(self, n: int) -> complex:
        parts = self.contributions(n)
        total = sum(parts, 0j)
        scale = sum(abs(p) for p in parts)
        if abs(total) <= CANCEL_RTOL * scale:
            return 0j
        return total


@dataclass(frozen=True)
class LatticeFamily:
    re: Fraction
    spacing: float
    base: float
    members: tuple[Pole, ...] = ()
    exact_re: bool = True
    residue_fn: _FamilyResidue | None = field(default=None, compare=False, repr=False)

    def residue_at(self, n: int) -> complex:
        if self.residue_fn is None:
            for p in self.members:
                if round(p.im / self.spacing) == n:
                    return p.residue
            raise DomainError("family residues were not retained (deserialized family)")
        return self.residue_fn(n)

    def location(self, n: int) -> complex:
        return complex(float(self.re), n * self.spacing)

    def to_dict(self) -> dict:
        d = {"re": fraction_str(self.re), "spacing": self.spacing, "generatorBase": self.base,
             "members": [p.to_dict() for p in self.members]}
        if not self.exact_re:
            d["exactRe"] = False
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LatticeFamily":
        return cls(as_fraction(d["re"]), float(d["spacing"]), float(d["generatorBase"]),
                   tuple(Pole.from_dict(p) for p in d.get("members", ())), bool(d.get("exactRe", True)))


@dataclass(frozen=True)
class PoleSet:
    isolated: tuple[Pole, ...] = ()
    families: tuple[LatticeFamily, ...] = ()
    window: Window = Window()

    def __bool__(self) -> bool:
        return bool(self.isolated or self.families)

    def real_parts(self) -> set[Fraction]:
        return {p.re for p in self.isolated} | {f.re for f in self.families}

    def abscissa(self) -> Fraction:
        if not self:
            raise DomainError("empty pole set has no abscissa")
        return max(self.real_parts())

    def materialized(self) -> list[Pole]:
        """Isolated poles and every family member inside the window, sorted."""
        out = list(self.isolated) + [m for f in self.families for m in f.members]
        return sorted(out, key=lambda p: (p.re, p.im))

    def to_dict(self) -> dict:
        return {"isolated": [p.to_dict() for p in self.isolated],
                "families": [f.to_dict() for f in self.families],
                "window": self.window.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "PoleSet":
        return cls(tuple(Pole.from_dict(p) for p in d.get("isolated", ())),
                   tuple(LatticeFamily.from_dict(f) for f in d.get("families", ())),
                   Window.from_dict(d.get("window", {})))


def _simple_residue(group: Sequence[SimpleZetaTerm]) -> tuple[complex, Fraction | None, float]:
    if all(t.exact is not None for t in group):
        ex = sum((t.exact for t in group), Fraction(0))
        return complex(float(ex)), ex, sum(abs(float(t.exact)) for t in group)
    return complex(math.fsum(t.coeff for t in group)), None, sum(abs(t.coeff) for t in group)


def _apply_linear(z: MeromorphicZeta, at: Fraction, res: complex, exact: Fraction | None):
    if z.linear is None:
        return res, exact
    a, b = z.linear
    f_exact = a + b * at
    return res * float(f_exact), None if exact is None else exact * f_exact


def poles(z: MeromorphicZeta, window: Window | None = None) -> PoleSet:
    """All poles of ``z`` with real part in the window; lattice families kept symbolic."""
    window = window or Window()
    fam_terms: dict[tuple[Fraction, Fraction], list[LatticeZetaTerm]] = {}
    fam_exact: dict[tuple[Fraction, Fraction], bool] = {}
    for term in z.terms:
        if isinstance(term, LatticeZetaTerm):
            line = term.pole_line()
            if line is None:
                continue
            key = (line[0], term.base)
            fam_terms.setdefault(key, []).append(term)
            fam_exact[key] = fam_exact.get(key, True) and line[1]

    isolated: list[Pole] = []
    extras: dict[tuple[Fraction, Fraction], complex] = {}
    for sigma, group in sorted(z.simple_groups().items()):
        res, exact, scale = _simple_residue(group)
        coincide = next((k for k in fam_terms if k[0] == sigma), None)
        if coincide is not None:
            extras[coincide] = extras.get(coincide, 0j) + res
            continue
        if (exact is not None and exact == 0) or abs(res) <= CANCEL_RTOL * scale:
            continue
        res, exact = _apply_linear(z, sigma, res, exact)
        if res == 0:
            continue
        if window.contains_re(sigma):
            isolated.append(Pole(sigma, 0.0, 1, res, exact))

    families: list[LatticeFamily] = []
    for key, terms in sorted(fam_terms.items()):
        re, base = key
        spacing = 2 * math.pi / math.log(base)
        fn = _FamilyResidue(re, spacing, tuple(terms), z.linear, extras.get(key, 0j))
        alive = [n for n in range(-FAMILY_PROBE, FAMILY_PROBE + 1) if fn(n) != 0]
        if not alive or not window.contains_re(re):
            continue
        if alive == [0]:
            isolated.append(Pole(re, 0.0, 1, fn(0)))
            continue
        n_max = int(math.floor(window.im_max / spacing + 1e-12))
        members = []
        for n in range(-n_max, n_max + 1):
            r = fn(n)
            if r != 0:
                members.append(Pole(re, n * spacing, 1, r))
        families.append(LatticeFamily(re, spacing, float(base), tuple(members), fam_exact[key], fn))
    isolated.sort(key=lambda p: (p.re, p.im))
    return PoleSet(tuple(isolated), tuple(families), window)


def principal_dimensions(p: PoleSet) -> PoleSet:
    """Poles on the line ``Re s = D``, the largest real part present."""
    if not p:
        raise DomainError("empty pole set has no principal dimensions")
    d = p.abscissa()
    return PoleSet(tuple(x for x in p.isolated if x.re == d), tuple(f for f in p.families if f.re == d), p.window)


def abscissa(z: MeromorphicZeta) -> Fraction | None:
    """Largest pole real part over the full (unwindowed) pole set."""
    ps = poles(z, Window(im_max=0.0))
    return ps.abscissa() if ps else None


def _principal_signature(z: MeromorphicZeta):
    ps = poles(z, Window(im_max=0.0))
    if not ps:
        return None, frozenset()
    pr = principal_dimensions(ps)
    sig = {("pole", p.re, round(p.im, 9)) for p in pr.isolated}
    sig |= {("family", f.re, round(f.spacing, 12)) for f in pr.families}
    return pr.abscissa(), frozenset(sig)


def equivalent(f: MeromorphicZeta, g: MeromorphicZeta) -> bool:
    """Same abscissa and same principal complex dimensions."""
    return _principal_signature(f) == _principal_signature(g)


# --------------------------------------------------------------------------
# residues and evaluation


def _locate(z: MeromorphicZeta, s0: complex):
    ps = poles(z, Window(s0.real - 1e-6, s0.real + 1e-6, abs(s0.imag) + 1.0))
    for p in ps.isolated:
        if abs(p.location - s0) < _LOC_TOL:
            return p
    for fam in ps.families:
        if abs(float(fam.re) - s0.real) < _LOC_TOL:
            n = round(s0.imag / fam.spacing)
            if abs(n * fam.spacing - s0.imag) < _LOC_TOL:
                r = fam.residue_at(n)
                if r != 0:
                    return Pole(fam.re, n * fam.spacing, 1, r)
    return None


def residue(z: MeromorphicZeta, s0: complex) -> complex:
    """Residue of ``z`` at the simple pole ``s0``."""
    p = _locate(z, complex(s0))
    if p is None:
        raise NotAPoleError(f"s={s0} is not a pole")
    if p.order != 1:
        raise UnsupportedOrderError(f"pole of order {p.order} at s={s0}")
    return p.residue


def residue_exact(z: MeromorphicZeta, s0: complex) -> Fraction | None:
    p = _locate(z, complex(s0))
    if p is None:
        raise NotAPoleError(f"s={s0} is not a pole")
    return p.residue_exact


def _term_singular(z: MeromorphicZeta, s: complex) -> bool:
    for sigma, group in z.simple_groups().items():
        if s == float(sigma):
            return True
    for term in z.terms:
        if isinstance(term, LatticeZetaTerm) and term.growth != 0:
            if abs(1 - term.geometric(s)) < 1e-12:
                return True
    return False


def _raw_sum(z: MeromorphicZeta, s: complex) -> complex:
    total = 0j
    for sigma, group in z.simple_groups().items():
        w = s - float(sigma)
        c_sum = math.fsum(t.coeff for t in group)
        if all(t.exact is not None for t in group) and sum(t.exact for t in group) == 0:
            c_sum = 0.0
        # sum c_j delta_j^w / w = C/w + sum c_j log(delta_j) exprel(w log delta_j)
        part = sum(t.coeff * math.log(t.delta) * exprel(w * math.log(t.delta)) for t in group)
        if c_sum != 0:
            if w == 0:
                raise PoleError(f"pole at s={s}")
            part += c_sum / w
        total += part
    for term in z.terms:
        if not isinstance(term, SimpleZetaTerm):
            total += term.value(s)
    return total


def eval_zeta(z: MeromorphicZeta, s: complex) -> complex:
    """Value of ``z`` at ``s``; removable points are filled in by their limit."""
    s = complex(s)
    if _term_singular(z, s):
        if _locate(z, s) is not None:
            raise PoleError(f"s={s} is a pole")
        try:
            return z.factor(s) * _raw_sum(z, s) + sum(e.value(s) for e in z.entire_part)
        except (PoleError, ZeroDivisionError, OverflowError):
            pass
        # removable point: mean over a small circle kills the Laurent terms below order 8
        h = 1e-2
        vals = [eval_zeta(z, s + h * cmath.exp(2j * math.pi * (k + 0.5) / 8)) for k in range(8)]
        return sum(vals) / 8
    return z.factor(s) * _raw_sum(z, s) + sum(e.value(s) for e in z.entire_part)


def eval_many(z: MeromorphicZeta, ss: Iterable[complex]) -> list[complex]:
    return [eval_zeta(z, s) for s in ss]
