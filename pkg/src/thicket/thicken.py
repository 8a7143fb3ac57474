"""Bi-thickening of graded barcodes on the real line.

For a >= 0 the thickening convolves with the closed ball of radius a; for
a < 0 it is the open-ball convolution twisted by the shift [1].  Both are
realized by closed-form per-bar rules; the rules are certified against the
stalk oracle (compactly supported sections of ball/bar intersections) and
against the independent Minkowski-fiber convolution route.
"""

from __future__ import annotations

from fractions import Fraction

from .barcode import (CLOSED, OPEN, Bar, GradedBarcode, Interval, intersect,
                      rgamma_c_interval)
from .scalars import NEG_INF, POS_INF, is_finite


def bar_rule(b: Bar, a: Fraction) -> Bar:
    """Thicken one bar by the signed amount ``a``."""
    iv, d = b.iv, b.degree
    if iv.is_full_line:
        return b
    if iv.is_right_ray:
        if iv.lkind is CLOSED:
            return Bar(Interval(iv.left - a, CLOSED, POS_INF, OPEN), d)
        return Bar(Interval(iv.left + a, OPEN, POS_INF, OPEN), d)
    if iv.is_left_ray:
        if iv.rkind is CLOSED:
            return Bar(Interval(NEG_INF, OPEN, iv.right + a, CLOSED), d)
        return Bar(Interval(NEG_INF, OPEN, iv.right - a, OPEN), d)
    # bounded from here on
    length = iv.right - iv.left
    if iv.lkind is CLOSED and iv.rkind is OPEN:
        return Bar(Interval(iv.left - a, CLOSED, iv.right - a, OPEN), d)
    if iv.lkind is OPEN and iv.rkind is CLOSED:
        return Bar(Interval(iv.left + a, OPEN, iv.right + a, CLOSED), d)
    if iv.lkind is CLOSED:                     # closed, including points
        if 2 * a >= -length:
            return Bar(Interval(iv.left - a, CLOSED, iv.right + a, CLOSED), d)
        return Bar(Interval(iv.right + a, OPEN, iv.left - a, OPEN), d - 1)
    # open bounded
    if 2 * a < length:
        return Bar(Interval(iv.left + a, OPEN, iv.right - a, OPEN), d)
    return Bar(Interval(iv.right - a, CLOSED, iv.left + a, CLOSED), d + 1)


def thicken(F: GradedBarcode, a) -> GradedBarcode:
    """Thicken every bar by the signed rational ``a`` and re-canonicalize."""
    a = Fraction(a)
    return GradedBarcode([bar_rule(b, a) for b in F.bars], F.char)


# ---------------------------------------------------------------------------
# Stalk oracle: direct evaluation of the kernel composition fiberwise.

def _ball(t: Fraction, a: Fraction, kind) -> Interval:
    return Interval(t - a, kind, t + a, kind)


def stalk_oracle(F: GradedBarcode, a, t) -> dict[int, int]:
    """Stalk dimensions of the a-thickening at t, computed per bar as the
    compactly supported cohomology of [t-a, t+a] meet the bar support."""
    a, t = Fraction(a), Fraction(t)
    if a < 0:
        raise ValueError("stalk_oracle requires a >= 0")
    dims: dict[int, int] = {}
    for b in F.bars:
        inter = intersect(_ball(t, a, CLOSED), b.iv)
        if inter is None:
            continue
        for off, n in rgamma_c_interval(inter).items():
            d = b.degree + off
            dims[d] = dims.get(d, 0) + n
    return {d: n for d, n in sorted(dims.items()) if n}


def stalk_oracle_negative(F: GradedBarcode, a, t) -> dict[int, int]:
    """Oracle for negative thickening: open-ball fibers shifted by one."""
    a, t = Fraction(a), Fraction(t)
    if a >= 0:
        raise ValueError("negative oracle requires a < 0")
    u = -a
    dims: dict[int, int] = {}
    for b in F.bars:
        inter = intersect(_ball(t, u, OPEN), b.iv)
        if inter is None:
            continue
        for off, n in rgamma_c_interval(inter).items():
            d = b.degree + off - 1
            dims[d] = dims.get(d, 0) + n
    return {d: n for d, n in sorted(dims.items()) if n}


def stalk_of(F: GradedBarcode, a, t) -> dict[int, int]:
    a = Fraction(a)
    if a >= 0:
        return stalk_oracle(F, a, t)
    return stalk_oracle_negative(F, a, t)


# ---------------------------------------------------------------------------
# Independent convolution route: convolve with the closed ball [-a, a] by
# Minkowski-fiber analysis and reassemble the output bars from exact samples.

def _fiber_dims(iv: Interval, a: Fraction, t: Fraction) -> dict[int, int]:
    inter = intersect(_ball(t, a, CLOSED), iv)
    if inter is None:
        return {}
    return rgamma_c_interval(inter)


def _support_from_samples(samples, offset: int):
    """Samples: ordered list of (tag, t_or_None, dims).  Reconstructs the
    interval where the given degree offset is populated."""
    flags = [dims.get(offset, 0) for _, _, dims in samples]
    if not any(flags):
        return None
    first = flags.index(1)
    last = len(flags) - 1 - flags[::-1].index(1)
    if 0 in flags[first:last + 1]:
        raise AssertionError("fiber support not contiguous")
    tag_f, t_f, _ = samples[first]
    tag_l, t_l, _ = samples[last]
    if tag_f == "low":
        left, lkind = NEG_INF, OPEN
    elif tag_f == "cand":
        left, lkind = t_f, CLOSED
    else:                                   # midpoint: opens at previous candidate
        left, lkind = samples[first - 1][1], OPEN
    if tag_l == "high":
        right, rkind = POS_INF, OPEN
    elif tag_l == "cand":
        right, rkind = t_l, CLOSED
    else:
        right, rkind = samples[last + 1][1], OPEN
    return Interval(left, lkind, right, rkind)


def convolution_ball(F: GradedBarcode, a) -> GradedBarcode:
    """Convolution with the closed ball of radius a >= 0, reconstructed from
    exact fiber samples; independent of the rule table."""
    a = Fraction(a)
    if a < 0:
        raise ValueError("convolution_ball requires a >= 0")
    out = []
    for b in F.bars:
        cands = sorted({e + s * a for e in (b.iv.left, b.iv.right) if is_finite(e)
                        for s in (Fraction(-1), Fraction(1))})
        samples = []
        if cands:
            samples.append(("low", None, _fiber_dims(b.iv, a, cands[0] - 1)))
            for i, c in enumerate(cands):
                samples.append(("cand", c, _fiber_dims(b.iv, a, c)))
                if i + 1 < len(cands):
                    mid = (c + cands[i + 1]) / 2
                    samples.append(("mid", mid, _fiber_dims(b.iv, a, mid)))
            samples.append(("high", None, _fiber_dims(b.iv, a, cands[-1] + 1)))
        else:
            samples.append(("low", None, _fiber_dims(b.iv, a, Fraction(0))))
            samples.append(("high", None, _fiber_dims(b.iv, a, Fraction(0))))
        for off in (0, 1):
            sup = _support_from_samples(samples, off)
            if sup is not None:
                out.append(Bar(sup, b.degree + off))
    return GradedBarcode(out, F.char)


# ---------------------------------------------------------------------------
# Transition bookkeeping used by the restriction-morphism construction.

def halfopen_translation_kills(iv: Interval, alpha: Fraction, beta: Fraction) -> bool:
    """A half-open bar dies under the canonical restriction when the two
    translates no longer overlap."""
    is_halfopen = iv.is_bounded and iv.lkind is not iv.rkind
    return is_halfopen and (beta - alpha) >= iv.length
