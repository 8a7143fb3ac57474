"""Piecewise-linear maps, proper pushforward of barcodes, and the stability
and Lipschitz experiment harness.

The pushforward computes fiberwise compactly supported cohomology over a
target stratification refined by all critical values, assembles generization
maps from slab components, and decomposes the resulting zigzag per degree.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from .barcode import (CLOSED, OPEN, Bar, GradedBarcode, Interval, intersect,
                      rgamma_c_interval)
from .interleave import (Budget, DEFAULT_BUDGET, CapacityError,
                         InterleavingCertificate, LINE_OPS, check_exhaustive,
                         check_matching, verify_certificate)
from .model import LineModel, Rep
from .scalars import NEG_INF, POS_INF, is_finite
from .zigzag import decompose_line


class NonProperError(ValueError):
    pass


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear map given by breakpoints and values.

    The domain is the whole line (default) or an interval.  On an unbounded
    side the map continues either constantly or affinely with the adjacent
    segment's slope.
    """
    xs: tuple
    ys: tuple
    left_ext: str = "affine"
    right_ext: str = "affine"
    domain: Interval | None = None

    def __post_init__(self):
        xs = tuple(Fraction(x) for x in self.xs)
        ys = tuple(Fraction(y) for y in self.ys)
        if len(xs) != len(ys) or not xs:
            raise ValueError("breakpoints and values must match and be nonempty")
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("breakpoints must increase strictly")
        if self.left_ext not in ("affine", "constant") or \
           self.right_ext not in ("affine", "constant"):
            raise ValueError("extension must be 'affine' or 'constant'")
        if self.domain is not None:
            if xs[0] < self.domain.left or xs[-1] > self.domain.right:
                raise ValueError("breakpoints leave the domain")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    # -- basic evaluation ------------------------------------------------
    def _seg_slope(self, i: int) -> Fraction:
        return (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])

    @property
    def left_slope(self) -> Fraction:
        if self.left_ext == "constant" or len(self.xs) == 1:
            return Fraction(0)
        return self._seg_slope(0)

    @property
    def right_slope(self) -> Fraction:
        if self.right_ext == "constant" or len(self.xs) == 1:
            return Fraction(0)
        return self._seg_slope(len(self.xs) - 2)

    def pieces(self):
        """Affine pieces (lo, hi, slope, intercept) covering the domain."""
        out = []
        s = self.left_slope
        out.append((NEG_INF, self.xs[0], s, self.ys[0] - s * self.xs[0]))
        for i in range(len(self.xs) - 1):
            s = self._seg_slope(i)
            out.append((self.xs[i], self.xs[i + 1], s, self.ys[i] - s * self.xs[i]))
        s = self.right_slope
        out.append((self.xs[-1], POS_INF, s, self.ys[-1] - s * self.xs[-1]))
        if self.domain is not None:
            clipped = []
            for lo, hi, s, b in out:
                lo2 = max(lo, self.domain.left)
                hi2 = min(hi, self.domain.right)
                if lo2 < hi2 or (lo2 == hi2 and self.domain.is_singleton):
                    clipped.append((lo2, hi2, s, b))
            return clipped or [(self.domain.left, self.domain.right,
                                Fraction(0), self.ys[0])]
        return out

    def value(self, x) -> Fraction:
        x = Fraction(x)
        if self.domain is not None and not (self.domain.left <= x <= self.domain.right):
            raise ValueError(f"{x} lies outside the domain {self.domain}")
        for lo, hi, s, b in self.pieces():
            if (lo == NEG_INF or lo <= x) and (hi == POS_INF or x <= hi):
                return s * x + b
        raise AssertionError("pieces do not cover the domain")

    def breakpoints(self):
        return self.xs


def identity_map() -> PLMap:
    return PLMap((0, 1), (0, 1))


def constant_map(c) -> PLMap:
    return PLMap((0,), (c,), "constant", "constant")


def abs_map() -> PLMap:
    return PLMap((-1, 0, 1), (1, 0, 1))


def scale_map(r) -> PLMap:
    r = Fraction(r)
    return PLMap((0, 1), (0, r))


def translate_map(c) -> PLMap:
    c = Fraction(c)
    return PLMap((0, 1), (c, 1 + c))


def offset_map(f: PLMap, c) -> PLMap:
    c = Fraction(c)
    return PLMap(f.xs, tuple(y + c for y in f.ys), f.left_ext, f.right_ext)


def compose_pl(g: PLMap, f: PLMap) -> PLMap:
    """g after f, with breakpoints refined by preimages of g's breakpoints."""
    if f.domain is not None or g.domain is not None:
        raise ValueError("composition is implemented for whole-line maps")
    bps = set(f.xs)
    for lo, hi, s, b in f.pieces():
        for c in g.xs:
            if s != 0:
                x = (c - b) / s
                if (lo == NEG_INF or lo <= x) and (hi == POS_INF or x <= hi):
                    bps.add(x)
    xs = sorted(bps)
    if len(xs) == 1:
        xs.append(xs[0] + 1)
    # tail slopes of the composite decide the extension flags
    lslope = f.left_slope * (g.left_slope if f.left_slope > 0 else g.right_slope)
    rslope = f.right_slope * (g.right_slope if f.right_slope > 0 else g.left_slope)
    ys = [g.value(f.value(x)) for x in xs]
    return PLMap(tuple(xs), tuple(ys),
                 "constant" if lslope == 0 else "affine",
                 "constant" if rslope == 0 else "affine")


def sup_distance(f: PLMap, g: PLMap):
    """Exact supremum of |f - g| over the common domain; attained at a
    breakpoint or domain endpoint, +inf when unbounded tails diverge."""
    if f.domain != g.domain:
        raise ValueError("sup distance requires a common domain")
    candidates = set(f.xs) | set(g.xs)
    if f.domain is None:
        if f.left_slope != g.left_slope or f.right_slope != g.right_slope:
            return POS_INF
    else:
        candidates = {x for x in candidates
                      if f.domain.left <= x <= f.domain.right}
        for e in (f.domain.left, f.domain.right):
            if is_finite(e):
                candidates.add(e)
        if f.domain.left == NEG_INF and f.left_slope != g.left_slope:
            return POS_INF
        if f.domain.right == POS_INF and f.right_slope != g.right_slope:
            return POS_INF
    best = Fraction(0)
    for x in sorted(candidates):
        best = max(best, abs(f.value(x) - g.value(x)))
    return best


def lipschitz_constant(f: PLMap) -> Fraction:
    return max(abs(s) for _, _, s, _ in f.pieces())


# ---------------------------------------------------------------------------
# Proper pushforward.

def _merge_components(parts: list[Interval]) -> list[Interval]:
    parts = sorted(parts, key=Interval.sort_key)
    out: list[Interval] = []
    for iv in parts:
        if out:
            prev = out[-1]
            touch = (prev.right > iv.left or
                     (prev.right == iv.left and
                      (prev.rkind is CLOSED or iv.lkind is CLOSED)))
            if touch:
                right, rkind = ((iv.right, iv.rkind)
                                if iv.right > prev.right else (prev.right, prev.rkind))
                if iv.right == prev.right and iv.rkind is CLOSED:
                    rkind = CLOSED
                out[-1] = Interval(prev.left, prev.lkind, right, rkind)
                continue
        out.append(iv)
    return out


def _bar_pieces(f: PLMap, iv: Interval):
    """Affine pieces of f restricted to the bar support, kinds inherited."""
    out = []
    for lo, hi, s, b in f.pieces():
        piece = Interval(lo, OPEN if lo == NEG_INF else CLOSED,
                         hi, OPEN if hi == POS_INF else CLOSED)
        sub = intersect(piece, iv)
        if sub is not None:
            out.append((sub, s, b))
    return out


def _preimage_in_piece(sub: Interval, s: Fraction, b: Fraction, lo, hi,
                       lo_closed=True, hi_closed=True):
    """Component(s) of {x in sub : f(x) in [lo, hi]} for one affine piece."""
    if s == 0:
        if (lo < b < hi) or (b == lo and lo_closed) or (b == hi and hi_closed):
            return [sub]
        return []
    x1 = (lo - b) / s
    x2 = (hi - b) / s
    if x1 > x2:
        x1, x2 = x2, x1
        k1, k2 = hi_closed, lo_closed
    else:
        k1, k2 = lo_closed, hi_closed
    window = Interval(x1, CLOSED if k1 else OPEN, x2, CLOSED if k2 else OPEN)
    inter = intersect(window, sub)
    return [inter] if inter is not None else []


def _fiber(f: PLMap, iv: Interval, t: Fraction) -> list[Interval]:
    parts = []
    for sub, s, b in _bar_pieces(f, iv):
        parts.extend(_preimage_in_piece(sub, s, b, t, t))
    return _merge_components(parts)


def _slab(f: PLMap, iv: Interval, lo: Fraction, hi: Fraction) -> list[Interval]:
    parts = []
    for sub, s, b in _bar_pieces(f, iv):
        parts.extend(_preimage_in_piece(sub, s, b, lo, hi))
    return _merge_components(parts)


def _is_cc(iv: Interval) -> bool:
    return iv.is_bounded and iv.lkind is CLOSED and iv.rkind is CLOSED


def _is_open_comp(iv: Interval) -> bool:
    return iv.is_bounded and iv.lkind is OPEN and iv.rkind is OPEN


def _check_proper(f: PLMap, iv: Interval):
    if f.domain is not None:
        if intersect(f.domain, iv) != iv:
            raise ValueError(f"bar support {iv} leaves the map domain {f.domain}")
        if is_finite(f.domain.left) and is_finite(f.domain.right):
            return
    if iv.left == NEG_INF and f.left_slope == 0:
        raise NonProperError(f"constant tail over the unbounded bar {iv}")
    if iv.right == POS_INF and f.right_slope == 0:
        raise NonProperError(f"constant tail over the unbounded bar {iv}")


def _critical_values(f: PLMap, iv: Interval):
    vals = set()
    for x in f.xs:
        if iv.contains(Fraction(x)):
            vals.add(f.value(x))
    for e in (iv.left, iv.right):
        if is_finite(e):
            vals.add(f.value(e))
    return sorted(vals)


def _pushforward_bar(f: PLMap, bar: Bar, char: int) -> list[Bar]:
    iv, d = bar.iv, bar.degree
    _check_proper(f, iv)
    cvs = _critical_values(f, iv)
    model = LineModel(cvs)
    n = len(model.strata)
    fibers = []
    for s in model.strata:
        fibers.append(_fiber(f, iv, s.sample()))
    cc = [[c for c in comps if _is_cc(c)] for comps in fibers]
    opens = [[c for c in comps if _is_open_comp(c)] for comps in fibers]
    for idx, comps in enumerate(fibers):
        for c in comps:
            if not (_is_cc(c) or _is_open_comp(c)):
                off = rgamma_c_interval(c)
                if off:
                    raise AssertionError(f"unclassified fiber component {c}")
        if model.strata[idx].kind == "open" and opens[idx]:
            raise AssertionError("open fiber component over a non-critical value")

    dims0 = [len(cc[i]) for i in range(n)]
    mats0 = []
    for (pt, op, _side) in model.edges:
        c = model.strata[pt].left
        t = model.strata[op].sample()
        slab = _slab(f, iv, min(c, t), max(c, t))
        mat = [[0] * dims0[pt] for _ in range(dims0[op])]
        for j, K in enumerate(cc[pt]):
            B = next((s for s in slab if intersect(s, K) is not None), None)
            if B is None:
                raise AssertionError("fiber component escapes its slab")
            if not _is_cc(B):
                continue
            for i, K2 in enumerate(cc[op]):
                if intersect(B, K2) is not None:
                    mat[i][j] = 1
        mats0.append(mat)
    rep0 = Rep(model, dims0, mats0, char)
    out = [Bar(interval, d) for interval in decompose_line(rep0)]

    dims1 = [len(opens[i]) for i in range(n)]
    if any(dims1):
        mats1 = []
        for (pt, op, _side) in model.edges:
            mats1.append([[0] * dims1[pt] for _ in range(dims1[op])])
        rep1 = Rep(model, dims1, mats1, char)
        out.extend(Bar(interval, d + 1) for interval in decompose_line(rep1))
    return out


def pushforward_shriek(f: PLMap, F: GradedBarcode) -> GradedBarcode:
    """Proper pushforward along a PL map, assembled per bar and per degree."""
    bars = []
    for b in F.bars:
        bars.extend(_pushforward_bar(f, b, F.char))
    return GradedBarcode(bars, F.char)


# ---------------------------------------------------------------------------
# Experiments.

@dataclass
class ExperimentReport:
    inputs: dict
    bound: object
    certificate: InterleavingCertificate | None
    verdict: str                 # 'pass' | 'fail' | 'inconclusive'
    micros: int

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _search_certificate(F, G, a, budget: Budget):
    cert = check_matching(F, G, a, LINE_OPS)
    if cert is not None:
        return cert, True
    try:
        return check_exhaustive(F, G, a, LINE_OPS, budget), True
    except CapacityError:
        return None, False


def stability_experiment(f: PLMap, g: PLMap, F: GradedBarcode,
                         budget: Budget = DEFAULT_BUDGET) -> ExperimentReport:
    """Push F along f and g and certify an interleaving at the sup distance."""
    t0 = time.perf_counter()
    a = sup_distance(f, g)
    inputs = {"f": f, "g": g, "F": F, "a": a}
    if not is_finite(a):
        return ExperimentReport(inputs, a, None, "inconclusive",
                                _micros(t0))
    Ff = pushforward_shriek(f, F)
    Fg = pushforward_shriek(g, F)
    cert, conclusive = _search_certificate(Ff, Fg, a, budget)
    if cert is not None and verify_certificate(Ff, Fg, cert, LINE_OPS):
        return ExperimentReport(inputs, a, cert, "pass", _micros(t0))
    return ExperimentReport(inputs, a, None,
                            "fail" if conclusive else "inconclusive", _micros(t0))


def lipschitz_experiment(f: PLMap, F1: GradedBarcode, F2: GradedBarcode, a,
                         budget: Budget = DEFAULT_BUDGET) -> ExperimentReport:
    """Given an a-interleaving of (F1, F2), certify a (delta a)-interleaving
    of the pushforwards, where delta is the Lipschitz constant of f."""
    t0 = time.perf_counter()
    a = Fraction(a)
    delta = lipschitz_constant(f)
    inputs = {"f": f, "F1": F1, "F2": F2, "a": a, "delta": delta}
    Ff1 = pushforward_shriek(f, F1)
    Ff2 = pushforward_shriek(f, F2)
    cert, conclusive = _search_certificate(Ff1, Ff2, delta * a, budget)
    if cert is not None and verify_certificate(Ff1, Ff2, cert, LINE_OPS):
        return ExperimentReport(inputs, delta * a, cert, "pass", _micros(t0))
    return ExperimentReport(inputs, delta * a, None,
                            "fail" if conclusive else "inconclusive", _micros(t0))


def _micros(t0) -> int:
    return int((time.perf_counter() - t0) * 1_000_000)
