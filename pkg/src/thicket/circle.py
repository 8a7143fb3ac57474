"""Constructible sheaves on a circle of rational circumference.

A sheaf is stored as spirals (pushforwards of bounded interval sheaves along
the covering map, lifts normalized to start in [0, C)) plus bands (local
systems given by rank and monodromy up to conjugacy).  Thickening acts on
spirals through the line rules on lifts and fixes bands; the quarter-turn
thickening realizes the Fourier-Sato transform and its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial

from .barcode import (CLOSED, Bar, GradedBarcode, Interval, intersect,
                      rgamma_c_interval)
from .interleave import Budget, DEFAULT_BUDGET, DistanceBounds, SpaceOps
from .interleave import distance as _distance
from .model import (CircleModel, Rep, circle_band_rep, circle_spiral_rep,
                    direct_sum, rep_sections)
from .morphisms import restriction as _restriction
from .morphisms import thicken_indexed as _thicken_indexed
from .morphisms import thicken_morphism as _thicken_morphism
from .scalars import POS_INF
from .thicken import bar_rule
from .zigzag import canonical_monodromy, decompose_cyclic_rep
from .fieldmath import is_prime


class UnsupportedBandContentError(ValueError):
    pass


def _normalize_lift(bar: Bar, C: Fraction) -> Bar:
    shift = (bar.iv.left / C).__floor__() * C
    if shift == 0:
        return bar
    iv = bar.iv
    return Bar(Interval(iv.left - shift, iv.lkind, iv.right - shift, iv.rkind),
               bar.degree)


@dataclass(frozen=True)
class Band:
    rank: int
    monodromy: tuple
    degree: int

    def matrix(self):
        return [list(r) for r in self.monodromy]


def make_band(rank: int, monodromy, degree: int, char: int) -> Band:
    mono = canonical_monodromy([list(r) for r in monodromy], char)
    return Band(rank, tuple(tuple(r) for r in mono), degree)


class CircleSheaf:
    """Canonical form: normalized sorted spirals plus canonicalized bands."""

    __slots__ = ("C", "spirals", "bands", "char")

    def __init__(self, circumference, spirals=(), bands=(), char: int = 2):
        self.C = Fraction(circumference)
        if self.C <= 0:
            raise ValueError("circumference must be positive")
        if not is_prime(char):
            raise ValueError("characteristic must be prime")
        self.char = char
        sp = []
        for b in spirals:
            if not b.iv.is_bounded:
                raise ValueError(f"spiral lift must be bounded: {b}")
            sp.append(_normalize_lift(b, self.C))
        sp.sort(key=Bar.sort_key)
        self.spirals = tuple(sp)
        bd = []
        for band in bands:
            if isinstance(band, Band):
                band = make_band(band.rank, band.matrix(), band.degree, char)
            else:
                rank, mono, degree = band
                band = make_band(rank, mono, degree, char)
            if band.rank < 1:
                raise ValueError("band rank must be positive")
            bd.append(band)
        bd.sort(key=lambda b: (b.degree, b.rank, b.monodromy))
        self.bands = tuple(bd)

    def __eq__(self, other):
        return (isinstance(other, CircleSheaf) and self.C == other.C
                and self.char == other.char and self.spirals == other.spirals
                and self.bands == other.bands)

    def __hash__(self):
        return hash((self.C, self.spirals, self.bands, self.char))

    def __repr__(self):
        parts = [f"spiral {b}" for b in self.spirals]
        parts += [f"band r={b.rank} T={b.monodromy} @deg {b.degree}" for b in self.bands]
        return f"<circle C={self.C}: {'; '.join(parts) or '0'} | F_{self.char}>"

    def spiral_barcode(self) -> GradedBarcode:
        return GradedBarcode(self.spirals, self.char)


def iso_equal_circle(F: CircleSheaf, G: CircleSheaf) -> bool:
    if F.C != G.C or F.char != G.char:
        raise ValueError("circle sheaves live on different circles")
    return F == G


def seed_bound(C) -> Fraction:
    """Radius of the built-in thickening seed: an eighth of the circumference,
    safely below the quarter-circumference convexity bound."""
    return Fraction(C) / 8


# ---------------------------------------------------------------------------
# Cyclic models.

@dataclass
class CyclicModel:
    """Cyclic stratification with one representation per degree."""
    C: Fraction
    model: CircleModel
    reps: dict  # degree -> Rep
    char: int = 2


def cyclic_model_of(F: CircleSheaf, extra_points=()) -> CyclicModel:
    pts = set(Fraction(x) % F.C for x in extra_points)
    for b in F.spirals:
        pts.add(b.iv.left % F.C)
        pts.add(b.iv.right % F.C)
    model = CircleModel(F.C, pts if pts else [Fraction(0)])
    by_degree: dict[int, list[Rep]] = {}
    for b in F.spirals:
        by_degree.setdefault(b.degree, []).append(
            circle_spiral_rep(model, b.iv, F.char))
    for band in F.bands:
        by_degree.setdefault(band.degree, []).append(
            circle_band_rep(model, band.rank, band.matrix(), F.char))
    reps = {d: direct_sum(rs) for d, rs in by_degree.items()}
    return CyclicModel(F.C, model, reps, F.char)


def decompose_cyclic(model: CyclicModel) -> CircleSheaf:
    """String/band decomposition of a cyclic model into a canonical sheaf."""
    n_strata = len(model.model.strata)
    for d, rep in model.reps.items():
        if len(rep.dims) != n_strata or len(rep.mats) != len(model.model.edges):
            raise ValueError(f"inconsistent cyclic model in degree {d}")
        for ei, (pt, op, _side) in enumerate(model.model.edges):
            mat = rep.mats[ei]
            if len(mat) != rep.dims[op] or \
                    any(len(row) != rep.dims[pt] for row in mat):
                raise ValueError(f"inconsistent generization map in degree {d}")
    spirals = []
    bands = []
    for d, rep in sorted(model.reps.items()):
        try:
            strings, bnds = decompose_cyclic_rep(rep)
        except AssertionError as exc:
            raise ValueError(f"inconsistent cyclic model: {exc}") from None
        spirals.extend(Bar(iv, d) for iv in strings)
        bands.extend((rank, mono, d) for rank, mono in bnds)
    return CircleSheaf(model.C, spirals, bands, model.char)


# ---------------------------------------------------------------------------
# Thickening.

def circle_thicken(F: CircleSheaf, a, validate: bool = True) -> CircleSheaf:
    """Thicken by the signed rational a: bands are fixed, spirals follow the
    line rules on lifts.  Outputs are routed through the cyclic decomposition
    as a wrap-around validity check."""
    a = Fraction(a)
    out_spirals = [bar_rule(b, a) for b in F.spirals]
    out = CircleSheaf(F.C, out_spirals, F.bands, F.char)
    if validate and out.spirals:
        spiral_only = CircleSheaf(F.C, out.spirals, (), F.char)
        redecomposed = decompose_cyclic(cyclic_model_of(spiral_only))
        if redecomposed != spiral_only:
            raise AssertionError("thickened spirals fail cyclic re-decomposition")
    return out


def fourier_sato(F: CircleSheaf, direction: str = "forward") -> CircleSheaf:
    """Quarter-circumference thickening; forward and inverse are mutually
    inverse equivalences."""
    if direction not in ("forward", "inverse"):
        raise ValueError("direction must be 'forward' or 'inverse'")
    shift = F.C / 4 if direction == "forward" else -F.C / 4
    return circle_thicken(F, shift)


def circle_stalk_oracle(F: CircleSheaf, a, x) -> dict[int, int]:
    """Stalk dimensions of the a-thickening at x via the lift over
    [x-a, x+a]; valid for a below the half-circumference embedding bound."""
    a, x = Fraction(a), Fraction(x)
    if a < 0:
        raise ValueError("stalk oracle requires a >= 0")
    if 2 * a >= F.C:
        raise ValueError("ball does not embed; chain smaller steps instead")
    ball = Interval(x - a, CLOSED, x + a, CLOSED)
    dims: dict[int, int] = {}
    for b in F.spirals:
        lo = ((b.iv.left - (x + a)) / F.C).__floor__() - 1
        hi = ((b.iv.right - (x - a)) / F.C).__ceil__() + 1
        for n in range(lo, hi + 1):
            iv = b.iv
            shifted = Interval(iv.left - n * F.C, iv.lkind,
                               iv.right - n * F.C, iv.rkind)
            inter = intersect(ball, shifted)
            if inter is None:
                continue
            for off, cnt in rgamma_c_interval(inter).items():
                d = b.degree + off
                dims[d] = dims.get(d, 0) + cnt
    for band in F.bands:
        dims[band.degree] = dims.get(band.degree, 0) + band.rank
    return {d: n for d, n in sorted(dims.items()) if n}


def circle_global_sections(F: CircleSheaf) -> dict[int, int]:
    """Degree-wise dimensions of sections over the compact circle (equal to
    the compactly supported variant)."""
    cm = cyclic_model_of(F)
    dims: dict[int, int] = {}
    for d, rep in cm.reps.items():
        h0, h1 = rep_sections(rep)
        if h0:
            dims[d] = dims.get(d, 0) + h0
        if h1:
            dims[d + 1] = dims.get(d + 1, 0) + h1
    return {d: n for d, n in sorted(dims.items()) if n}


# ---------------------------------------------------------------------------
# Distance on the circle.

def circle_ops(C, char: int = 2) -> SpaceOps:
    C = Fraction(C)
    space = ("circle", C)
    norm = lambda bar: _normalize_lift(bar, C)

    def cthicken(F, a):
        return GradedBarcode([norm(bar_rule(b, Fraction(a))) for b in F.bars], F.char)

    def gate(F):
        sheaf = CircleSheaf(C, F.bars, (), F.char)
        g = circle_global_sections(sheaf)
        return (g, g)

    def grid(F, G):
        eps = F.finite_endpoints() + G.finite_endpoints()
        base = {Fraction(0)}
        for i, p in enumerate(eps):
            for q in eps[i:]:
                base.add(abs(p - q))
        vals = set()
        half = C / 2
        for v in base:
            for k in (-2, -1, 0, 1, 2):
                w = abs(v + k * half)
                if w <= 2 * C:
                    vals.add(w)
                    vals.add(w / 2)
        return sorted(vals)

    return SpaceOps(
        space=space,
        thicken=cthicken,
        thicken_indexed=partial(_thicken_indexed, normalize=norm),
        thicken_morphism=partial(_thicken_morphism, normalize=norm),
        restriction=partial(_restriction, space=space, normalize=norm),
        gate_dims=gate,
        grid=grid,
        normalize_bar=norm,
    )


def circle_distance(F: CircleSheaf, G: CircleSheaf,
                    budget: Budget = DEFAULT_BUDGET) -> DistanceBounds:
    """Interleaving distance bounds between circle sheaves.

    Fully supported for spiral-only content.  Band parts must agree up to
    isomorphism (locally constant summands are rigid under thickening, so a
    mismatch forces infinite distance); a common nonzero band part alongside
    spirals is out of scope.
    """
    if F.C != G.C or F.char != G.char:
        raise ValueError("circle sheaves live on different circles")
    if iso_equal_circle(F, G):
        from .interleave import identity_certificate
        ops = circle_ops(F.C, F.char)
        return DistanceBounds(Fraction(0), Fraction(0), True,
                              identity_certificate(F.spiral_barcode(), ops))
    if circle_global_sections(F) != circle_global_sections(G):
        return DistanceBounds(POS_INF, POS_INF, True, None)
    if F.bands != G.bands:
        # a finite-distance locally constant summand must appear on both sides
        return DistanceBounds(POS_INF, POS_INF, True, None)
    if F.bands:
        raise UnsupportedBandContentError(
            "distance with a common nontrivial band part is not supported")
    ops = circle_ops(F.C, F.char)
    return _distance(F.spiral_barcode(), G.spiral_barcode(), budget, ops)
