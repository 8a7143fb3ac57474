"""Morphisms between graded barcodes.

A morphism is a block matrix indexed by (source bar, target bar) where each
block is a scalar multiple of the canonical generator of the corresponding
Hom space.  Hom spaces between shifted interval sheaves are at most
one-dimensional; blocks come in two kinds, degree preserving ('h') and
degree dropping by one ('e', extension classes).  Composition multiplies
blocks through structure constants computed once per endpoint order type in
the finite quiver model and cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import fieldmath as fm
from .barcode import Bar, GradedBarcode, Interval
from .model import (CircleModel, LineModel, Rep, RepPair, circle_spiral_rep,
                    extension_class_of, extension_rep, line_bar_rep,
                    refine_rep)
from .scalars import is_finite
from .thicken import bar_rule, halfopen_translation_kills

LINE = "line"


class UnsupportedHomError(ValueError):
    """Raised when a Hom space falls outside the supported (dim <= 1) regime."""


# ---------------------------------------------------------------------------
# Models and shape keys.

def _finite_endpoints(ivs):
    out = set()
    for iv in ivs:
        for x in (iv.left, iv.right):
            if is_finite(x):
                out.add(x)
    return out


def build_model(space, ivs):
    pts = _finite_endpoints(ivs)
    if space == LINE:
        return LineModel(pts)
    _, C = space
    return CircleModel(C, pts if pts else [Fraction(0)])


def bar_rep(space, model, iv: Interval, p: int) -> Rep:
    if space == LINE:
        return line_bar_rep(model, iv, p)
    return circle_spiral_rep(model, iv, p)


def _iv_token(iv: Interval, ranks) -> str:
    def tok(x, kind):
        if not is_finite(x):
            return "-" if x < 0 else "+"
        return f"{ranks[x]}{'c' if kind.name == 'CLOSED' else 'o'}"
    return tok(iv.left, iv.lkind) + tok(iv.right, iv.rkind)


def shape_key(ivs) -> str:
    vals = sorted(_finite_endpoints(ivs))
    ranks = {v: i for i, v in enumerate(vals)}
    return "|".join(_iv_token(iv, ranks) for iv in ivs)


def _cache_key(space, p, ivs):
    if space == LINE:
        return (LINE, p, shape_key(ivs))
    return (space, p, tuple((iv.left, iv.lkind, iv.right, iv.rkind) for iv in ivs))


# ---------------------------------------------------------------------------
# Cached pair data.

class PairData:
    """Hom/Ext spaces of an ordered interval pair on its minimal model."""

    def __init__(self, space, ivA: Interval, ivB: Interval, p: int):
        self.space = space
        self.ivA, self.ivB, self.p = ivA, ivB, p
        model = build_model(space, [ivA, ivB])
        self.model = model
        self.pair = RepPair(bar_rep(space, model, ivA, p), bar_rep(space, model, ivB, p))
        if self.pair.hom_dim > 1 or self.pair.ext_dim > 1:
            raise UnsupportedHomError(
                f"hom space dimension exceeds 1 for {ivA} -> {ivB}: "
                f"hom={self.pair.hom_dim}, ext={self.pair.ext_dim}")
        self.hom_dim = self.pair.hom_dim
        self.ext_dim = self.pair.ext_dim
        self._ext_rep = None
        if self.ext_dim == 1:
            gvec = self.pair.ext_canonical_generator_vector()
            gvec = self._pairing_normalize(gvec)
            self._ext_rep = extension_rep(self.pair, gvec)

    def _pairing_normalize(self, gvec):
        """Scale the Ext generator so its section-complex connecting pairing
        equals one; this makes the coefficient convention coherent under
        composition at every characteristic (not just F_2).  Applies to the
        degeneration patterns (closed source bar over an open target bar);
        other patterns keep the deterministic coset representative."""
        ivA, ivB, p = self.ivA, self.ivB, self.p
        closed_src = (ivA.is_bounded and ivA.lkind.name == "CLOSED"
                      and ivA.rkind.name == "CLOSED")
        open_tgt = (ivB.is_bounded and ivB.lkind.name == "OPEN"
                    and ivB.rkind.name == "OPEN")
        if not (closed_src and open_tgt):
            return gvec
        from .model import connecting_pairing
        s = connecting_pairing(self.pair, gvec)
        if not s:
            return gvec
        inv = fm.finv(s, p)
        return [(x * inv) % p for x in gvec]

    def ext_generator_rep(self) -> Rep:
        if self._ext_rep is None:
            raise ValueError("ext space is zero")
        return self._ext_rep


_PAIR_CACHE: dict = {}
_DIMS_CACHE: dict = {}
_STRUCT_CACHE: dict = {}


def _exact_key(space, p, ivs):
    return (space if space == LINE else space, p,
            tuple((iv.left, iv.lkind, iv.right, iv.rkind) for iv in ivs))


def pair_data(space, ivA: Interval, ivB: Interval, p: int) -> PairData:
    key = _exact_key(space, p, (ivA, ivB))
    data = _PAIR_CACHE.get(key)
    if data is None:
        data = PairData(space, ivA, ivB, p)
        _PAIR_CACHE[key] = data
    return data


def space_dim(space, ivA, ivB, kind, p: int) -> int:
    key = _cache_key(space, p, (ivA, ivB))
    dims = _DIMS_CACHE.get(key)
    if dims is None:
        d = pair_data(space, ivA, ivB, p)
        dims = (d.hom_dim, d.ext_dim)
        _DIMS_CACHE[key] = dims
    return dims[0] if kind == "h" else dims[1]


def _hom_gen_matrices(space, model, ivA, ivB, p):
    """Vertex matrices of the canonical Hom^0 generator, computed in ``model``."""
    rp = RepPair(bar_rep(space, model, ivA, p), bar_rep(space, model, ivB, p))
    if rp.hom_dim != 1:
        raise UnsupportedHomError(f"hom dim {rp.hom_dim} for {ivA} -> {ivB}")
    gen = rp.hom_generator()
    lead = [x for x in gen if x % p]
    if any(x != lead[0] for x in lead):
        raise UnsupportedHomError(f"non-indicator hom generator for {ivA} -> {ivB}")
    return rp, rp.vertex_matrices(gen)


def _ext_gen_reduced(space, model, shared_pair: RepPair, ivA, ivB, p):
    """Image in ``shared_pair`` of the pair-anchored Ext generator."""
    pd = pair_data(space, ivA, ivB, p)
    X = refine_rep(pd.ext_generator_rep(), model)
    evec = extension_class_of(shared_pair, X)
    red = shared_pair.ext_reduce(evec)
    if not any(red):
        raise AssertionError(f"ext generator transported to zero for {ivA} -> {ivB}")
    return red


def _scalar_on_ext(shared_pair: RepPair, gen_red, vec, p: int) -> int:
    red = shared_pair.ext_reduce(vec)
    if not any(red):
        return 0
    lead = next(i for i, x in enumerate(gen_red) if x % p)
    c = (red[lead] * fm.finv(gen_red[lead], p)) % p
    if red != [(c * x) % p for x in gen_red]:
        raise AssertionError("ext element not proportional to the generator")
    return c


def struct_scalar(space, p, ivA, ivB, ivC, kind1, kind2):
    """(target_kind, c) with gen2 o gen1 = c * gen(A->C); kinds in {'h','e'}."""
    if kind1 == "e" and kind2 == "e":
        return ("e", 0)
    key = (_cache_key(space, p, (ivA, ivB, ivC)), kind1, kind2)
    hit = _STRUCT_CACHE.get(key)
    if hit is not None:
        return hit
    target_kind = "h" if (kind1, kind2) == ("h", "h") else "e"
    model = build_model(space, [ivA, ivB, ivC])
    if target_kind == "h":
        rp1, m1 = _hom_gen_matrices(space, model, ivA, ivB, p)
        rp2, m2 = _hom_gen_matrices(space, model, ivB, ivC, p)
        comp = {s: fm.mat_mul(m2[s], m1[s], p) for s in m1}
        rpAC = RepPair(bar_rep(space, model, ivA, p), bar_rep(space, model, ivC, p))
        vec = [comp[s][j][i] if comp[s] else 0 for (s, j, i) in rpAC.vcoords]
        if not any(vec):
            out = ("h", 0)
        else:
            if rpAC.hom_dim != 1:
                raise UnsupportedHomError(
                    f"composite lands in a {rpAC.hom_dim}-dimensional Hom "
                    f"space: {ivA} -> {ivC}")
            gen = rpAC.hom_generator()
            lead = next(i for i, x in enumerate(gen) if x % p)
            c = (vec[lead] * fm.finv(gen[lead], p)) % p
            if vec != [(c * x) % p for x in gen]:
                raise AssertionError("hom composite not proportional to the generator")
            out = ("h", c)
    else:
        rpAC = RepPair(bar_rep(space, model, ivA, p), bar_rep(space, model, ivC, p))
        if rpAC.ext_dim == 0:
            out = ("e", 0)
        else:
            genAC = _ext_gen_reduced(space, model, rpAC, ivA, ivC, p)
            if kind1 == "e":           # ext then hom: push the class forward
                rpAB = RepPair(bar_rep(space, model, ivA, p), bar_rep(space, model, ivB, p))
                eredAB = _ext_gen_reduced(space, model, rpAB, ivA, ivB, p)
                emats = rpAB.edge_matrices(eredAB)
                _, psi = _hom_gen_matrices(space, model, ivB, ivC, p)
                pushed = {}
                for ei, mat in emats.items():
                    op = model.edges[ei][1]
                    pushed[ei] = fm.mat_mul(psi[op], mat, p)
                vec = rpAC.evec_from_edge_matrices(pushed)
            else:                       # hom then ext: pull the class back
                rpBC = RepPair(bar_rep(space, model, ivB, p), bar_rep(space, model, ivC, p))
                eredBC = _ext_gen_reduced(space, model, rpBC, ivB, ivC, p)
                emats = rpBC.edge_matrices(eredBC)
                _, phi = _hom_gen_matrices(space, model, ivA, ivB, p)
                pulled = {}
                for ei, mat in emats.items():
                    pt = model.edges[ei][0]
                    pulled[ei] = fm.mat_mul(mat, phi[pt], p)
                vec = rpAC.evec_from_edge_matrices(pulled)
            out = ("e", _scalar_on_ext(rpAC, genAC, vec, p))
    _STRUCT_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# Morphisms.

@dataclass(frozen=True)
class HomSpace:
    source: Bar
    target: Bar
    dimension: int
    offset: int


def _block_kind(src: Bar, tgt: Bar):
    off = src.degree - tgt.degree
    if off == 0:
        return "h"
    if off == 1:
        return "e"
    return None


class Morphism:
    """Block morphism between canonical graded barcodes."""

    __slots__ = ("source", "target", "space", "blocks")

    def __init__(self, source, target, blocks, space=LINE, validate: bool = True):
        self.source = source
        self.target = target
        self.space = space
        p = source.char
        clean = {}
        for (i, j, kind), c in blocks.items():
            c %= p
            if c == 0:
                continue
            sb, tb = source.bars[i], target.bars[j]
            if _block_kind(sb, tb) != kind:
                raise ValueError(f"block kind {kind} inconsistent with degrees "
                                 f"{sb.degree} -> {tb.degree}")
            if validate and space_dim(space, sb.iv, tb.iv, kind, p) == 0:
                raise ValueError(f"block on a zero Hom space: {sb} -> {tb}")
            clean[(i, j, kind)] = c
        self.blocks = clean

    @property
    def char(self):
        return self.source.char

    def is_zero(self) -> bool:
        return not self.blocks

    def __eq__(self, other):
        return (isinstance(other, Morphism) and self.space == other.space
                and self.source == other.source and self.target == other.target
                and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(self.blocks.items(),
                    key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])))))

    def __repr__(self):
        bl = ", ".join(f"{i}->{j}[{k}]:{c}" for (i, j, k), c in sorted(self.blocks.items()))
        return f"<Morphism {bl or '0'}>"

    def add(self, other: "Morphism") -> "Morphism":
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphism shape mismatch")
        p = self.char
        out = dict(self.blocks)
        for k, c in other.blocks.items():
            out[k] = (out.get(k, 0) + c) % p
        return Morphism(self.source, self.target, out, self.space, validate=False)

    def scale(self, c: int) -> "Morphism":
        p = self.char
        return Morphism(self.source, self.target,
                        {k: (v * c) % p for k, v in self.blocks.items()},
                        self.space, validate=False)


def identity_morphism(F, space=LINE) -> Morphism:
    return Morphism(F, F, {(i, i, "h"): 1 for i in range(len(F.bars))}, space,
                    validate=False)


def zero_morphism(F, G, space=LINE) -> Morphism:
    return Morphism(F, G, {}, space, validate=False)


def compose(m1: Morphism, m2: Morphism) -> Morphism:
    """Diagrammatic composition: apply m1 first, then m2."""
    if m1.target != m2.source or m1.space != m2.space:
        raise ValueError("morphisms not composable")
    p = m1.char
    space = m1.space
    out: dict = {}
    by_source = {}
    for (j, l, k2), c2 in m2.blocks.items():
        by_source.setdefault(j, []).append((l, k2, c2))
    for (i, j, k1), c1 in m1.blocks.items():
        mid = m1.target.bars[j]
        for (l, k2, c2) in by_source.get(j, ()):
            if k1 == "e" and k2 == "e":
                continue
            tkind, s = struct_scalar(space, p, m1.source.bars[i].iv, mid.iv,
                                     m2.target.bars[l].iv, k1, k2)
            if s == 0:
                continue
            key = (i, l, tkind)
            out[key] = (out.get(key, 0) + c1 * c2 * s) % p
    return Morphism(m1.source, m2.target, out, space, validate=False)


def thicken_indexed(F, a, normalize=None):
    """Thickened barcode together with the bar index map."""
    a = Fraction(a)
    rules = [bar_rule(b, a) for b in F.bars]
    if normalize is not None:
        rules = [normalize(b) for b in rules]
    order = sorted(range(len(rules)), key=lambda i: rules[i].sort_key())
    perm = [0] * len(rules)
    for rank, i in enumerate(order):
        perm[i] = rank
    return GradedBarcode(rules, F.char), perm


def thicken_morphism(m: Morphism, a, normalize=None) -> Morphism:
    """Apply the thickening endofunctor to a morphism.

    The functor is an equivalence, so each canonical-generator block maps to
    the canonical generator of the thickened pair with the same coefficient;
    block kinds can change when a bar crosses its degeneration parameter.
    """
    a = Fraction(a)
    src, perm_s = thicken_indexed(m.source, a, normalize)
    tgt, perm_t = thicken_indexed(m.target, a, normalize)
    p = m.char
    out = {}
    for (i, j, _kind), c in m.blocks.items():
        sb = src.bars[perm_s[i]]
        tb = tgt.bars[perm_t[j]]
        nk = _block_kind(sb, tb)
        if nk is None:
            raise AssertionError("thickened block leaves degree range")
        if space_dim(m.space, sb.iv, tb.iv, nk, p) == 0:
            raise AssertionError(f"thickening killed a Hom space: {sb} -> {tb}")
        key = (perm_s[i], perm_t[j], nk)
        out[key] = (out.get(key, 0) + c) % p
    return Morphism(src, tgt, out, m.space, validate=False)


def restriction(F, a, b, space=LINE, normalize=None) -> Morphism:
    """Canonical restriction morphism thicken(F, b) -> thicken(F, a), a <= b.

    Blockwise on each bar: coefficient one on the canonical generator except
    that half-open bars die once the translation distance reaches their
    length.
    """
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("restriction requires a <= b")
    src, perm_b = thicken_indexed(F, b, normalize)
    tgt, perm_a = thicken_indexed(F, a, normalize)
    p = F.char
    out = {}
    for i, bar in enumerate(F.bars):
        if halfopen_translation_kills(bar.iv, a, b):
            continue
        sb = src.bars[perm_b[i]]
        tb = tgt.bars[perm_a[i]]
        kind = _block_kind(sb, tb)
        if kind is None:
            raise AssertionError("restriction block leaves degree range")
        key = (perm_b[i], perm_a[i], kind)
        out[key] = (out.get(key, 0) + 1) % p
    return Morphism(src, tgt, out, space, validate=False)


# ---------------------------------------------------------------------------
# Hom dimensions: frozen shape table with live certification.

def hom_dim(b1: Bar, b2: Bar, char: int = 2) -> HomSpace:
    """Dimension of the Hom space between two shifted interval sheaves."""
    off = b1.degree - b2.degree
    if off not in (0, 1):
        return HomSpace(b1, b2, 0, off)
    key = shape_key((b1.iv, b2.iv))
    table = _hom_table()
    if key in table:
        h0, e1 = table[key]
    else:
        d = pair_data(LINE, b1.iv, b2.iv, char)
        h0, e1 = d.hom_dim, d.ext_dim
    return HomSpace(b1, b2, h0 if off == 0 else e1, off)


_TABLE = None


def _hom_table():
    global _TABLE
    if _TABLE is None:
        _TABLE = load_hom_table()
    return _TABLE


def _grid_intervals():
    from .barcode import (CLOSED, OPEN, closed, full_line, half_open,
                          half_open_r, open_iv, ray_left, ray_right, singleton)
    vals = [0, 1, 2, 3]
    out = [full_line()]
    for v in vals:
        out.append(singleton(v))
        out.append(ray_right(v, CLOSED))
        out.append(ray_right(v, OPEN))
        out.append(ray_left(v, CLOSED))
        out.append(ray_left(v, OPEN))
    for i, x in enumerate(vals):
        for y in vals[i + 1:]:
            out.extend([closed(x, y), open_iv(x, y), half_open(x, y),
                        half_open_r(x, y)])
    return out


def generate_hom_table(p: int = 2) -> dict[str, tuple[int, int]]:
    """Recompute the shape-keyed Hom/Ext dimension table from the quiver
    oracle (the regeneration command behind the frozen data file)."""
    table: dict[str, tuple[int, int]] = {}
    for ivA in _grid_intervals():
        for ivB in _grid_intervals():
            key = shape_key((ivA, ivB))
            model = build_model(LINE, [ivA, ivB])
            rp = RepPair(line_bar_rep(model, ivA, p), line_bar_rep(model, ivB, p))
            if rp.hom_dim > 1 or rp.ext_dim > 1:
                raise UnsupportedHomError(f"oracle reports dim > 1 at {ivA}, {ivB}")
            val = (rp.hom_dim, rp.ext_dim)
            if key in table and table[key] != val:
                raise AssertionError(f"shape key collision at {key}")
            table[key] = val
    return table


def hom_table_path():
    import importlib.resources as res
    return res.files("thicket").joinpath("data/hom_table.txt")


def load_hom_table() -> dict[str, tuple[int, int]]:
    table = {}
    text = hom_table_path().read_text()
    lines = text.splitlines()
    if not lines or lines[0].strip() != "thicket-homtable/1":
        raise ValueError("unrecognized hom table version")
    for line in lines[1:]:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, h0, e1 = line.split()
        table[key] = (int(h0), int(e1))
    return table


def dump_hom_table(table: dict[str, tuple[int, int]]) -> str:
    lines = ["thicket-homtable/1"]
    for key in sorted(table):
        h0, e1 = table[key]
        lines.append(f"{key} {h0} {e1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Brute-force RHom oracle.

def poset_oracle_rhom(F: GradedBarcode, G: GradedBarcode, space=LINE) -> dict[int, int]:
    """Degree-wise dimensions of RHom(F, G) computed in the quiver model,
    independently of the frozen tables."""
    if F.char != G.char:
        raise ValueError("characteristic mismatch")
    p = F.char
    dims: dict[int, int] = {}
    model = build_model(space, [b.iv for b in F.bars] + [b.iv for b in G.bars])
    for bf in F.bars:
        repf = bar_rep(space, model, bf.iv, p)
        for bg in G.bars:
            rp = RepPair(repf, bar_rep(space, model, bg.iv, p))
            n0 = bg.degree - bf.degree
            if rp.hom_dim:
                dims[n0] = dims.get(n0, 0) + rp.hom_dim
            if rp.ext_dim:
                dims[n0 + 1] = dims.get(n0 + 1, 0) + rp.ext_dim
    return {d: n for d, n in sorted(dims.items()) if n}
