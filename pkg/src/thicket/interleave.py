"""Interleaving certificates and two-sided distance bounds.

An a-certificate is a pair f: T_a F -> G, g: T_a G -> F whose 2a-composites
equal the canonical restrictions.  The distance scanner walks the critical
grid of endpoint differences and half-differences, takes the first verified
certificate as an upper bound, and claims exactness only when the exhaustive
search refutes the adjacent grid value below.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import fieldmath as fm
from .barcode import global_sections, global_sections_c, iso_equal
from .morphisms import (LINE, Morphism, UnsupportedHomError, _block_kind,
                        compose, identity_morphism, restriction, space_dim,
                        thicken_indexed, thicken_morphism)
from .scalars import POS_INF, is_finite
from .thicken import halfopen_translation_kills, thicken


class CapacityError(RuntimeError):
    """Exhaustive search was requested beyond the configured cap."""


@dataclass(frozen=True)
class Budget:
    max_unknowns: int = 24
    max_enumeration: int = 4096


DEFAULT_BUDGET = Budget()


@dataclass
class InterleavingCertificate:
    a: Fraction
    f: Morphism
    g: Morphism


@dataclass
class DistanceBounds:
    lower: object
    upper: object
    exact: bool
    witness: InterleavingCertificate | None = None
    conclusive: bool = True

    def fields(self):
        return (self.lower, self.upper, self.exact)


@dataclass(frozen=True)
class SpaceOps:
    """Space-dependent hooks shared by line and circle distance code."""
    space: object
    thicken: object
    thicken_indexed: object
    thicken_morphism: object
    restriction: object
    gate_dims: object
    grid: object
    normalize_bar: object = None


def _line_grid(F, G):
    eps = F.finite_endpoints() + G.finite_endpoints()
    vals = {Fraction(0)}
    for i, p in enumerate(eps):
        for q in eps[i:]:
            d = abs(p - q)
            vals.add(d)
            vals.add(d / 2)
    return sorted(vals)


LINE_OPS = SpaceOps(
    space=LINE,
    thicken=thicken,
    thicken_indexed=thicken_indexed,
    thicken_morphism=thicken_morphism,
    restriction=restriction,
    gate_dims=lambda F: (global_sections(F), global_sections_c(F)),
    grid=_line_grid,
)


# ---------------------------------------------------------------------------

def verify_certificate(F, G, cert: InterleavingCertificate, ops: SpaceOps = LINE_OPS) -> bool:
    """Exact check of the two 2a-composite identities."""
    a = Fraction(cert.a)
    if a < 0:
        return False
    TFa = ops.thicken(F, a)
    TGa = ops.thicken(G, a)
    if cert.f.source != TFa or cert.f.target != G:
        raise ValueError("certificate f has wrong shape")
    if cert.g.source != TGa or cert.g.target != F:
        raise ValueError("certificate g has wrong shape")
    lhs_f = compose(ops.thicken_morphism(cert.f, a), cert.g)
    if lhs_f != ops.restriction(F, 0, 2 * a):
        return False
    lhs_g = compose(ops.thicken_morphism(cert.g, a), cert.f)
    return lhs_g == ops.restriction(G, 0, 2 * a)


def identity_certificate(F, ops: SpaceOps = LINE_OPS) -> InterleavingCertificate:
    return InterleavingCertificate(Fraction(0), identity_morphism(F, ops.space),
                                   identity_morphism(F, ops.space))


def weaken_certificate(F, G, cert: InterleavingCertificate, b,
                       ops: SpaceOps = LINE_OPS) -> InterleavingCertificate:
    """Turn an a-certificate into a b-certificate for b >= a by composing
    with the canonical restrictions."""
    a, b = Fraction(cert.a), Fraction(b)
    if b < a:
        raise ValueError("weaken requires b >= a")
    f2 = compose(ops.restriction(F, a, b), cert.f)
    g2 = compose(ops.restriction(G, a, b), cert.g)
    return InterleavingCertificate(b, f2, g2)


# ---------------------------------------------------------------------------
# Strategy: block-diagonal matching.

def _pair_feasible(fbar, gbar, a, p, ops):
    """Scalars (alpha, beta) for a matched pair, or None.

    The pair's composites must hit the restriction coefficients of both bars
    exactly; either coefficient may be zero (a half-open bar past its
    length), in which case the corresponding composite has to vanish."""
    tf = _lift_rule(fbar, a, ops)
    tg = _lift_rule(gbar, a, ops)
    tff = _lift_rule(fbar, 2 * a, ops)
    tgg = _lift_rule(gbar, 2 * a, ops)
    k_f = _block_kind(tf, gbar)
    k_g = _block_kind(tg, fbar)
    if k_f is None or k_g is None:
        return None
    if space_dim(ops.space, tf.iv, gbar.iv, k_f, p) == 0:
        return None
    if space_dim(ops.space, tg.iv, fbar.iv, k_g, p) == 0:
        return None
    from .morphisms import struct_scalar
    k_tf = _block_kind(tff, tg)
    k_tg = _block_kind(tgg, tf)
    if k_tf is None or k_tg is None:
        return None
    _, s1 = struct_scalar(ops.space, p, tff.iv, tg.iv, fbar.iv, k_tf, k_g)
    _, s2 = struct_scalar(ops.space, p, tgg.iv, tf.iv, gbar.iv, k_tg, k_f)
    rF = 0 if halfopen_translation_kills(fbar.iv, 0, 2 * a) else 1
    rG = 0 if halfopen_translation_kills(gbar.iv, 0, 2 * a) else 1
    if rF == 0 and rG == 0:
        return None                 # both sides die: leave the bars unmatched
    if rF == 1:
        if s1 == 0:
            return None
        x = fm.finv(s1, p)
        if (s2 * x) % p != rG:
            return None
        return (1, x)
    # rF == 0, rG == 1: the f-side composite must vanish identically
    if s2 == 0 or s1 != 0:
        return None
    return (1, fm.finv(s2, p))


def _lift_rule(bar, a, ops):
    from .thicken import bar_rule
    b = bar_rule(bar, Fraction(a))
    return b if ops.normalize_bar is None else ops.normalize_bar(b)


def check_matching(F, G, a, ops: SpaceOps = LINE_OPS):
    a = Fraction(a)
    p = F.char
    nF, nG = len(F.bars), len(G.bars)
    killable_F = [halfopen_translation_kills(b.iv, 0, 2 * a) for b in F.bars]
    killable_G = [halfopen_translation_kills(b.iv, 0, 2 * a) for b in G.bars]
    feas = {}
    for i in range(nF):
        for j in range(nG):
            try:
                r = _pair_feasible(F.bars[i], G.bars[j], a, p, ops)
            except UnsupportedHomError:
                r = None              # matching may skip unsupported pairs
            if r is not None:
                feas[(i, j)] = r

    best = None

    def backtrack(i, used, pairs):
        nonlocal best
        if best is not None:
            return
        if i == nF:
            if all(killable_G[j] or j in used for j in range(nG)):
                best = list(pairs)
            return
        for j in range(nG):
            if j in used or (i, j) not in feas:
                continue
            pairs.append((i, j))
            used.add(j)
            backtrack(i + 1, used, pairs)
            used.discard(j)
            pairs.pop()
            if best is not None:
                return
        if killable_F[i]:
            backtrack(i + 1, used, pairs)

    backtrack(0, set(), [])
    if best is None:
        return None
    TFa, permF = ops.thicken_indexed(F, a)
    TGa, permG = ops.thicken_indexed(G, a)
    fblocks, gblocks = {}, {}
    for (i, j) in best:
        alpha, beta = feas[(i, j)]
        tf = TFa.bars[permF[i]]
        tg = TGa.bars[permG[j]]
        fblocks[(permF[i], j, _block_kind(tf, G.bars[j]))] = alpha
        gblocks[(permG[j], i, _block_kind(tg, F.bars[i]))] = beta
    cert = InterleavingCertificate(
        a,
        Morphism(TFa, G, fblocks, ops.space, validate=False),
        Morphism(TGa, F, gblocks, ops.space, validate=False))
    if verify_certificate(F, G, cert, ops):
        return cert
    return None


# ---------------------------------------------------------------------------
# Strategy: exhaustive bilinear search.

def _variables(X, TXa, permX, Y, p, space):
    out = []
    for i in range(len(X.bars)):
        src = TXa.bars[permX[i]]
        for j in range(len(Y.bars)):
            k = _block_kind(src, Y.bars[j])
            if k is None:
                continue
            if space_dim(space, src.iv, Y.bars[j].iv, k, p):
                out.append((i, j, k))
    return out


def check_exhaustive(F, G, a, ops: SpaceOps = LINE_OPS, budget: Budget = DEFAULT_BUDGET):
    """Complete search over block assignments; None means proven infeasible."""
    a = Fraction(a)
    p = F.char
    TFa, permFa = ops.thicken_indexed(F, a)
    TGa, permGa = ops.thicken_indexed(G, a)
    fvars = _variables(F, TFa, permFa, G, p, ops.space)
    gvars = _variables(G, TGa, permGa, F, p, ops.space)
    if len(fvars) + len(gvars) > budget.max_unknowns:
        raise CapacityError(
            f"{len(fvars)} + {len(gvars)} unknown blocks exceed the cap "
            f"{budget.max_unknowns}")
    if len(fvars) > len(gvars):
        # enumerate over the smaller side by swapping the roles of F and G
        res = _exhaustive_core(G, F, a, ops, budget)
        if res is None:
            return None
        return InterleavingCertificate(a, res.g, res.f)
    return _exhaustive_core(F, G, a, ops, budget)


def _exhaustive_core(F, G, a, ops, budget):
    from .morphisms import struct_scalar
    p = F.char
    TFa, permFa = ops.thicken_indexed(F, a)
    TGa, permGa = ops.thicken_indexed(G, a)
    TF2a, permF2a = ops.thicken_indexed(F, 2 * a)
    TG2a, permG2a = ops.thicken_indexed(G, 2 * a)
    fvars = _variables(F, TFa, permFa, G, p, ops.space)
    gvars = _variables(G, TGa, permGa, F, p, ops.space)
    if p ** len(fvars) > budget.max_enumeration:
        raise CapacityError(
            f"enumeration {p}^{len(fvars)} exceeds the cap {budget.max_enumeration}")

    # Tensor entries for the two composite equations.
    t1 = {}   # (fvar, gvar) -> (row key in Hom(T2a F, F), scalar)
    t2 = {}   # (gvar, fvar) -> (row key in Hom(T2a G, G), scalar)
    for fu in fvars:
        fi, gj, kf = fu
        src2 = TF2a.bars[permF2a[fi]]
        mid = TGa.bars[permGa[gj]]
        kft = _block_kind(src2, mid)
        if kft is None:
            continue
        for gv in gvars:
            gj2, fl, kg = gv
            if gj2 != gj:
                continue
            if kft == "e" and kg == "e":
                continue
            tk, s = struct_scalar(ops.space, p, src2.iv, mid.iv, F.bars[fl].iv, kft, kg)
            if s:
                t1.setdefault((fu, gv), []).append(((fi, fl, tk), s))
    for gv in gvars:
        gj, fi, kg = gv
        src2 = TG2a.bars[permG2a[gj]]
        mid = TFa.bars[permFa[fi]]
        kgt = _block_kind(src2, mid)
        if kgt is None:
            continue
        for fu in fvars:
            fi2, gl, kf = fu
            if fi2 != fi:
                continue
            if kgt == "e" and kf == "e":
                continue
            tk, s = struct_scalar(ops.space, p, src2.iv, mid.iv, G.bars[gl].iv, kgt, kf)
            if s:
                t2.setdefault((gv, fu), []).append(((gj, gl, tk), s))

    rho_F = {}
    for i, b in enumerate(F.bars):
        if not halfopen_translation_kills(b.iv, 0, 2 * a):
            rho_F[(i, i, _block_kind(TF2a.bars[permF2a[i]], b))] = 1
    rho_G = {}
    for j, b in enumerate(G.bars):
        if not halfopen_translation_kills(b.iv, 0, 2 * a):
            rho_G[(j, j, _block_kind(TG2a.bars[permG2a[j]], b))] = 1

    rows1 = sorted(set(list(rho_F) + [rk for v in t1.values() for rk, _ in v]))
    rows2 = sorted(set(list(rho_G) + [rk for v in t2.values() for rk, _ in v]))
    ridx1 = {r: k for k, r in enumerate(rows1)}
    ridx2 = {r: k for k, r in enumerate(rows2)}
    gidx = {v: k for k, v in enumerate(gvars)}
    fidx = {v: k for k, v in enumerate(fvars)}

    for assign in product(range(p), repeat=len(fvars)):
        mat = fm.zeros(len(rows1) + len(rows2), len(gvars))
        rhs = [0] * (len(rows1) + len(rows2))
        for r, key in enumerate(rows1):
            rhs[r] = rho_F.get(key, 0)
        for r, key in enumerate(rows2):
            rhs[len(rows1) + r] = rho_G.get(key, 0)
        for (fu, gv), terms in t1.items():
            c = assign[fidx[fu]]
            if c == 0:
                continue
            for (rk, s) in terms:
                mat[ridx1[rk]][gidx[gv]] = (mat[ridx1[rk]][gidx[gv]] + c * s) % p
        for (gv, fu), terms in t2.items():
            c = assign[fidx[fu]]
            if c == 0:
                continue
            for (rk, s) in terms:
                row = len(rows1) + ridx2[rk]
                mat[row][gidx[gv]] = (mat[row][gidx[gv]] + c * s) % p
        sol = fm.solve(mat, rhs, p)
        if sol is None:
            continue
        fblocks = {}
        for v, c in zip(fvars, assign):
            if c:
                fi, gj, kf = v
                fblocks[(permFa[fi], gj, kf)] = c
        gblocks = {}
        for v, c in zip(gvars, sol):
            if c:
                gj, fi, kg = v
                gblocks[(permGa[gj], fi, kg)] = c
        cert = InterleavingCertificate(
            a,
            Morphism(TFa, G, fblocks, ops.space, validate=False),
            Morphism(TGa, F, gblocks, ops.space, validate=False))
        if verify_certificate(F, G, cert, ops):
            return cert
        raise AssertionError("solver produced a certificate that fails verification")
    return None


def check_interleaving(F, G, a, strategy: str = "matching",
                       ops: SpaceOps = LINE_OPS, budget: Budget = DEFAULT_BUDGET):
    """Search for an a-certificate; any returned certificate is verified."""
    a = Fraction(a)
    if a < 0:
        raise ValueError("interleaving shift must be nonnegative")
    if strategy == "matching":
        return check_matching(F, G, a, ops)
    if strategy == "exhaustive":
        return check_exhaustive(F, G, a, ops, budget)
    raise ValueError(f"unknown strategy {strategy!r}")


# ---------------------------------------------------------------------------
# Distance.

def finite_gate(F, G, ops: SpaceOps = LINE_OPS) -> str:
    """'infinite' when global section dimensions differ, else 'pass'."""
    gf = ops.gate_dims(F)
    gg = ops.gate_dims(G)
    return "pass" if gf == gg else "infinite"


def critical_grid(F, G, ops: SpaceOps = LINE_OPS):
    return ops.grid(F, G)


def distance(F, G, budget: Budget = DEFAULT_BUDGET, ops: SpaceOps = LINE_OPS,
             log=None) -> DistanceBounds:
    """Scan the critical grid for the least certified shift.

    The returned ``exact`` flag means the first feasible grid value had its
    grid predecessor refuted exhaustively (or was 0); in that case lower is
    reported equal to upper.  Budget exhaustion degrades exactness, never
    soundness.
    """
    if iso_equal(F, G):
        return DistanceBounds(Fraction(0), Fraction(0), True,
                              identity_certificate(F, ops))
    if finite_gate(F, G, ops) == "infinite":
        return DistanceBounds(POS_INF, POS_INF, True, None)
    grid = critical_grid(F, G, ops)
    proven_infeasible = []
    unknown = []
    upper = POS_INF
    witness = None
    for aa in grid:
        try:
            cert = check_matching(F, G, aa, ops)
        except UnsupportedHomError:
            cert = None
        decided = cert is not None
        if not decided:
            try:
                cert = check_exhaustive(F, G, aa, ops, budget)
                decided = True
                if cert is not None and log is not None:
                    log.append(("matching-miss", aa))
            except CapacityError:
                unknown.append(aa)
                if log is not None:
                    log.append(("capacity", aa))
            except UnsupportedHomError:
                unknown.append(aa)
                if log is not None:
                    log.append(("unsupported", aa))
        if decided and cert is None:
            proven_infeasible.append(aa)
        if cert is not None:
            upper = aa
            witness = cert
            break
    if not is_finite(upper):
        lower = max(proven_infeasible) if proven_infeasible else Fraction(0)
        return DistanceBounds(lower, POS_INF, False, None,
                              conclusive=not unknown)
    below = [v for v in grid if v < upper]
    exact = (not below) or (below[-1] in proven_infeasible)
    if exact:
        return DistanceBounds(upper, upper, True, witness)
    lower = max(proven_infeasible) if proven_infeasible else Fraction(0)
    return DistanceBounds(lower, upper, False, witness, conclusive=not unknown)
