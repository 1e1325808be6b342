"""The operation algebra on molecules and regular directed complexes.

Every constructor returns a new OgPoset in canonical labelling (pushout
elements are numbered left part first, then non-glued right part, each in
source order within every dimension) together with the structural maps, so
repeated runs are bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ogposet import (
    OgPoset, ClosedSubset, PosetMap, bits, find_isomorphism,
)
from .molecule import (
    MoleculeCert, NotAMolecule, is_molecule, has_spherical_boundary,
    find_submolecule,
)


class BoundaryMismatch(ValueError):
    pass


class NotASubmolecule(ValueError):
    pass


class NotSpherical(ValueError):
    pass


class NotClosed(ValueError):
    pass


# the arrow: 0 source vertex, 1 target vertex, 2 edge
_O1 = OgPoset((0, 0, 1), (0, 0, 0b001), (0, 0, 0b010))


def _require_molecule(p: OgPoset) -> MoleculeCert:
    cert = is_molecule(p.whole())
    if cert is None:
        raise NotAMolecule("input complex is not a molecule")
    return cert


def _require_spherical(cert: MoleculeCert) -> MoleculeCert:
    if not has_spherical_boundary(cert):
        raise NotSpherical("molecule does not have spherical boundary")
    return cert


def amalgamate(parts: list[OgPoset],
               joins: list[tuple[int, list[int], int, list[int]]]
               ) -> tuple[OgPoset, list[PosetMap]]:
    """Pushout of inclusions: glue ``parts`` along element identifications.

    Each join is (a, elems_a, b, elems_b): element elems_a[i] of parts[a]
    is identified with elems_b[i] of parts[b].  Returns the glued poset and
    the inclusion of every part.
    """
    offsets = []
    total = 0
    for p in parts:
        offsets.append(total)
        total += p.size

    uf = list(range(total))

    def find(x):
        while uf[x] != x:
            uf[x] = uf[uf[x]]
            x = uf[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            uf[max(rx, ry)] = min(rx, ry)

    for a, ea, b, eb in joins:
        if len(ea) != len(eb):
            raise ValueError("identification lists differ in length")
        for x, y in zip(ea, eb):
            union(offsets[a] + x, offsets[b] + y)

    def part_of(g):
        for pi in range(len(parts) - 1, -1, -1):
            if g >= offsets[pi]:
                return pi, g - offsets[pi]
        raise AssertionError

    roots = sorted({find(g) for g in range(total)})
    members: dict[int, list[int]] = {r: [] for r in roots}
    for g in range(total):
        members[find(g)].append(g)

    def class_dim(r):
        pi, i = part_of(members[r][0])
        return parts[pi].dims[i]

    for r in roots:
        d0 = class_dim(r)
        for g in members[r]:
            pi, i = part_of(g)
            if parts[pi].dims[i] != d0:
                raise BoundaryMismatch(
                    "identified elements have different dimensions")

    order = sorted(roots, key=lambda r: (class_dim(r), members[r][0]))
    pos = {r: i for i, r in enumerate(order)}

    dims, fm, fp = [], [], []
    for r in order:
        dims.append(class_dim(r))
        m_sets, p_sets = set(), set()
        first = True
        for g in members[r]:
            pi, i = part_of(g)
            part = parts[pi]
            ms = {pos[find(offsets[pi] + j)] for j in bits(part.faces_minus[i])}
            ps = {pos[find(offsets[pi] + j)] for j in bits(part.faces_plus[i])}
            if first:
                m_sets, p_sets = ms, ps
                first = False
            elif (ms, ps) != (m_sets, p_sets):
                raise BoundaryMismatch(
                    "glued elements disagree on their faces")
        fm.append(sum(1 << j for j in m_sets))
        fp.append(sum(1 << j for j in p_sets))
    whole = OgPoset(dims, fm, fp)

    incls = []
    for pi, part in enumerate(parts):
        incls.append(PosetMap(part, whole, tuple(
            pos[find(offsets[pi] + i)] for i in range(part.size))))
    return whole, incls


@dataclass(frozen=True)
class PastingResult:
    whole: OgPoset
    left_incl: PosetMap
    right_incl: PosetMap
    k: int


def _boundary_iso(a: ClosedSubset, b: ClosedSubset) -> dict[int, int]:
    """Unique isomorphism between two molecule subsets, as an ambient map."""
    pa, ia = a.extract()
    pb, ib = b.extract()
    iso = find_isomorphism(pa, pb)
    if iso is None:
        raise BoundaryMismatch("boundaries are not isomorphic")
    return {ia.assignment[i]: ib.assignment[iso(i)] for i in range(pa.size)}


def paste(u: OgPoset, v: OgPoset, k: int) -> PastingResult:
    """Glue v after u along bd+_k(u) = bd-_k(v)."""
    _require_molecule(u)
    _require_molecule(v)
    bu = u.whole().boundary(+1, k)
    bv = v.whole().boundary(-1, k)
    pairing = _boundary_iso(bu, bv)
    ea = sorted(pairing)
    eb = [pairing[x] for x in ea]
    whole, (ju, jv) = amalgamate([u, v], [(0, ea, 1, eb)])
    return PastingResult(whole, ju, jv, k)


def paste_along(u1: OgPoset, u2: OgPoset, v: ClosedSubset, sign: int
                ) -> PastingResult:
    """Paste u1 onto the submolecule v of the sign-boundary of u2.

    For sign = -1 the output boundary of u1 is glued onto v inside the
    input boundary of u2 (u1 feeds u2); dually for sign = +1.
    """
    _require_molecule(u1)
    _require_molecule(u2)
    if v.parent != u2:
        raise NotASubmolecule("v must be a subset of u2")
    cv = is_molecule(v)
    if cv is None:
        raise NotASubmolecule("v is not a molecule")
    bd2 = u2.whole().boundary(sign)
    cb = is_molecule(bd2)
    if cb is None or find_submolecule(cv, cb) is None:
        raise NotASubmolecule("v is not a submolecule of the boundary")
    bu1 = u1.whole().boundary(-sign)
    pairing = _boundary_iso(bu1, v)
    ea = sorted(pairing)
    eb = [pairing[x] for x in ea]
    whole, (j1, j2) = amalgamate([u1, u2], [(0, ea, 1, eb)])
    return PastingResult(whole, j1, j2, u1.dim - 1)


@dataclass(frozen=True)
class SubstitutionResult:
    whole: OgPoset
    kept: dict[int, int]      # index in u -> index in whole, off the interior
    w_incl: PosetMap


def substitute(u: OgPoset, v: ClosedSubset, w: OgPoset) -> SubstitutionResult:
    """Replace the submolecule v of u by w, glued along their boundaries."""
    cu = _require_molecule(u)
    if v.parent != u:
        raise NotASubmolecule("v must be a subset of u")
    cv = is_molecule(v)
    if cv is None:
        raise NotASubmolecule("v is not a molecule")
    cw = _require_molecule(w)
    if not (u.dim == v.dim == w.dim):
        raise BoundaryMismatch("substitution requires equal dimensions")
    _require_spherical(cv)
    _require_spherical(cw)
    if find_submolecule(cv, cu) is None:
        raise NotASubmolecule("v is not a submolecule of u")

    wv = w.whole()
    pairing: dict[int, int] = {}
    for sign in (-1, +1):
        for x, y in _boundary_iso(v.boundary(sign), wv.boundary(sign)).items():
            if pairing.setdefault(x, y) != y:
                raise BoundaryMismatch(
                    "input/output boundary isomorphisms disagree")

    interior = v.mask & ~v.boundary().mask
    kept_mask = u.all_mask & ~interior
    if u.closure_mask(kept_mask) != kept_mask:
        raise NotASubmolecule("complement of the interior is not closed")
    kept_sub = ClosedSubset(u, kept_mask)
    kpos, kincl = kept_sub.extract()
    back = {e: i for i, e in enumerate(kincl.assignment)}
    ea = sorted(back[x] for x in pairing)
    eb = [pairing[kincl.assignment[i]] for i in ea]
    whole, (jk, jw) = amalgamate([kpos, w], [(0, ea, 1, eb)])
    kept = {kincl.assignment[i]: jk.assignment[i] for i in range(kpos.size)}
    return SubstitutionResult(whole, kept, jw)


@dataclass(frozen=True)
class CeltoResult:
    whole: OgPoset
    minus_incl: PosetMap
    plus_incl: PosetMap
    top: int


def celto(u: OgPoset, v: OgPoset) -> CeltoResult:
    """The atom u => v: glue u and v along their boundaries, add a top cell."""
    cu = _require_spherical(_require_molecule(u))
    cv = _require_spherical(_require_molecule(v))
    if u.dim != v.dim:
        raise BoundaryMismatch("celto requires equal dimensions")
    n = u.dim
    uw, vw = u.whole(), v.whole()
    pairing: dict[int, int] = {}
    for sign in (-1, +1):
        for x, y in _boundary_iso(uw.boundary(sign), vw.boundary(sign)).items():
            if pairing.setdefault(x, y) != y:
                raise BoundaryMismatch(
                    "input/output boundary isomorphisms disagree")
    ea = sorted(pairing)
    eb = [pairing[x] for x in ea]
    glued, (ju, jv) = amalgamate([u, v], [(0, ea, 1, eb)])

    dims = list(glued.dims) + [n + 1]
    fm = list(glued.faces_minus)
    fp = list(glued.faces_plus)
    top_minus = sum(1 << ju.assignment[i] for i in bits(u.dim_mask(n)))
    top_plus = sum(1 << jv.assignment[i] for i in bits(v.dim_mask(n)))
    fm.append(top_minus)
    fp.append(top_plus)
    whole = OgPoset(dims, fm, fp)
    lift = lambda m: PosetMap(m.source, whole, m.assignment)
    return CeltoResult(whole, lift(ju), lift(jv), whole.size - 1)


def compos(u: OgPoset) -> OgPoset:
    """The atom <u> with the same boundaries as the spherical molecule u."""
    _require_spherical(_require_molecule(u))
    bm, _ = u.whole().boundary(-1).extract()
    bp, _ = u.whole().boundary(+1).extract()
    return celto(bm, bp).whole


# -- Gray products, joins, suspensions, duals ---------------------------


def gray_with_index(p: OgPoset, q: OgPoset
                    ) -> tuple[OgPoset, dict[tuple[int, int], int]]:
    """Gray product plus the (p element, q element) -> product element map."""
    pairs = [(i, j) for i in range(p.size) for j in range(q.size)]
    pairs.sort(key=lambda t: (p.dims[t[0]] + q.dims[t[1]], t[0], t[1]))
    idx = {t: n for n, t in enumerate(pairs)}
    dims, fm, fp = [], [], []
    for (i, j) in pairs:
        dims.append(p.dims[i] + q.dims[j])
        m = sum(1 << idx[(i2, j)] for i2 in bits(p.faces_minus[i]))
        pl = sum(1 << idx[(i2, j)] for i2 in bits(p.faces_plus[i]))
        # second factor: orientation twisted by the first factor's dimension
        qm, qp = q.faces_minus[j], q.faces_plus[j]
        if p.dims[i] % 2:
            qm, qp = qp, qm
        m |= sum(1 << idx[(i, j2)] for j2 in bits(qm))
        pl |= sum(1 << idx[(i, j2)] for j2 in bits(qp))
        fm.append(m)
        fp.append(pl)
    return OgPoset(dims, fm, fp), idx


def gray(p: OgPoset, q: OgPoset) -> OgPoset:
    return gray_with_index(p, q)[0]


def gray_map(f: PosetMap, g: PosetMap) -> PosetMap:
    src, sidx = gray_with_index(f.source, g.source)
    tgt, tidx = gray_with_index(f.target, g.target)
    assign = [0] * src.size
    for (i, j), n in sidx.items():
        assign[n] = tidx[(f(i), g(j))]
    return PosetMap(src, tgt, tuple(assign))


def gray_boundary_check(u: OgPoset, v: OgPoset, k: int, sign: int) -> bool:
    """bd_k(u (x) v) must be the union of bd_i u (x) bd_{k-i} v with the
    alternating sign rule on the second factor."""
    prod, idx = gray_with_index(u, v)
    lhs = prod.whole().boundary(sign, k).mask
    rhs = 0
    for i in range(k + 1):
        s2 = sign if i % 2 == 0 else -sign
        bu = u.whole().boundary(sign, i).mask
        bv = v.whole().boundary(s2, k - i).mask
        for a in bits(bu):
            for b in bits(bv):
                rhs |= 1 << idx[(a, b)]
    return lhs == rhs


def join_with_index(p: OgPoset, q: OgPoset
                    ) -> tuple[OgPoset, dict[tuple[int, int], int]]:
    """Join plus the pair index; -1 stands for the absent factor.

    Derived from the Gray product of the two posets with a least element
    adjoined: the bottom gets orientation + under every vertex, and the
    first factor's dimension shifts by one in the sign rule.
    """
    pairs = [(i, j) for i in [-1] + list(range(p.size))
             for j in [-1] + list(range(q.size))if (i, j) != (-1, -1)]

    def pdim(i):
        return p.dims[i] if i >= 0 else -1

    def qdim(j):
        return q.dims[j] if j >= 0 else -1

    pairs.sort(key=lambda t: (pdim(t[0]) + qdim(t[1]) + 1, t[0], t[1]))
    idx = {t: n for n, t in enumerate(pairs)}
    dims, fm, fp = [], [], []
    for (i, j) in pairs:
        dims.append(pdim(i) + qdim(j) + 1)
        m = pl = 0
        if i >= 0:
            for i2 in bits(p.faces_minus[i]):
                m |= 1 << idx[(i2, j)]
            for i2 in bits(p.faces_plus[i]):
                pl |= 1 << idx[(i2, j)]
            if p.dims[i] == 0 and j >= 0:
                pl |= 1 << idx[(-1, j)]
        if j >= 0:
            flip = (pdim(i) + 1) % 2 == 1
            qm, qp = q.faces_minus[j], q.faces_plus[j]
            if flip:
                qm, qp = qp, qm
            for j2 in bits(qm):
                m |= 1 << idx[(i, j2)]
            for j2 in bits(qp):
                pl |= 1 << idx[(i, j2)]
            if q.dims[j] == 0 and i >= 0:
                if flip:
                    m |= 1 << idx[(i, -1)]
                else:
                    pl |= 1 << idx[(i, -1)]
        fm.append(m)
        fp.append(pl)
    return OgPoset(dims, fm, fp), idx


def join(p: OgPoset, q: OgPoset) -> OgPoset:
    return join_with_index(p, q)[0]


def join_map(f: PosetMap, g: PosetMap) -> PosetMap:
    src, sidx = join_with_index(f.source, g.source)
    tgt, tidx = join_with_index(f.target, g.target)
    assign = [0] * src.size
    for (i, j), n in sidx.items():
        assign[n] = tidx[(f(i) if i >= 0 else -1, g(j) if j >= 0 else -1)]
    return PosetMap(src, tgt, tuple(assign))


def join_boundary_check(u: OgPoset, v: OgPoset, k: int, sign: int) -> bool:
    """The even/odd case split for boundaries of a join of molecules."""
    prod, idx = join_with_index(u, v)
    lhs = prod.whole().boundary(sign, k).mask

    def embed(bu, bv):
        out = 0
        for a in bits(bu):
            out |= 1 << idx[(a, -1)]
        for b in bits(bv):
            out |= 1 << idx[(-1, b)]
        for a in bits(bu):
            for b in bits(bv):
                out |= 1 << idx[(a, b)]
        return out

    rhs = 0
    for i in range(1, k + 1):
        s2 = sign if i % 2 == 0 else -sign
        rhs |= embed(u.whole().boundary(sign, i - 1).mask,
                     v.whole().boundary(s2, k - i).mask)
    if sign == -1:
        if k % 2 == 0:
            rhs |= embed(u.whole().boundary(-1, k).mask, 0)
    else:
        rhs |= embed(0, v.whole().boundary(+1, k).mask)
        if k % 2 == 1:
            rhs |= embed(u.whole().boundary(+1, k).mask, 0)
    return lhs == rhs


def suspend(p: OgPoset) -> OgPoset:
    """Two new poles below a shifted copy of p; pole signs match their name."""
    dims = [0, 0] + [d + 1 for d in p.dims]
    fm = [0, 0]
    fp = [0, 0]
    for i in range(p.size):
        if p.dims[i] == 0:
            fm.append(0b01)
            fp.append(0b10)
        else:
            fm.append(p.faces_minus[i] << 2)
            fp.append(p.faces_plus[i] << 2)
    return OgPoset(dims, fm, fp)


def suspend_map(f: PosetMap) -> PosetMap:
    return PosetMap(suspend(f.source), suspend(f.target),
                    (0, 1) + tuple(a + 2 for a in f.assignment))


def dual(p: OgPoset, dims_to_flip) -> OgPoset:
    """Reverse the orientation of all covering edges out of the named dims."""
    flip = set(dims_to_flip)
    if any(d <= 0 for d in flip):
        raise ValueError("only positive dimensions can be dualized")
    fm = [p.faces_plus[i] if p.dims[i] in flip else p.faces_minus[i]
          for i in range(p.size)]
    fp = [p.faces_minus[i] if p.dims[i] in flip else p.faces_plus[i]
          for i in range(p.size)]
    return OgPoset(p.dims, fm, fp)


def op(p: OgPoset) -> OgPoset:
    return dual(p, range(1, p.dim + 1, 2))


def co(p: OgPoset) -> OgPoset:
    return dual(p, range(2, p.dim + 1, 2))


def op_all(p: OgPoset) -> OgPoset:
    return dual(p, range(1, p.dim + 1))


# -- cylinders, quotients, units ----------------------------------------


def cylinder_quotient(p: OgPoset, v: ClosedSubset
                      ) -> tuple[OgPoset, PosetMap]:
    """Collapse the cylinder over p onto p along the fibres over v.

    In the product arrow x p, each fibre {source, edge, target} x {x} with
    x in v becomes a single element.  The quotient inherits dimensions from
    the collapsed representatives and orientations from any product
    covering edge between distinct classes one dimension apart.
    """
    if v.parent != p:
        raise NotClosed("v must be a subset of p")
    if p.closure_mask(v.mask) != v.mask:
        raise NotClosed("v is not closed")
    cyl, idx = gray_with_index(_O1, p)

    # fibres over distinct base elements never overlap, so representatives
    # can be assigned directly
    rep = list(range(cyl.size))
    collapsed_top = 0
    for x in bits(v.mask):
        a, b, c = idx[(0, x)], idx[(1, x)], idx[(2, x)]
        r = min(a, b, c)
        rep[a] = rep[b] = rep[c] = r
        collapsed_top |= 1 << c

    def find(x):
        return rep[x]

    roots = sorted({find(x) for x in range(cyl.size)})
    memb: dict[int, list[int]] = {r: [] for r in roots}
    for x in range(cyl.size):
        memb[find(x)].append(x)

    def class_dim(r):
        return min(cyl.dims[x] for x in memb[r])

    order = sorted(roots, key=lambda r: (class_dim(r), r))
    pos = {r: i for i, r in enumerate(order)}
    dims = [class_dim(r) for r in order]

    fm = [0] * len(order)
    fp = [0] * len(order)
    sign_seen: dict[tuple[int, int], int] = {}
    for y in range(cyl.size):
        ry = find(y)
        for sgn, faces in ((-1, cyl.faces_minus[y]), (+1, cyl.faces_plus[y])):
            for x in bits(faces):
                rx = find(x)
                if rx == ry:
                    continue
                if class_dim(ry) != class_dim(rx) + 1:
                    continue  # implied by shorter edges after collapse
                if (collapsed_top >> y & 1) and (collapsed_top >> x & 1):
                    # edge between the top copies of two collapsed fibres:
                    # its twisted sign loses to the base-copy representatives
                    continue
                key = (pos[ry], pos[rx])
                if sign_seen.setdefault(key, sgn) != sgn:
                    raise BoundaryMismatch(
                        "cylinder quotient produced an orientation clash")
                if sgn < 0:
                    fm[pos[ry]] |= 1 << pos[rx]
                else:
                    fp[pos[ry]] |= 1 << pos[rx]
    quot = OgPoset(dims, fm, fp)
    q = PosetMap(cyl, quot, tuple(pos[find(x)] for x in range(cyl.size)))
    return quot, q


@dataclass(frozen=True)
class InflateResult:
    whole: OgPoset
    tau: PosetMap          # collapse back onto the base
    iota_minus: PosetMap   # base as the input boundary
    iota_plus: PosetMap    # base as the output boundary


def inflate(u: OgPoset) -> InflateResult:
    """The cylinder over u collapsed along the whole boundary: u => u as a
    shape, with its retraction and the two boundary inclusions."""
    _require_spherical(_require_molecule(u))
    quot, q = cylinder_quotient(u, u.whole().boundary())
    _, idx = gray_with_index(_O1, u)
    tau_assign = [0] * quot.size
    for (i, x), n in idx.items():
        tau_assign[q(n)] = x
    tau = PosetMap(quot, u, tuple(tau_assign))
    iminus = PosetMap(u, quot, tuple(q(idx[(0, x)]) for x in range(u.size)))
    iplus = PosetMap(u, quot, tuple(q(idx[(1, x)]) for x in range(u.size)))
    return InflateResult(quot, tau, iminus, iplus)


def inflate_map(p: PosetMap) -> PosetMap:
    """Lift a surjection of same-dimensional atoms through the inflation."""
    if p.source.dim != p.target.dim:
        raise ValueError("inflation lifts only same-dimensional surjections")
    if not p.is_surjective:
        raise ValueError("inflation lifts only surjections")
    src = inflate(p.source)
    tgt = inflate(p.target)
    _, sidx = gray_with_index(_O1, p.source)
    _, tidx = gray_with_index(_O1, p.target)
    squot, sq = cylinder_quotient(p.source, p.source.whole().boundary())
    tquot, tq = cylinder_quotient(p.target, p.target.whole().boundary())
    assign = [None] * squot.size
    for (i, x), n in sidx.items():
        a = tq(tidx[(i, p(x))])
        c = sq(n)
        if assign[c] is None:
            assign[c] = a
        elif assign[c] != a:
            raise BoundaryMismatch("map does not descend to the quotient")
    return PosetMap(src.whole, tgt.whole, tuple(assign))


def unitor_shape(u: OgPoset, v: ClosedSubset, side: str, sign: int
                 ) -> tuple[OgPoset, PosetMap]:
    """Left/right unit cylinder over u at the boundary submolecule v.

    The +-variant on the left (and the --variant on the right) is the
    cylinder quotient collapsing everything outside v's interior; the other
    variants are its top-dimensional dual with the reversed retraction.
    """
    cu = _require_spherical(_require_molecule(u))
    if v.parent != u:
        raise NotASubmolecule("v must live in u")
    cv = is_molecule(v)
    if cv is None:
        raise NotASubmolecule("v is not a molecule")
    _require_spherical(cv)
    if v.dim != u.dim - 1:
        raise BoundaryMismatch("v must sit one dimension below u")
    bd_sign = -1 if side == "left" else +1
    bd = u.whole().boundary(bd_sign)
    cb = is_molecule(bd)
    if cb is None or find_submolecule(cv, cb) is None:
        raise NotASubmolecule(f"v is not a submolecule of the {side} boundary")
    w = u.whole().boundary() - (v - v.boundary())
    shape, q = cylinder_quotient(u, w)
    _, idx = gray_with_index(_O1, u)
    retr_assign = [0] * shape.size
    for (i, x), n in idx.items():
        retr_assign[q(n)] = x
    retr = PosetMap(shape, u, tuple(retr_assign))
    base_sign = +1 if side == "left" else -1
    if sign == base_sign:
        return shape, retr
    return dual(shape, [u.dim + 1]), reverse_map(retr)


def reverse_map(p: PosetMap) -> PosetMap:
    """The reverse of a dimension-dropping surjection: same assignment, the
    source dualized at its top dimension (input and output swap there)."""
    if not p.is_surjective:
        raise ValueError("reverse is defined for surjective maps")
    n = p.source.dim
    if n <= p.target.dim:
        raise ValueError("reverse needs a dimension drop")
    return PosetMap(dual(p.source, [n]), p.target, p.assignment)
