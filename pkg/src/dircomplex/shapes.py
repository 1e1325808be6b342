"""The standard shape families and the explicit maps between them.

Globes, simplices (addressed by bit strings), cubes, the compositor atoms,
the folding surjections from simplices onto globes and compositors, the
inflation towers used by the retraction squares, horns, and exhaustive map
enumeration between small atoms.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional

from .ogposet import (
    OgPoset, ClosedSubset, PosetMap, bits, find_isomorphism,
)
from .construct import (
    BoundaryMismatch, paste, paste_along, substitute, celto, gray,
    inflate, inflate_map,
)


@dataclass(frozen=True)
class BitString:
    """Address of a simplex element: which vertices the face uses."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if not any(self.bits) or any(b not in (0, 1) for b in self.bits):
            raise ValueError("need a nonzero 0/1 string")

    @property
    def dim(self) -> int:
        return sum(self.bits) - 1

    def faces(self, sign: int) -> list["BitString"]:
        """Drop one used vertex; the sign alternates with the prefix count."""
        out = []
        ones = 0
        for k, b in enumerate(self.bits):
            if b:
                want = +1 if ones % 2 == 0 else -1
                if want == sign and self.dim >= 1:
                    out.append(BitString(
                        self.bits[:k] + (0,) + self.bits[k + 1:]))
                ones += 1
        return out


# -- globes ---------------------------------------------------------------


def globe_element(n: int, k: int, sign: int) -> int:
    """Index of the k-dimensional sign-pole in the n-globe (top for k = n)."""
    if k == n:
        return 2 * n
    return 2 * k + (1 if sign > 0 else 0)


@lru_cache(maxsize=None)
def globe(n: int) -> OgPoset:
    """The n-globe: one input and one output pole in every lower dimension."""
    dims, fm, fp = [], [], []
    for k in range(n):
        for _ in range(2):
            dims.append(k)
            fm.append(0 if k == 0 else 1 << globe_element(n, k - 1, -1))
            fp.append(0 if k == 0 else 1 << globe_element(n, k - 1, +1))
    dims.append(n)
    fm.append(0 if n == 0 else 1 << globe_element(n, n - 1, -1))
    fp.append(0 if n == 0 else 1 << globe_element(n, n - 1, +1))
    return OgPoset(dims, fm, fp)


def globe_tau(n: int, k: int) -> PosetMap:
    """The unique surjection collapsing the n-globe onto the k-globe."""
    assign = []
    for j in range(n):
        for s in (-1, +1):
            assign.append(globe_element(k, j, s) if j < k
                          else globe_element(k, k, 0))
    assign.append(globe_element(k, k, 0))
    return PosetMap(globe(n), globe(k), tuple(assign))


def globe_incl(n: int, k: int, sign: int) -> PosetMap:
    """The k-globe as the sign-pole closure inside the n-globe."""
    assign = [globe_element(n, j, s)
              for j in range(k) for s in (-1, +1)]
    assign.append(globe_element(n, k, sign))
    return PosetMap(globe(k), globe(n), tuple(assign))


# -- simplices ------------------------------------------------------------


@lru_cache(maxsize=None)
def _simplex_elements(n: int) -> tuple[tuple[int, ...], ...]:
    elems = [b for b in product((0, 1), repeat=n + 1) if any(b)]
    elems.sort(key=lambda b: (sum(b), b))
    return tuple(elems)


@lru_cache(maxsize=None)
def _simplex_index_table(n: int) -> dict[tuple[int, ...], int]:
    return {b: i for i, b in enumerate(_simplex_elements(n))}


def simplex_bits(n: int, i: int) -> tuple[int, ...]:
    return _simplex_elements(n)[i]


def simplex_index(bits_: tuple[int, ...]) -> int:
    return _simplex_index_table(len(bits_) - 1)[bits_]


@lru_cache(maxsize=None)
def simplex(n: int) -> OgPoset:
    """The n-simplex, elements indexed by bit strings in lexicographic
    order within each dimension."""
    elems = _simplex_elements(n)
    table = _simplex_index_table(n)
    dims, fm, fp = [], [], []
    for b in elems:
        dims.append(sum(b) - 1)
        m = pl = 0
        for face in BitString(b).faces(-1):
            m |= 1 << table[face.bits]
        for face in BitString(b).faces(+1):
            pl |= 1 << table[face.bits]
        fm.append(m)
        fp.append(pl)
    return OgPoset(dims, fm, fp)


@lru_cache(maxsize=None)
def cube(n: int) -> OgPoset:
    """The n-cube, an iterated cylinder over the point."""
    if n == 0:
        return OgPoset.point()
    return gray(globe(1), cube(n - 1))


def simplex_face(n: int, k: int) -> PosetMap:
    """Co-face d^k: insert an unused vertex at position k."""
    if not 0 <= k <= n:
        raise ValueError("face index out of range")
    assign = []
    for b in _simplex_elements(n - 1):
        target = b[:k] + (0,) + b[k:]
        assign.append(simplex_index(target))
    return PosetMap(simplex(n - 1), simplex(n), tuple(assign))


def simplex_degeneracy(n: int, k: int) -> PosetMap:
    """Co-degeneracy s^k: merge vertices k and k+1."""
    if not 0 <= k <= n:
        raise ValueError("degeneracy index out of range")
    assign = []
    for b in _simplex_elements(n + 1):
        target = b[:k] + (b[k] | b[k + 1],) + b[k + 2:]
        assign.append(simplex_index(target))
    return PosetMap(simplex(n + 1), simplex(n), tuple(assign))


# -- folding --------------------------------------------------------------


def _fold_target(b: tuple[int, ...]) -> tuple[int, int]:
    """Globe pole hit by a simplex element: (dimension, sign); sign 0 = top.

    All ones goes to the top; a zero-prefixed block of ones to an output
    pole; otherwise the count of trailing ones names an input pole.  A
    string ending in 0 counts zero trailing ones and lands on the bottom
    input vertex (the only reading that keeps the assignment a valid map).
    """
    n = len(b) - 1
    if all(b):
        return n, 0
    k = 0
    while b[k] == 0:
        k += 1
    if all(b[k:]):
        return n - k, +1
    j = 0
    while b[-1 - j] == 1:
        j += 1
    return j, -1


@lru_cache(maxsize=None)
def folding_a(n: int) -> PosetMap:
    """The canonical surjection from the n-simplex onto the n-globe."""
    assign = []
    for b in _simplex_elements(n):
        d, s = _fold_target(b)
        assign.append(globe_element(n, d, s))
    return PosetMap(simplex(n), globe(n), tuple(assign))


def fatten(p: PosetMap) -> PosetMap:
    """Lift an atom surjection with dimension drop one through the inflation
    of its target: boundaries land on the matching boundary copy, the top
    on the new top."""
    u, v = p.source, p.target
    if u.whole().greatest() is None or v.whole().greatest() is None:
        raise ValueError("fatten needs atoms")
    if u.dim != v.dim + 1 or not p.is_surjective:
        raise ValueError("fatten needs a surjection with dimension drop 1")
    inf = inflate(v)
    assign: list[Optional[int]] = [None] * u.size
    for x in bits(u.whole().boundary(-1).mask):
        assign[x] = inf.iota_minus(p(x))
    for x in bits(u.whole().boundary(+1).mask):
        a = inf.iota_plus(p(x))
        if assign[x] is not None and assign[x] != a:
            raise BoundaryMismatch("boundary images disagree on the overlap")
        assign[x] = a
    assign[u.whole().greatest()] = inf.whole.size - 1
    return PosetMap(u, inf.whole, tuple(assign))  # type: ignore[arg-type]


@lru_cache(maxsize=None)
def iterated_inflate(p: OgPoset, k: int) -> OgPoset:
    if k == 0:
        return p
    return inflate(iterated_inflate(p, k - 1)).whole


def _iterated_inflate_map(f: PosetMap, k: int) -> PosetMap:
    for _ in range(k):
        f = inflate_map(f)
    return f


@lru_cache(maxsize=None)
def sprec(n: int) -> PosetMap:
    """s^0 fattened: the n-simplex onto the inflated (n-1)-simplex."""
    return fatten(simplex_degeneracy(n - 1, 0))


# -- compositors ----------------------------------------------------------


@dataclass(frozen=True)
class PhiResult:
    whole: OgPoset
    names: dict[str, int]
    incl_minus: PosetMap   # the n-globe as the input cell
    incl_plus1: PosetMap   # first output copy
    incl_plus2: PosetMap   # second output copy


@lru_cache(maxsize=None)
def phi(m: int) -> PhiResult:
    """The binary compositor atom: one n-cell pointing at two pasted ones."""
    if m < 2:
        raise ValueError("compositors start in dimension 2")
    n = m - 1
    g = globe(n)
    pr = paste(g, g, n - 1)
    ct = celto(g, pr.whole)
    names: dict[str, int] = {}
    for k in range(n):
        names[f"{k}-"] = ct.minus_incl(globe_element(n, k, -1))
        names[f"{k}+"] = ct.minus_incl(globe_element(n, k, +1))
    names[f"{n}-"] = ct.minus_incl(globe_element(n, n, 0))
    names[f"{n}+1"] = ct.plus_incl(pr.left_incl(globe_element(n, n, 0)))
    names[f"{n}+2"] = ct.plus_incl(pr.right_incl(globe_element(n, n, 0)))
    names[f"{n-1}0"] = ct.plus_incl(
        pr.left_incl(globe_element(n, n - 1, +1)))
    names[f"{m}"] = ct.top
    incl1 = pr.left_incl.then(ct.plus_incl)
    incl2 = pr.right_incl.then(ct.plus_incl)
    return PhiResult(ct.whole, names, ct.minus_incl, incl1, incl2)


@lru_cache(maxsize=None)
def folding_c(m: int) -> PosetMap:
    """The surjection from the m-simplex onto the binary compositor.

    Three elements override the globe folding: the two output-side blocks
    and the middle vertex between them.
    """
    if m < 2:
        raise ValueError("compositor foldings start in dimension 2")
    n = m - 1
    ph = phi(m)
    over = {
        (1, 1, 0) + (1,) * (n - 1): ph.names[f"{n}+1"],
        (0, 1, 1) + (1,) * (n - 1): ph.names[f"{n}+2"],
        (0, 1, 0) + (1,) * (n - 1): ph.names[f"{n-1}0"],
    }
    assign = []
    for b in _simplex_elements(m):
        if b in over:
            assign.append(over[b])
            continue
        d, s = _fold_target(b)
        if s == 0:
            assign.append(ph.names[f"{m}"])
        elif d == n and s == -1:
            assign.append(ph.names[f"{n}-"])
        else:
            assign.append(ph.names[f"{d}{'-' if s < 0 else '+'}"])
    return PosetMap(simplex(m), ph.whole, tuple(assign))


@dataclass(frozen=True)
class CompositorResult:
    whole: OgPoset
    incl: PosetMap    # pasted pair of globes into the compositor
    retr: PosetMap    # retraction back onto the pair


@lru_cache(maxsize=None)
def compositor_c(n: int, k: int) -> CompositorResult:
    """C_{n,k}: the pasted pair of n-globes with the cell tower filling it."""
    if not 0 <= k < n:
        raise ValueError("need n > k >= 0")
    if n == k + 1:
        pr = paste(globe(n), globe(n), k)
        ident = PosetMap.identity(pr.whole)
        return CompositorResult(pr.whole, ident, ident)
    prev = compositor_c(n - 1, k)
    inf = inflate(prev.whole)
    pair_n = paste(globe(n), globe(n), k)
    pair_m = paste(globe(n - 1), globe(n - 1), k)
    bd = pair_n.whole.whole().boundary(+1)
    bd_sub, bd_incl = bd.extract()
    iso = find_isomorphism(pair_m.whole, bd_sub)
    if iso is None:
        raise BoundaryMismatch("compositor boundary mismatch")
    from .construct import amalgamate
    ea = [bd_incl(iso(x)) for x in range(pair_m.whole.size)]
    eb = [inf.iota_minus(prev.incl(x)) for x in range(pair_m.whole.size)]
    whole, (j_pair, j_inf) = amalgamate(
        [pair_n.whole, inf.whole], [(0, ea, 1, eb)])
    retr_assign: list[Optional[int]] = [None] * whole.size
    for x in range(pair_n.whole.size):
        retr_assign[j_pair(x)] = x
    # the inflated tower collapses through tau and the previous retraction,
    # then includes along the shared output boundary of the globe pair
    collapse = inf.tau.then(prev.retr)
    pm_to_pair = {x: bd_incl(iso(x)) for x in range(pair_m.whole.size)}
    for y in range(inf.whole.size):
        t = collapse(y)
        want = pm_to_pair[t]
        cur = retr_assign[j_inf(y)]
        if cur is None:
            retr_assign[j_inf(y)] = want
        elif cur != want:
            raise BoundaryMismatch("compositor retraction is inconsistent")
    retr = PosetMap(whole, pair_n.whole, tuple(retr_assign))  # type: ignore
    incl = PosetMap(pair_n.whole, whole, j_pair.assignment)
    return CompositorResult(whole, incl, retr)


# -- inflation towers over simplices (E and E-tilde) ----------------------


@dataclass(frozen=True)
class ExtrResult:
    whole: OgPoset
    j_incl: PosetMap   # the inflated simplex tower inside the shape
    retr: PosetMap     # retraction onto that tower


@lru_cache(maxsize=None)
def extr(k: int, n: int) -> ExtrResult:
    """E_k^n: the k-fold inflated n-simplex rebuilt from the tower over the
    (n-1)-simplex, with its retraction."""
    if n <= 1 or k < 0:
        raise ValueError("need n > 1 and k >= 0")
    if k == 0:
        inf = inflate(simplex(n - 1))
        d0 = simplex_face(n, 0)
        face = d0.image(simplex(n - 1).whole())
        pr = paste_along(inf.whole, simplex(n), face, +1)
        s0 = simplex_degeneracy(n - 1, 0)
        assign: list[Optional[int]] = [None] * pr.whole.size
        for x in range(simplex(n).size):
            assign[pr.right_incl(x)] = inf.iota_minus(s0(x))
        for y in range(inf.whole.size):
            assign[pr.left_incl(y)] = y
        return ExtrResult(pr.whole, pr.left_incl,
                          PosetMap(pr.whole, inf.whole, tuple(assign)))  # type: ignore

    prev = extr(k - 1, n)
    tower_prev = iterated_inflate(simplex(n - 1), k)      # O^k(D^{n-1})
    inf = inflate(tower_prev)                              # O^{k+1}(D^{n-1})
    base = iterated_inflate(simplex(n), k - 1)             # O^{k-1}(D^n)
    a = celto(base, prev.whole)
    b = celto(prev.whole, base)
    # the inflated tower is pasted onto its copy inside the output boundary
    # of the first cell, then the second cell swallows the whole new output
    v1 = a.whole.closure(
        a.plus_incl(prev.j_incl(x)) for x in range(tower_prev.size))
    pr1 = paste_along(inf.whole, a.whole, v1, +1)
    pr2 = paste(pr1.whole, b.whole, n + k - 1)
    whole = pr2.whole
    jm = pr1.left_incl.then(pr2.left_incl)
    ja = pr1.right_incl.then(pr2.left_incl)
    jb = pr2.right_incl

    osprec = _iterated_inflate_map(sprec(n), k - 1)
    top_prev = tower_prev.whole().greatest()
    assign = [None] * whole.size

    def put(i, val):
        if assign[i] is None:
            assign[i] = val
        elif assign[i] != val:
            raise BoundaryMismatch("retraction clauses disagree")

    for x in range(base.size):
        put(ja(a.minus_incl(x)), inf.iota_minus(osprec(x)))
        put(jb(b.plus_incl(x)), inf.iota_plus(osprec(x)))
    for e in range(prev.whole.size):
        put(ja(a.plus_incl(e)), inf.iota_minus(prev.retr(e)))
        put(jb(b.minus_incl(e)), inf.iota_plus(prev.retr(e)))
    put(ja(a.top), inf.iota_minus(top_prev))
    put(jb(b.top), inf.iota_plus(top_prev))
    for y in range(inf.whole.size):
        put(jm(y), y)
    retr = PosetMap(whole, inf.whole, tuple(assign))  # type: ignore
    return ExtrResult(whole, PosetMap(inf.whole, whole, jm.assignment), retr)


@dataclass(frozen=True)
class ExtrTilResult:
    whole: OgPoset
    globe_incl: PosetMap   # the (k+n)-globe sitting inside
    retr: PosetMap         # composite retraction onto that globe


@lru_cache(maxsize=None)
def extrtil(k: int, n: int) -> ExtrTilResult:
    """E~_k^n: E_k^n with its tower recursively replaced, retracting all the
    way down to a globe."""
    if n == 2:
        e = extr(k, 2)
        tower = iterated_inflate(simplex(1), k + 1)
        g = globe(k + 2)
        iso = find_isomorphism(tower, g)
        assert iso is not None
        inv = [0] * g.size
        for i in range(tower.size):
            inv[iso(i)] = i
        ginc = PosetMap(g, e.whole,
                        tuple(e.j_incl(inv[x]) for x in range(g.size)))
        return ExtrTilResult(e.whole, ginc, e.retr.then(iso))
    e = extr(k, n)
    t = extrtil(k + 1, n - 1)
    tower = iterated_inflate(simplex(n - 1), k + 1)
    v = e.j_incl.image(tower.whole())
    sub = substitute(e.whole, v, t.whole)

    bmap: dict[int, int] = {}
    for sign in (-1, +1):
        bt, bti = tower.whole().boundary(sign).extract()
        bw, bwi = t.whole.whole().boundary(sign).extract()
        iso = find_isomorphism(bt, bw)
        assert iso is not None
        for i in range(bt.size):
            x, y = bti(i), bwi(iso(i))
            if bmap.setdefault(x, y) != y:
                raise BoundaryMismatch("tower boundary isos disagree")

    assign: list[Optional[int]] = [None] * sub.whole.size
    for w_i in range(t.whole.size):
        assign[sub.w_incl(w_i)] = w_i
    for x, res_i in sub.kept.items():
        m_i = e.retr(x)
        if m_i in bmap:
            want = bmap[m_i]
            if assign[res_i] is None:
                assign[res_i] = want
            elif assign[res_i] != want:
                raise BoundaryMismatch("induced retraction is inconsistent")
    rt = PosetMap(sub.whole, t.whole, tuple(assign))  # type: ignore
    return ExtrTilResult(sub.whole, t.globe_incl.then(sub.w_incl),
                         rt.then(t.retr))


# -- horns, last vertex, map enumeration ----------------------------------


def horn(p: OgPoset, face_el: int) -> tuple[OgPoset, PosetMap]:
    """The boundary of an atom minus the interior of one codim-1 face."""
    top = p.whole().greatest()
    if top is None:
        raise ValueError("horns live in atoms")
    if p.dims[face_el] != p.dim - 1:
        raise ValueError("horn face must have codimension 1")
    v = ClosedSubset(p, p.down[face_el])
    lam = p.whole().boundary() - (v - v.boundary())
    return lam.extract()


def last_vertex(n: int) -> tuple[int, ...]:
    """Order-preserving collapse of simplex elements onto their last vertex."""
    out = []
    for b in _simplex_elements(n):
        k = 0
        while b[-1 - k] == 0:
            k += 1
        out.append(n - k)
    return tuple(out)


def enumerate_maps(u: OgPoset, v: OgPoset) -> list[PosetMap]:
    """All maps between two desk-scale atoms, in deterministic order.

    Every map onto the closure of some target element factors as a
    surjection followed by that closure's inclusion, so images are scanned
    one target atom at a time.  The backtracking assigns elements top-down,
    constraining each image to the boundaries forced by assigned cofaces,
    and validates candidates with the full boundary-preservation law.
    """
    results = []
    for w in range(v.size):
        results.extend(_maps_onto(u, v, w))
    return results


def _maps_onto(u: OgPoset, v: OgPoset, w: int) -> Iterator[PosetMap]:
    target = v.down[w]
    utop = u.whole().greatest()
    if utop is None:
        raise ValueError("map enumeration works on atoms")
    if v.dims[w] > u.dims[utop]:
        return
    order = sorted(range(u.size), key=lambda i: (-u.dims[i], i))
    assign: list[Optional[int]] = [None] * u.size

    bd_u: dict[tuple[int, int, int], int] = {}
    bd_v: dict[tuple[int, int, int], int] = {}

    def bd_mask(poset, table, el, sign, nn):
        key = (el, sign, nn)
        if key not in table:
            table[key] = ClosedSubset(poset, poset.down[el]).boundary(
                sign, nn).mask
        return table[key]

    def candidates(x):
        cand = target
        for y in bits(u.cofaces(x)):
            fy = assign[y]
            if fy is None:
                continue
            cand &= v.down[fy]
            for s2 in (-1, +1):
                for nn in range(u.dims[x], u.dims[y]):
                    if (1 << x) & bd_mask(u, bd_u, y, s2, nn):
                        cand &= bd_mask(v, bd_v, fy, s2, nn)
        return [c for c in bits(cand) if v.dims[c] <= u.dims[x]]

    def search(pos):
        if pos == len(order):
            f = PosetMap(u, v, tuple(assign))  # type: ignore[arg-type]
            if f.image_mask(u.all_mask) == target and f.is_valid():
                yield f
            return
        x = order[pos]
        for c in candidates(x):
            assign[x] = c
            yield from search(pos + 1)
            assign[x] = None

    yield from search(0)
