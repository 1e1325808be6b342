"""Recognition of molecules and atoms, and the class predicates.

A molecule is a closed subset that either has a greatest element (an atom)
or splits as U1 ∪ U2 with U1 ∩ U2 = bd+_k(U1) = bd-_k(U2) for some k, both
parts again molecules.  Recognition searches for such splits directly; a
successful search is returned as a certificate tree that an independent
checker can re-verify by recomputing the three set equations at each node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .ogposet import OgPoset, ClosedSubset, bits


class NotAMolecule(ValueError):
    pass


@dataclass(frozen=True)
class AtomNode:
    top: int


@dataclass(frozen=True)
class PasteNode:
    left: "MoleculeCert"
    right: "MoleculeCert"
    k: int


@dataclass(frozen=True)
class MoleculeCert:
    subset: ClosedSubset
    tree: Union[AtomNode, PasteNode]

    @property
    def is_atom(self) -> bool:
        return isinstance(self.tree, AtomNode)

    def verify(self) -> bool:
        """Re-check every node of the certificate from scratch.

        Deliberately independent of the recognition search: only the
        definition's set equations are recomputed.
        """
        u = self.subset
        p = u.parent
        if isinstance(self.tree, AtomNode):
            return (0 <= self.tree.top < p.size
                    and p.down[self.tree.top] == u.mask)
        left, right, k = self.tree.left, self.tree.right, self.tree.k
        l, r = left.subset, right.subset
        if l.mask == u.mask or r.mask == u.mask:
            return False
        if (l.mask | r.mask) != u.mask:
            return False
        inter = l.mask & r.mask
        if l.boundary(+1, k).mask != inter:
            return False
        if r.boundary(-1, k).mask != inter:
            return False
        return left.verify() and right.verify()

    def to_json_obj(self) -> dict:
        if isinstance(self.tree, AtomNode):
            return {"atom": self.tree.top}
        return {"k": self.tree.k,
                "left": self.tree.left.to_json_obj(),
                "right": self.tree.right.to_json_obj()}


@dataclass(frozen=True)
class ClassTag:
    """Which of the named molecule classes a subset belongs to."""

    spherical_boundary: bool
    totally_loop_free: bool
    regular_ambient: bool


def class_tag(u: ClosedSubset) -> ClassTag:
    cert = is_molecule(u)
    sub, _ = u.extract()
    return ClassTag(
        spherical_boundary=cert is not None and has_spherical_boundary(cert),
        totally_loop_free=is_totally_loop_free(sub),
        regular_ambient=is_regular_complex(u.parent),
    )


def _pair_admissible(p: OgPoset, a: int, b: int, k: int) -> bool:
    """Necessary condition for top cell a to sit left of top cell b at dim k.

    Everything shared by cl{a} and cl{b} must land in the gluing interface:
    dimension at most k, and any dim-k element must be output-only in cl{a}
    and input-only in cl{b}.
    """
    shared = p.down[a] & p.down[b]
    if shared & p.mask_above(k):
        return False
    for z in bits(shared & p.dim_mask(k)):
        if p.cofaces_minus[z] & p.down[a]:
            return False
        if p.cofaces_plus[z] & p.down[b]:
            return False
    return True


def iter_splits(u: ClosedSubset) -> Iterator[tuple[ClosedSubset, ClosedSubset, int]]:
    """Yield candidate binary pastings of u, verified, in deterministic order.

    Gluing dimension k runs from dim-1 downward; for each k the maximal
    elements of dimension > k are bipartitioned (ascending bitmask over the
    left part).  Given a bipartition, the interface is forced: its dim-k
    elements are those whose covers inside the left closure are all + and
    inside the right closure all -, and everything outside both closures
    joins it too.  Each candidate is checked against the definition before
    being yielded.
    """
    p = u.parent
    n = u.dim
    if n < 0:
        return
    maximals = u.maximal()
    cache = p._split_memo.get(u.mask)
    if cache is not None:
        for lmask, rmask, k in cache:
            yield ClosedSubset(p, lmask), ClosedSubset(p, rmask), k
        return
    found: list[tuple[int, int, int]] = []
    for k in range(n - 1, -1, -1):
        tops = [t for t in maximals if p.dims[t] > k]
        t = len(tops)
        if t < 2:
            continue
        ok = [[_pair_admissible(p, a, b, k) for b in tops] for a in tops]
        for code in range(1, (1 << t) - 1):
            good = True
            for i in range(t):
                for j in range(t):
                    if (code >> i & 1) and not (code >> j & 1):
                        if not ok[i][j]:
                            good = False
                            break
                if not good:
                    break
            if not good:
                continue
            a_mask = 0
            b_mask = 0
            for i in range(t):
                if code >> i & 1:
                    a_mask |= p.down[tops[i]]
                else:
                    b_mask |= p.down[tops[i]]
            rest = u.mask & ~(a_mask | b_mask)
            ik = 0
            for z in bits(u.mask & p.dim_mask(k)):
                if p.cofaces_minus[z] & a_mask:
                    continue
                if p.cofaces_plus[z] & b_mask:
                    continue
                ik |= 1 << z
            inter = p.closure_mask(ik) | rest
            lmask = a_mask | inter
            rmask = b_mask | inter
            if lmask == u.mask or rmask == u.mask:
                continue
            if lmask & rmask != inter:
                continue
            left = ClosedSubset(p, lmask)
            right = ClosedSubset(p, rmask)
            if left.boundary(+1, k).mask != inter:
                continue
            if right.boundary(-1, k).mask != inter:
                continue
            found.append((lmask, rmask, k))
            yield left, right, k
    p._split_memo[u.mask] = found


def is_molecule(u: ClosedSubset) -> Optional[MoleculeCert]:
    """Recognize u as a molecule, returning a checkable certificate.

    Deterministic: the certificate is the first found under (k descending,
    left part ascending); results are memoized per subset on the parent.
    """
    p = u.parent
    memo = p._mol_memo
    if u.mask in memo:
        return memo[u.mask]
    if u.mask == 0:
        memo[u.mask] = None
        return None
    cert: Optional[MoleculeCert] = None
    top = u.greatest()
    if top is not None and p.down[top] == u.mask:
        cert = MoleculeCert(u, AtomNode(top))
    else:
        # recursion cannot revisit u: split parts are proper subsets
        for left, right, k in iter_splits(u):
            lc = is_molecule(left)
            if lc is None:
                continue
            rc = is_molecule(right)
            if rc is None:
                continue
            cert = MoleculeCert(u, PasteNode(lc, rc, k))
            break
    memo[u.mask] = cert
    return cert


def is_atom(u: ClosedSubset) -> bool:
    top = u.greatest()
    return top is not None and u.parent.down[top] == u.mask


def toplevel_decomposition(cert: MoleculeCert, k: Optional[int] = None
                           ) -> tuple[list[ClosedSubset], int]:
    """Flatten a molecule into a maximal pasting V1 #k ... #k Vm.

    With the default k (taken from the certificate's root, or dim-1 for an
    atom), each part contains exactly one atom of dimension > k; for
    k = dim-1 that means exactly one top-dimensional atom.
    """
    if not cert.verify():
        raise NotAMolecule("invalid certificate")
    u = cert.subset
    if k is None:
        k = cert.tree.k if isinstance(cert.tree, PasteNode) else u.dim - 1

    def flat(sub: ClosedSubset) -> list[ClosedSubset]:
        for left, right, kk in iter_splits(sub):
            if kk != k:
                continue
            if is_molecule(left) is None or is_molecule(right) is None:
                continue
            return flat(left) + flat(right)
        return [sub]

    parts = flat(u)
    p = u.parent
    for part in parts:
        n_tops = sum(1 for t in part.maximal() if p.dims[t] > k)
        if n_tops != 1:
            raise NotAMolecule(
                f"part has {n_tops} atoms above dimension {k}")
    return parts, k


def has_spherical_boundary(cert: MoleculeCert) -> bool:
    """bd+_k U and bd-_k U intersect exactly in bd_{k-1} U for all k < dim."""
    u = cert.subset
    for k in range(u.dim):
        inter = u.boundary(+1, k).mask & u.boundary(-1, k).mask
        if inter != u.boundary(None, k - 1).mask:
            return False
    return True


def is_regular_complex(p: OgPoset) -> bool:
    """Every atom has molecule boundaries, is globular, and is spherical."""
    for x in range(p.size):
        d = p.dims[x]
        if d == 0:
            continue
        cl = ClosedSubset(p, p.down[x])
        bd = {}
        for sign in (-1, +1):
            bd[sign] = cl.boundary(sign)
            if is_molecule(bd[sign]) is None:
                return False
        if d > 1:
            for sign in (-1, +1):
                for sign2 in (-1, +1):
                    if bd[sign2].boundary(sign).mask != \
                            cl.boundary(sign, d - 2).mask:
                        return False
        cert = is_molecule(cl)
        if cert is None or not has_spherical_boundary(cert):
            return False
    return True


def is_totally_loop_free(p: OgPoset) -> bool:
    """The Hasse diagram with --edges reversed must be acyclic.

    Downward covering edges keep their direction when labelled +, and are
    reversed when labelled -; a directed cycle in the result is a loop.
    """
    succ = [[] for _ in range(p.size)]
    for y in range(p.size):
        for x in bits(p.faces_plus[y]):
            succ[y].append(x)
        for x in bits(p.faces_minus[y]):
            succ[x].append(y)
    state = [0] * p.size  # 0 new, 1 on stack, 2 done
    for start in range(p.size):
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if state[nxt] == 1:
                    return False
                if state[nxt] == 0:
                    state[nxt] = 1
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return True


def composable(a: ClosedSubset, b: ClosedSubset, k: int) -> bool:
    """Whether a #k b is defined: they meet exactly in the matching bd's."""
    inter = a.mask & b.mask
    return (a.boundary(+1, k).mask == inter
            and b.boundary(-1, k).mask == inter)


def enumerate_molecules(p: OgPoset) -> list[ClosedSubset]:
    """Every molecule subset of p, by closing the atoms under pasting.

    The pasting closure is exactly the inductive definition, so this is
    complete; intended for desk-scale complexes.
    """
    found: dict[int, ClosedSubset] = {}
    for x in range(p.size):
        s = ClosedSubset(p, p.down[x])
        found[s.mask] = s
    frontier = list(found.values())
    while frontier:
        fresh = []
        current = list(found.values())
        for a in current:
            for b in frontier:
                for pair in ((a, b), (b, a)):
                    u = pair[0].mask | pair[1].mask
                    if u in found:
                        continue
                    for k in range(max(pair[0].dim, pair[1].dim)):
                        if composable(pair[0], pair[1], k):
                            s = ClosedSubset(p, u)
                            found[u] = s
                            fresh.append(s)
                            break
        frontier = fresh
    return sorted(found.values(), key=lambda s: s.mask)


def find_submolecule(v: MoleculeCert, u: MoleculeCert
                     ) -> Optional[list[tuple[int, int, str]]]:
    """Exhibit v as an iterated pasting factor of u, or return None.

    The witness is a chain of steps (left mask, right mask, side) leading
    from u down to v; each step is a verified split, with v contained in
    the named side.
    """
    p = u.subset.parent
    target = v.subset.mask
    memo = p._submol_memo

    def search(cur: ClosedSubset) -> Optional[list]:
        if cur.mask == target:
            return []
        key = (target, cur.mask)
        if key in memo:
            return memo[key]
        memo[key] = None  # cut cycles
        result = None
        for left, right, k in iter_splits(cur):
            if is_molecule(left) is None or is_molecule(right) is None:
                continue
            if target & ~left.mask == 0:
                tail = search(left)
                if tail is not None:
                    result = [(left.mask, right.mask, "left")] + tail
                    break
            if target & ~right.mask == 0:
                tail = search(right)
                if tail is not None:
                    result = [(left.mask, right.mask, "right")] + tail
                    break
        memo[key] = result
        return result

    if target & ~u.subset.mask:
        return None
    return search(u.subset)
