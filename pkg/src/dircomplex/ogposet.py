"""Finite oriented graded posets, closed subsets, and their maps.

Elements carry dense integer indices sorted by (dimension, insertion
order), so all elements of one dimension occupy a contiguous index range.
Every set of elements is a Python int used as a bitmask; closures and
boundaries are unions/intersections of precomputed masks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


class InvalidStructure(ValueError):
    """Input data violates an oriented-graded-poset invariant."""


class FaceDimMismatch(InvalidStructure):
    """A face reference does not point one dimension down."""


class OrientationClash(InvalidStructure):
    """The same covering edge appears with both signs."""


class NotGraded(InvalidStructure):
    """Stored dimensions are inconsistent with longest chains."""


class IndexOutOfRange(InvalidStructure):
    """An element index does not exist in the poset."""


class InvalidMap(ValueError):
    """A function between posets breaks the boundary-preservation law."""


def bits(mask: int) -> Iterator[int]:
    """Iterate the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_count(mask: int) -> int:
    return bin(mask).count("1")


class OgPoset:
    """A finite oriented graded poset.

    ``faces_minus[i]`` and ``faces_plus[i]`` are bitmasks of the elements
    covered by ``i`` with orientation - and + respectively.  Construction
    checks all structural invariants and precomputes coface masks and
    per-element downward closures.
    """

    __slots__ = (
        "dims", "faces_minus", "faces_plus", "size", "dim",
        "cofaces_minus", "cofaces_plus", "down", "all_mask",
        "_dim_masks", "_hash", "_mol_memo", "_split_memo", "_submol_memo",
    )

    def __init__(self, dims, faces_minus, faces_plus):
        self.dims = tuple(dims)
        self.faces_minus = tuple(faces_minus)
        self.faces_plus = tuple(faces_plus)
        n = self.size = len(self.dims)
        if not (len(self.faces_minus) == len(self.faces_plus) == n):
            raise InvalidStructure("face tables and dims differ in length")
        self.dim = max(self.dims) if n else -1
        self.all_mask = (1 << n) - 1

        for i in range(n - 1):
            if self.dims[i] > self.dims[i + 1]:
                raise InvalidStructure(
                    "elements must be sorted by dimension; "
                    "use OgPoset.from_records for raw input")

        dim_masks = [0] * (self.dim + 1)
        for i, d in enumerate(self.dims):
            if d < 0:
                raise InvalidStructure(f"element {i} has negative dimension")
            dim_masks[d] |= 1 << i
        self._dim_masks = tuple(dim_masks)

        cof_m = [0] * n
        cof_p = [0] * n
        down = [0] * n
        for i in range(n):
            fm, fp = self.faces_minus[i], self.faces_plus[i]
            if fm & fp:
                j = next(bits(fm & fp))
                raise OrientationClash(
                    f"element {i} lists {j} as both a - and a + face")
            if (fm | fp) >> n:
                raise IndexOutOfRange(f"element {i} has a face out of range")
            acc = 1 << i
            for j in bits(fm | fp):
                if self.dims[j] != self.dims[i] - 1:
                    raise FaceDimMismatch(
                        f"element {i} (dim {self.dims[i]}) has face {j} "
                        f"of dim {self.dims[j]}")
                acc |= down[j]
            down[i] = acc
            for j in bits(fm):
                cof_m[j] |= 1 << i
            for j in bits(fp):
                cof_p[j] |= 1 << i
        self.cofaces_minus = tuple(cof_m)
        self.cofaces_plus = tuple(cof_p)
        self.down = tuple(down)

        # Gradedness: the longest-chain height of every element must agree
        # with its stored dimension.  Faces drop dimension by exactly one,
        # so this reduces to "no face-less element above dimension 0".
        height = [0] * n
        for i in range(n):
            f = self.faces_minus[i] | self.faces_plus[i]
            height[i] = 1 + max((height[j] for j in bits(f)), default=-1)
            if height[i] != self.dims[i]:
                raise NotGraded(
                    f"element {i}: stored dim {self.dims[i]} but longest "
                    f"chain has length {height[i]}")

        self._hash = None
        self._mol_memo = {}
        self._split_memo = {}
        self._submol_memo = {}

    # -- construction and serialisation ---------------------------------

    @classmethod
    def from_records(cls, records) -> "OgPoset":
        """Validate raw element records and build a poset in canonical order.

        Each record is a mapping with keys ``dim``, ``minus``, ``plus`` (or a
        ``(dim, minus, plus)`` triple).  Records may arrive in any order;
        they are stably re-sorted by dimension and face indices remapped.
        """
        rows = []
        for i, rec in enumerate(records):
            if isinstance(rec, dict):
                rows.append((rec["dim"], rec["minus"], rec["plus"]))
            else:
                d, m, p = rec
                rows.append((d, m, p))
        n = len(rows)
        order = sorted(range(n), key=lambda i: rows[i][0])
        newpos = [0] * n
        for new, old in enumerate(order):
            newpos[old] = new
        dims, fm, fp = [], [], []
        for old in order:
            d, m, p = rows[old]
            dims.append(d)
            for face in list(m) + list(p):
                if not (0 <= face < n):
                    raise IndexOutOfRange(f"face index {face} out of range")
            fm.append(sum(1 << newpos[j] for j in set(m)))
            fp.append(sum(1 << newpos[j] for j in set(p)))
        return cls(dims, fm, fp)

    @classmethod
    def empty(cls) -> "OgPoset":
        return cls((), (), ())

    @classmethod
    def point(cls) -> "OgPoset":
        return cls((0,), (0,), (0,))

    def to_json_obj(self) -> dict:
        return {"elements": [
            {"dim": self.dims[i],
             "minus": sorted(bits(self.faces_minus[i])),
             "plus": sorted(bits(self.faces_plus[i]))}
            for i in range(self.size)]}

    def to_json(self) -> str:
        """Canonical JSON: fixed key order, no whitespace, sorted indices."""
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "OgPoset":
        obj = json.loads(text)
        if not isinstance(obj, dict) or "elements" not in obj:
            raise InvalidStructure("expected an object with an 'elements' key")
        return cls.from_records(obj["elements"])

    # -- basic structure -------------------------------------------------

    def dim_mask(self, d: int) -> int:
        if 0 <= d <= self.dim:
            return self._dim_masks[d]
        return 0

    def mask_above(self, d: int) -> int:
        """Mask of all elements of dimension strictly greater than ``d``."""
        acc = 0
        for k in range(max(d + 1, 0), self.dim + 1):
            acc |= self._dim_masks[k]
        return acc

    def elements_of_dim(self, d: int) -> Iterator[int]:
        return bits(self.dim_mask(d))

    def faces(self, i: int, sign: Optional[int] = None) -> int:
        if sign is None:
            return self.faces_minus[i] | self.faces_plus[i]
        return self.faces_minus[i] if sign < 0 else self.faces_plus[i]

    def cofaces(self, i: int, sign: Optional[int] = None) -> int:
        if sign is None:
            return self.cofaces_minus[i] | self.cofaces_plus[i]
        return self.cofaces_minus[i] if sign < 0 else self.cofaces_plus[i]

    def closure(self, items: Iterable[int]) -> "ClosedSubset":
        mask = 0
        for i in items:
            if not (0 <= i < self.size):
                raise IndexOutOfRange(f"element index {i} out of range")
            mask |= self.down[i]
        return ClosedSubset(self, mask)

    def closure_mask(self, mask: int) -> int:
        acc = 0
        for i in bits(mask):
            acc |= self.down[i]
        return acc

    def subset(self, items: Iterable[int]) -> "ClosedSubset":
        """Build a ClosedSubset from explicit members, checking closedness."""
        mask = 0
        for i in items:
            if not (0 <= i < self.size):
                raise IndexOutOfRange(f"element index {i} out of range")
            mask |= 1 << i
        if self.closure_mask(mask) != mask:
            raise InvalidStructure("subset is not downward closed")
        return ClosedSubset(self, mask)

    def whole(self) -> "ClosedSubset":
        return ClosedSubset(self, self.all_mask)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, OgPoset):
            return NotImplemented
        return (self.dims == other.dims
                and self.faces_minus == other.faces_minus
                and self.faces_plus == other.faces_plus)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dims, self.faces_minus, self.faces_plus))
        return self._hash

    def __len__(self):
        return self.size

    def __repr__(self):
        counts = [bit_count(m) for m in self._dim_masks]
        return f"OgPoset({self.size} elements, dims {counts})"


@dataclass(frozen=True)
class ClosedSubset:
    """A downward-closed set of elements of a fixed OgPoset."""

    parent: OgPoset
    mask: int

    @property
    def dim(self) -> int:
        if self.mask == 0:
            return -1
        return self.parent.dims[self.mask.bit_length() - 1]

    def elements(self) -> Iterator[int]:
        return bits(self.mask)

    def elements_of_dim(self, d: int) -> Iterator[int]:
        return bits(self.mask & self.parent.dim_mask(d))

    def maximal(self) -> list[int]:
        p = self.parent
        return [i for i in bits(self.mask)
                if not (p.cofaces(i) & self.mask)]

    def greatest(self) -> Optional[int]:
        m = self.maximal()
        return m[0] if len(m) == 1 else None

    @property
    def is_pure(self) -> bool:
        d = self.dim
        p = self.parent
        return all(p.dims[i] == d for i in self.maximal())

    def boundary(self, sign: Optional[int] = None, n: Optional[int] = None
                 ) -> "ClosedSubset":
        """The n-boundary of this subset; ``sign`` None means both halves.

        Default n is dim - 1.  An element of dimension n is a +-face when no
        member covers it with a - edge (and dually); on top of the closure
        of those, every member not below anything of dimension > n belongs
        to either boundary.
        """
        p = self.parent
        if n is None:
            n = self.dim - 1
        if n >= self.dim:
            return self
        sb = 0
        if n >= 0:
            for i in bits(self.mask & p.dim_mask(n)):
                no_minus = not (p.cofaces_minus[i] & self.mask)
                no_plus = not (p.cofaces_plus[i] & self.mask)
                if (sign is None and (no_minus or no_plus)) \
                        or (sign == +1 and no_minus) \
                        or (sign == -1 and no_plus):
                    sb |= p.down[i]
        under_higher = p.closure_mask(self.mask & p.mask_above(n))
        return ClosedSubset(p, sb | (self.mask & ~under_higher))

    def extract(self) -> tuple[OgPoset, "PosetMap"]:
        """Standalone copy of this subset plus its inclusion map."""
        p = self.parent
        elems = list(bits(self.mask))
        pos = {e: i for i, e in enumerate(elems)}
        dims = [p.dims[e] for e in elems]
        fm = [sum(1 << pos[j] for j in bits(p.faces_minus[e] & self.mask))
              for e in elems]
        fp = [sum(1 << pos[j] for j in bits(p.faces_plus[e] & self.mask))
              for e in elems]
        sub = OgPoset(dims, fm, fp)
        return sub, PosetMap(sub, p, tuple(elems))

    def __and__(self, other):
        assert self.parent is other.parent or self.parent == other.parent
        return ClosedSubset(self.parent, self.mask & other.mask)

    def __or__(self, other):
        assert self.parent is other.parent or self.parent == other.parent
        return ClosedSubset(self.parent, self.mask | other.mask)

    def __sub__(self, other):
        # Not closed in general; used for interior computations.
        return ClosedSubset(self.parent, self.mask & ~other.mask)

    def __contains__(self, i):
        return bool(self.mask >> i & 1)

    def __len__(self):
        return bit_count(self.mask)

    def __bool__(self):
        return self.mask != 0

    def __le__(self, other):
        return self.mask & ~other.mask == 0

    def __repr__(self):
        return f"ClosedSubset({sorted(bits(self.mask))})"


@dataclass(frozen=True)
class PosetMap:
    """A function between oriented graded posets.

    Validity (the boundary-preservation law) is not enforced on
    construction; use :meth:`check` or :meth:`is_valid`.
    """

    source: OgPoset
    target: OgPoset
    assignment: tuple[int, ...]

    def __post_init__(self):
        if len(self.assignment) != self.source.size:
            raise InvalidMap("assignment length differs from source size")
        for i in self.assignment:
            if not (0 <= i < self.target.size):
                raise IndexOutOfRange(f"image index {i} out of range")

    @classmethod
    def identity(cls, p: OgPoset) -> "PosetMap":
        return cls(p, p, tuple(range(p.size)))

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.assignment[i]
        return out

    def image(self, subset: ClosedSubset) -> ClosedSubset:
        """Direct image of a closed subset (closed whenever the map is valid)."""
        return ClosedSubset(self.target, self.image_mask(subset.mask))

    def then(self, other: "PosetMap") -> "PosetMap":
        if self.target != other.source:
            raise InvalidMap("composition mismatch")
        return PosetMap(self.source, other.target,
                        tuple(other.assignment[i] for i in self.assignment))

    @property
    def is_injective(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.assignment)) == self.target.size

    @property
    def kind(self) -> str:
        inj, surj = self.is_injective, self.is_surjective
        if inj and surj:
            return "isomorphism"
        if inj:
            return "inclusion"
        if surj:
            return "surjection"
        return "general"

    def preserves_faces_exactly(self) -> bool:
        """Face sets map bijectively with matching signs (inclusion test)."""
        s, t = self.source, self.target
        a = self.assignment
        for i in range(s.size):
            if t.dims[a[i]] != s.dims[i]:
                return False
            if self.image_mask(s.faces_minus[i]) != t.faces_minus[a[i]]:
                return False
            if self.image_mask(s.faces_plus[i]) != t.faces_plus[a[i]]:
                return False
        return True

    def check(self) -> None:
        """Raise InvalidMap unless boundaries are preserved at every element.

        An injective dimension-preserving function that maps face sets
        exactly is always a map, which is much cheaper to test; general
        functions get the full law, element by element.
        """
        if self.is_injective and self.preserves_faces_exactly():
            return
        s, t = self.source, self.target
        for i in range(s.size):
            cl_i = ClosedSubset(s, s.down[i])
            img_cl = ClosedSubset(t, t.down[self.assignment[i]])
            for n in range(s.dims[i] + 1):
                for sign in (-1, +1):
                    lhs = img_cl.boundary(sign, n).mask
                    rhs = self.image_mask(cl_i.boundary(sign, n).mask)
                    if lhs != rhs:
                        raise InvalidMap(
                            f"element {i}: boundary({'-' if sign < 0 else '+'},"
                            f" {n}) not preserved")

    def is_valid(self) -> bool:
        try:
            self.check()
            return True
        except InvalidMap:
            return False

    def to_json_obj(self) -> dict:
        return {"assignment": list(self.assignment)}

    def __repr__(self):
        return (f"PosetMap({self.source.size}->{self.target.size}, "
                f"{self.kind})")


def validate(records) -> OgPoset:
    """Check raw element records and return the poset they describe."""
    return OgPoset.from_records(records)


def apply_map(f: PosetMap, subset: ClosedSubset) -> ClosedSubset:
    return f.image(subset)


def factorize(f: PosetMap) -> tuple[PosetMap, PosetMap]:
    """Split a map into a surjection onto its image and an inclusion."""
    image_mask = f.image_mask(f.source.all_mask)
    mid, incl = ClosedSubset(f.target, image_mask).extract()
    back = {e: i for i, e in enumerate(incl.assignment)}
    surj = PosetMap(f.source, mid, tuple(back[a] for a in f.assignment))
    return surj, incl


def find_isomorphism(p: OgPoset, q: OgPoset) -> Optional[PosetMap]:
    """Search for an isomorphism, deterministically.

    Backtracking over elements in decreasing dimension, pruned by local
    degree profiles and by the images of already-matched cofaces.  On
    molecules the result is unique (they have no nontrivial automorphisms),
    so the first hit is the only one.
    """
    if p.size != q.size or p.dim != q.dim:
        return None

    def profile(poset, i):
        return (bit_count(poset.faces_minus[i]), bit_count(poset.faces_plus[i]),
                bit_count(poset.cofaces_minus[i]), bit_count(poset.cofaces_plus[i]))

    p_prof = [profile(p, i) for i in range(p.size)]
    q_prof = [profile(q, i) for i in range(q.size)]
    for d in range(p.dim + 1):
        if bit_count(p.dim_mask(d)) != bit_count(q.dim_mask(d)):
            return None
        if sorted(p_prof[i] for i in bits(p.dim_mask(d))) != \
           sorted(q_prof[i] for i in bits(q.dim_mask(d))):
            return None

    order = sorted(range(p.size), key=lambda i: (-p.dims[i], i))
    assign: list[Optional[int]] = [None] * p.size
    used = [False] * q.size

    def candidates(x):
        # cofaces of x processed earlier constrain f(x) to matching faces
        cand = None
        for sign, cof in ((-1, p.cofaces_minus[x]), (+1, p.cofaces_plus[x])):
            for y in bits(cof):
                fy = assign[y]
                if fy is not None:
                    faces = (q.faces_minus[fy] if sign < 0
                             else q.faces_plus[fy])
                    cand = faces if cand is None else cand & faces
        if cand is None:
            cand = q.dim_mask(p.dims[x])
        return [c for c in bits(cand)
                if not used[c] and q_prof[c] == p_prof[x]
                and q.dims[c] == p.dims[x]]

    def backtrack(pos):
        if pos == len(order):
            return True
        x = order[pos]
        for c in candidates(x):
            assign[x] = c
            used[c] = True
            if backtrack(pos + 1):
                return True
            assign[x] = None
            used[c] = False
        return False

    if not backtrack(0):
        return None
    f = PosetMap(p, q, tuple(assign))  # type: ignore[arg-type]
    if not f.preserves_faces_exactly():
        return None
    return f
