"""Partial transformations, semigroup enumeration and Green's relations.

Everything downstream works on two carriers: `PartialTransformation`
(a partial self-map of {1..n}, with 0 playing the role of the undefined
mark) and `FiniteSemigroup` (an enumerated multiplication structure on
arbitrary hashable values).  Semigroups built from transformations are
automatically faithful; abstract ones (quotients, Rees/Brandt carriers,
products) supply their own multiplication callable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional, Sequence

from .errors import InputError, ResourceError, VerificationError

DEFAULT_ELEMENT_BUDGET = 100_000

# Threshold below which construction-time exhaustive sanity checks
# (associativity spot check) are run.
_ASSOC_CHECK_LIMIT = 40


@dataclass(frozen=True)
class PartialTransformation:
    """A partial self-map of the point set {1..n}; images[q-1] == 0 means undefined.

    Composition applies the left factor first: q(f*g) = (qf)g, and an
    undefined intermediate value stays undefined.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        for v in self.images:
            if not 0 <= v <= n:
                raise InputError(f"image value {v} out of range for degree {n}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "PartialTransformation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def empty(cls, n: int) -> "PartialTransformation":
        return cls((0,) * n)

    @classmethod
    def constant(cls, n: int, v: int) -> "PartialTransformation":
        return cls((v,) * n)

    def __call__(self, q: int) -> int:
        """Image of point q (1-based); 0 for undefined, and 0 maps to 0."""
        if q == 0:
            return 0
        return self.images[q - 1]

    def __mul__(self, other: "PartialTransformation") -> "PartialTransformation":
        return compose(self, other)

    def domain(self) -> tuple[int, ...]:
        return tuple(q for q in range(1, self.degree + 1) if self.images[q - 1] != 0)

    def is_total(self) -> bool:
        return all(v != 0 for v in self.images)

    def is_injective_on_domain(self) -> bool:
        seen = set()
        for v in self.images:
            if v != 0:
                if v in seen:
                    return False
                seen.add(v)
        return True

    def sort_key(self) -> tuple[int, ...]:
        # undefined sorts after every real point
        n = self.degree
        return tuple(v if v else n + 1 for v in self.images)

    def __str__(self) -> str:
        return " ".join(str(v) if v else "-" for v in self.images)


def compose(f: PartialTransformation, g: PartialTransformation) -> PartialTransformation:
    """q(f*g) = (qf)g with the undefined mark absorbed."""
    if f.degree != g.degree:
        raise InputError(f"degree mismatch: {f.degree} vs {g.degree}")
    gi = g.images
    return PartialTransformation(tuple(gi[v - 1] if v else 0 for v in f.images))


def _transformation_key(x: Any) -> Any:
    if isinstance(x, PartialTransformation):
        return x.sort_key()
    return x


class FiniteSemigroup:
    """An enumerated finite semigroup.

    Elements are hashable values in a canonical order; products go through
    the supplied multiplication callable and are cached.  Generators carry
    names, and the right/left Cayley tables over the generator set are the
    basis of all the Green machinery.
    """

    def __init__(
        self,
        elements: list[Any],
        gen_indices: list[int],
        gen_names: list[str],
        mul: Callable[[Any, Any], Any],
    ):
        self.elements = elements
        self.index = {v: i for i, v in enumerate(elements)}
        if len(self.index) != len(elements):
            raise InputError("duplicate elements in semigroup carrier")
        self.gens = gen_indices
        self.gen_names = gen_names
        self._mul = mul
        self._mul_cache: dict[tuple[int, int], int] = {}
        self.right_cayley = [
            [self.mul_index(i, g) for g in gen_indices] for i in range(len(elements))
        ]
        self.left_cayley = [
            [self.mul_index(g, i) for g in gen_indices] for i in range(len(elements))
        ]
        self._green: Optional[GreenStructure] = None
        self._words: Optional[list[tuple[int, ...]]] = None
        if len(elements) <= _ASSOC_CHECK_LIMIT:
            self._check_associativity()

    # -- construction -------------------------------------------------

    @classmethod
    def generate(
        cls,
        named_gens: Sequence[tuple[str, Any]],
        mul: Callable[[Any, Any], Any] = None,
        sort_key: Callable[[Any], Any] = _transformation_key,
        max_elements: int = DEFAULT_ELEMENT_BUDGET,
    ) -> "FiniteSemigroup":
        """Breadth-first closure of the generators under right multiplication.

        The element list is re-sorted into canonical order afterwards, so
        output is independent of generator order up to naming.
        """
        if not named_gens:
            raise InputError("empty generator list")
        if mul is None:
            mul = compose
        degrees = {
            g.degree for _, g in named_gens if isinstance(g, PartialTransformation)
        }
        if len(degrees) > 1:
            raise InputError(f"generators of unequal degree: {sorted(degrees)}")
        gen_values = [g for _, g in named_gens]
        seen = dict.fromkeys(gen_values)  # insertion ordered, deduplicated
        frontier = list(seen)
        while frontier:
            new = []
            for u in frontier:
                for g in gen_values:
                    p = mul(u, g)
                    if p not in seen:
                        seen[p] = None
                        new.append(p)
                        if len(seen) > max_elements:
                            raise ResourceError(
                                f"element budget exceeded: more than {max_elements} "
                                "elements in the closure"
                            )
            frontier = new
        elements = sorted(seen, key=sort_key)
        index = {v: i for i, v in enumerate(elements)}
        gen_indices = [index[g] for g in gen_values]
        sgp = cls(elements, gen_indices, [n for n, _ in named_gens], mul)
        return sgp

    @classmethod
    def from_elements(
        cls,
        values: Iterable[Any],
        mul: Callable[[Any, Any], Any],
        sort_key: Callable[[Any], Any] = _transformation_key,
        gen_values: Optional[Sequence[Any]] = None,
        gen_names: Optional[Sequence[str]] = None,
    ) -> "FiniteSemigroup":
        """Wrap an explicitly enumerated carrier; verifies closure.

        Without an explicit generating set every element is taken as a
        generator (harmless at desk scale, and it keeps the Cayley graphs
        honest).
        """
        elements = sorted(set(values), key=sort_key)
        index = {v: i for i, v in enumerate(elements)}
        for u in elements:
            for v in elements:
                if mul(u, v) not in index:
                    raise InputError("carrier is not closed under multiplication")
        if gen_values is None:
            gen_values = elements
            gen_names = [f"e{i}" for i in range(len(elements))]
        elif gen_names is None:
            gen_names = [f"x{i}" for i in range(len(gen_values))]
        sgp = cls(elements, [index[g] for g in gen_values], list(gen_names), mul)
        if gen_values is not elements:
            reach = sgp._closure_of_gens()
            if len(reach) != len(elements):
                raise InputError("given generators do not generate the carrier")
        return sgp

    def _closure_of_gens(self) -> set[int]:
        reach = set(self.gens)
        frontier = list(reach)
        while frontier:
            new = []
            for i in frontier:
                for k in range(len(self.gens)):
                    j = self.right_cayley[i][k]
                    if j not in reach:
                        reach.add(j)
                        new.append(j)
            frontier = new
        return reach

    def _check_associativity(self):
        els = self.elements
        for a in els:
            for b in els:
                ab = self._mul(a, b)
                for c in els:
                    if self._mul(ab, c) != self._mul(a, self._mul(b, c)):
                        raise VerificationError(
                            f"multiplication not associative at ({a}, {b}, {c})"
                        )

    # -- basic structure ----------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, u: Any, v: Any) -> Any:
        return self.elements[self.mul_index(self.index[u], self.index[v])]

    def mul_index(self, i: int, j: int) -> int:
        key = (i, j)
        hit = self._mul_cache.get(key)
        if hit is None:
            hit = self.index[self._mul(self.elements[i], self.elements[j])]
            self._mul_cache[key] = hit
        return hit

    @property
    def is_transformation(self) -> bool:
        return bool(self.elements) and isinstance(
            self.elements[0], PartialTransformation
        )

    @property
    def degree(self) -> int:
        if not self.is_transformation:
            raise InputError("not a transformation semigroup")
        return self.elements[0].degree

    def words(self) -> list[tuple[int, ...]]:
        """A reduced word over generator indices for every element (BFS-first)."""
        if self._words is None:
            words: dict[int, tuple[int, ...]] = {}
            frontier = []
            for k, gi in enumerate(self.gens):
                if gi not in words:
                    words[gi] = (k,)
                    frontier.append(gi)
            while frontier:
                new = []
                for i in frontier:
                    for k in range(len(self.gens)):
                        j = self.right_cayley[i][k]
                        if j not in words:
                            words[j] = words[i] + (k,)
                            new.append(j)
                frontier = new
            if len(words) != len(self.elements):
                raise VerificationError("generators do not reach every element")
            self._words = [words[i] for i in range(len(self.elements))]
        return self._words

    def identity_index(self) -> Optional[int]:
        n = len(self.elements)
        for i in range(n):
            if all(
                self.mul_index(i, j) == j and self.mul_index(j, i) == j
                for j in range(n)
            ):
                return i
        return None

    def zero_index(self) -> Optional[int]:
        n = len(self.elements)
        for i in range(n):
            if all(
                self.mul_index(i, j) == i and self.mul_index(j, i) == i
                for j in range(n)
            ):
                return i
        return None

    def idempotent_indices(self) -> list[int]:
        return [i for i in range(len(self.elements)) if self.mul_index(i, i) == i]

    def green(self) -> "GreenStructure":
        if self._green is None:
            self._green = green(self)
        return self._green

    def __repr__(self) -> str:
        return f"<FiniteSemigroup of order {len(self.elements)}>"


# -- Green's relations ------------------------------------------------


def _sccs(n: int, succ: Callable[[int], Iterable[int]]) -> list[int]:
    """Iterative Tarjan; returns a class id per vertex (ids are arbitrary)."""
    ids = [-1] * n
    low = [0] * n
    order = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = itertools.count()
    comp = itertools.count()
    for root in range(n):
        if ids[root] != -1 or order[root]:
            continue
        work = [(root, iter(succ(root)))]
        order[root] = low[root] = next(counter) + 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if not order[w]:
                    order[w] = low[w] = next(counter) + 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                elif on_stack[w]:
                    low[v] = min(low[v], order[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == order[v]:
                cid = next(comp)
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    ids[w] = cid
                    if w == v:
                        break
    return ids


def _canonical_classes(raw_ids: list[int]) -> tuple[list[int], list[list[int]]]:
    """Renumber class ids so classes are ordered by least member."""
    members: dict[int, list[int]] = {}
    for i, c in enumerate(raw_ids):
        members.setdefault(c, []).append(i)
    order = sorted(members, key=lambda c: members[c][0])
    remap = {c: k for k, c in enumerate(order)}
    return [remap[c] for c in raw_ids], [members[c] for c in order]


@dataclass
class GreenStructure:
    """Green class data of a finite semigroup.

    Class ids are canonical (ordered by least element index), and the
    quasi-orders are reflexive-transitive reachability in the Cayley
    graphs, which is exactly the S^1-definition of the relations.
    """

    r_of: list[int]
    l_of: list[int]
    j_of: list[int]
    h_of: list[int]
    r_classes: list[list[int]]
    l_classes: list[list[int]]
    j_classes: list[list[int]]
    h_classes: list[list[int]]
    j_order: list[set[int]]  # j_order[c] = set of J-class ids <= c (downset)
    l_order: list[set[int]]  # same for the L-order on L-classes
    regular: list[bool]
    idempotents: list[int]

    def j_leq(self, c1: int, c2: int) -> bool:
        """J-class c1 lies below (or equals) J-class c2."""
        return c1 in self.j_order[c2]

    def l_strictly_below(self, i: int, j: int) -> bool:
        """Element i lies strictly below element j in the L-order."""
        ci, cj = self.l_of[i], self.l_of[j]
        return ci != cj and ci in self.l_order[cj]


def green(sgp: FiniteSemigroup) -> GreenStructure:
    """Compute R, L, J, H partitions plus regularity and idempotents."""
    n = len(sgp.elements)
    ngens = len(sgp.gens)
    right = sgp.right_cayley
    left = sgp.left_cayley

    r_raw = _sccs(n, lambda i: right[i])
    l_raw = _sccs(n, lambda i: left[i])
    j_raw = _sccs(n, lambda i: itertools.chain(right[i], left[i]))

    r_of, r_classes = _canonical_classes(r_raw)
    l_of, l_classes = _canonical_classes(l_raw)
    j_of, j_classes = _canonical_classes(j_raw)

    h_raw = [r_of[i] * len(l_classes) + l_of[i] for i in range(n)]
    h_of, h_classes = _canonical_classes(h_raw)

    # class-level orders: reachability over the condensations
    def _downsets(class_of: list[int], classes: list[list[int]], both: bool) -> list[set[int]]:
        nc = len(classes)
        succ_sets: list[set[int]] = [set() for _ in range(nc)]
        for i in range(n):
            ci = class_of[i]
            for k in range(ngens):
                succ_sets[ci].add(class_of[left[i][k]])
                if both:
                    succ_sets[ci].add(class_of[right[i][k]])
        downset: list[set[int]] = []
        for c in range(nc):
            seen = {c}
            stack = [c]
            while stack:
                d = stack.pop()
                for e in succ_sets[d]:
                    if e not in seen:
                        seen.add(e)
                        stack.append(e)
            downset.append(seen)
        return downset

    j_downset = _downsets(j_of, j_classes, both=True)
    l_downset = _downsets(l_of, l_classes, both=False)

    idempotents = sgp.idempotent_indices()
    regular = [False] * len(j_classes)
    for e in idempotents:
        regular[j_of[e]] = True

    return GreenStructure(
        r_of, l_of, j_of, h_of,
        r_classes, l_classes, j_classes, h_classes,
        j_downset, l_downset, regular, idempotents,
    )


def check_stability(sgp: FiniteSemigroup) -> None:
    """xy J x <=> xy R x and xy J y <=> xy L y, over all pairs."""
    gs = sgp.green()
    n = len(sgp.elements)
    for i in range(n):
        for j in range(n):
            p = sgp.mul_index(i, j)
            if (gs.j_of[p] == gs.j_of[i]) != (gs.r_of[p] == gs.r_of[i]):
                raise VerificationError(f"stability (R side) fails at pair ({i},{j})")
            if (gs.j_of[p] == gs.j_of[j]) != (gs.l_of[p] == gs.l_of[j]):
                raise VerificationError(f"stability (L side) fails at pair ({i},{j})")


def is_aperiodic(sgp: FiniteSemigroup) -> bool:
    """True iff every subgroup is trivial.

    Computed once by power stabilisation (s^k = s^{k+1} at k = |S|) and once
    through the Green structure (H-classes containing an idempotent are
    singletons); the two verdicts are asserted equal.
    """
    n = len(sgp.elements)
    by_powers = True
    for i in range(n):
        p = i
        for _ in range(n):
            p = sgp.mul_index(p, i)
        if sgp.mul_index(p, i) != p:
            by_powers = False
            break
    gs = sgp.green()
    by_subgroups = all(len(gs.h_classes[gs.h_of[e]]) == 1 for e in gs.idempotents)
    if by_powers != by_subgroups:
        raise VerificationError(
            "aperiodicity criteria disagree (power stabilisation vs trivial subgroups)"
        )
    return by_powers


# -- groups ------------------------------------------------------------


class FiniteGroup:
    """A finite group given by an element list and a multiplication table."""

    def __init__(self, elements: list[Any], table: list[list[int]]):
        self.elements = elements
        self.table = table
        self.index = {v: i for i, v in enumerate(elements)}
        n = len(elements)
        if any(len(row) != n for row in table) or len(table) != n:
            raise InputError("multiplication table is not square")
        self.identity = self._find_identity()
        self.inverse = self._find_inverses()

    def _find_identity(self) -> int:
        n = len(self.elements)
        for e in range(n):
            if all(self.table[e][j] == j and self.table[j][e] == j for j in range(n)):
                return e
        raise InputError("no identity element: not a group table")

    def _find_inverses(self) -> list[int]:
        n = len(self.elements)
        inv = [-1] * n
        e = self.identity
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == e and self.table[j][i] == e:
                    inv[i] = j
                    break
            if inv[i] < 0:
                raise InputError(f"element {i} has no inverse: not a group table")
        return inv

    def verify(self) -> None:
        """Full table-wise group axioms (associativity included)."""
        n = len(self.elements)
        for i in range(n):
            if sorted(self.table[i]) != list(range(n)):
                raise VerificationError("table row is not a permutation")
            if sorted(row[i] for row in self.table) != list(range(n)):
                raise VerificationError("table column is not a permutation")
        for i in range(n):
            for j in range(n):
                ij = self.table[i][j]
                for k in range(n):
                    if self.table[ij][k] != self.table[i][self.table[j][k]]:
                        raise VerificationError("group table not associative")

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    @classmethod
    def from_table(cls, table: list[list[int]]) -> "FiniteGroup":
        g = cls(list(range(len(table))), [list(r) for r in table])
        g.verify()
        return g

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls([0], [[0]])

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(list(range(n)), [[(i + j) % n for j in range(n)] for i in range(n)])

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        """Sym_n on {1..n} as total transformations, composed left-to-right."""
        perms = sorted(
            (PartialTransformation(p) for p in itertools.permutations(range(1, n + 1))),
            key=PartialTransformation.sort_key,
        )
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[compose(p, q)] for q in perms] for p in perms]
        return cls(perms, table)

    def __repr__(self) -> str:
        return f"<FiniteGroup of order {len(self.elements)}>"


def minimal_generating_set(sgp: FiniteSemigroup) -> list[int]:
    """A small generating set, greedily in canonical element order."""
    n = len(sgp.elements)
    gens: list[int] = []
    reached: set[int] = set()
    for i in range(n):
        if i in reached:
            continue
        gens.append(i)
        reached.add(i)
        frontier = list(reached)
        while frontier:
            new = []
            for u in frontier:
                for g in gens:
                    for p in (sgp.mul_index(u, g), sgp.mul_index(g, u)):
                        if p not in reached:
                            reached.add(p)
                            new.append(p)
            frontier = new
        if len(reached) == n:
            break
    if len(reached) != n:
        raise VerificationError("generating-set search failed to cover the semigroup")
    return gens


def with_generators(sgp: FiniteSemigroup, gen_indices: list[int]) -> FiniteSemigroup:
    """The same semigroup re-presented over the given generating subset."""
    named = [(f"g{k}", sgp.elements[i]) for k, i in enumerate(gen_indices)]
    out = FiniteSemigroup.generate(
        named, mul=sgp._mul, sort_key=lambda v: sgp.index[v]
    )
    if len(out) != len(sgp):
        raise InputError("given indices do not generate the semigroup")
    return out


def regular_representation(sgp: FiniteSemigroup) -> FiniteSemigroup:
    """The faithful right-translation action on S (plus an adjoined
    identity point when S is not a monoid), keeping generator names.

    Gives abstract semigroups (quotients, products) a transformation form
    for serialization."""
    n = len(sgp.elements)
    ident = sgp.identity_index()
    extra = 0 if ident is not None else 1
    named = []
    for name, gi in zip(sgp.gen_names, sgp.gens):
        images = [sgp.mul_index(i, gi) + 1 for i in range(n)]
        if extra:
            images.append(gi + 1)
        named.append((name, PartialTransformation(tuple(images))))
    rep = FiniteSemigroup.generate(named, max_elements=len(sgp.elements) + 1)
    if len(rep) != len(sgp):
        raise VerificationError("regular representation is not faithful")
    return rep


def maximal_subgroup(sgp: FiniteSemigroup, e: Any) -> FiniteGroup:
    """The H-class of the idempotent e with the induced multiplication."""
    ei = sgp.index[e] if not isinstance(e, int) else e
    if sgp.mul_index(ei, ei) != ei:
        raise InputError("element is not idempotent")
    gs = sgp.green()
    members = gs.h_classes[gs.h_of[ei]]
    values = [sgp.elements[i] for i in members]
    pos = {i: k for k, i in enumerate(members)}
    table = []
    for i in members:
        row = []
        for j in members:
            p = sgp.mul_index(i, j)
            if p not in pos:
                raise VerificationError("H-class of idempotent not closed")
            row.append(pos[p])
        table.append(row)
    g = FiniteGroup(values, table)
    g.verify()
    return g
