"""The labeled-partition semilattice SPC(B, G) and its one-point completion.

An SPC is a subset W of B = {1..n}, a partition of W, and per block a
G-orbit of labelings (a "cross section").  We store the orbit by its
canonical representative: the least member of every block carries the
identity label.  Adjoining a formal top element turns the meet
semilattice into a lattice; the top shows up as the join of label-wise
incompatible pairs, and only when G is nontrivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .core import FiniteGroup
from .errors import InputError


@dataclass(frozen=True)
class SPC:
    """Canonical-form SPC over B = {1..size_b}; labels are group indices."""

    size_b: int
    blocks: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...]

    @property
    def subset(self) -> tuple[int, ...]:
        return tuple(sorted(b for blk in self.blocks for b in blk))

    def label_of(self) -> dict[int, int]:
        return {
            b: g for blk, labs in zip(self.blocks, self.labels) for b, g in zip(blk, labs)
        }

    def block_of(self) -> dict[int, int]:
        return {b: i for i, blk in enumerate(self.blocks) for b in blk}

    def sort_key(self):
        # larger supports first, then finer partitions, then structure
        return (-len(self.subset), -len(self.blocks), self.blocks, self.labels)

    def __str__(self) -> str:
        from .fileformats import dump_spc

        return dump_spc(self)


class Top:
    """The adjoined maximum of the completed lattice."""

    _instance: Optional["Top"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"


TOP = Top()


def empty_spc(size_b: int) -> SPC:
    return SPC(size_b, (), ())


def canonicalize(
    size_b: int,
    blocks: Iterable[Iterable[int]],
    mu: dict[int, int],
    group: FiniteGroup,
) -> SPC:
    """Left-multiply each block's labels so the least member carries 1_G.

    Idempotent, and constant on G-orbits of labelings, so two labelings of
    the same cross section canonicalize identically.
    """
    norm_blocks = []
    for blk in blocks:
        members = tuple(sorted(set(blk)))
        if not members:
            raise InputError("empty block")
        if any(not 1 <= b <= size_b for b in members):
            raise InputError("block member out of range")
        norm_blocks.append(members)
    flat = [b for blk in norm_blocks for b in blk]
    if len(set(flat)) != len(flat):
        raise InputError("blocks are not disjoint")
    for b in flat:
        if b not in mu:
            raise InputError(f"labeling is partial: no value at {b}")
    norm_blocks.sort()
    labels = []
    for members in norm_blocks:
        shift = group.inv(mu[members[0]])
        labels.append(tuple(group.mul(shift, mu[b]) for b in members))
    return SPC(size_b, tuple(norm_blocks), tuple(labels))


def leq(x: SPC, y: SPC, group: FiniteGroup) -> bool:
    """x <= y: support and blocks nest, and y's labels restrict to x's orbits."""
    if x.size_b != y.size_b:
        raise InputError("SPCs over different base sets")
    wy = set(y.subset)
    if not set(x.subset) <= wy:
        return False
    y_block_of = y.block_of()
    y_label = y.label_of()
    for blk, labs in zip(x.blocks, x.labels):
        homes = {y_block_of[b] for b in blk}
        if len(homes) != 1:
            return False
        # same orbit on this block: compare after anchoring at the least member
        shift = group.inv(y_label[blk[0]])
        for b, g in zip(blk, labs):
            if group.mul(shift, y_label[b]) != g:
                return False
    return True


def meet(x: SPC, y: SPC, group: FiniteGroup) -> SPC:
    """Greatest lower bound: intersect supports, refine blocks, and split
    further along level sets of the label difference."""
    if x.size_b != y.size_b:
        raise InputError("SPCs over different base sets")
    common = set(x.subset) & set(y.subset)
    if not common:
        return empty_spc(x.size_b)
    xb, yb = x.block_of(), y.block_of()
    xl, yl = x.label_of(), y.label_of()
    cells: dict[tuple[int, int, int], list[int]] = {}
    for b in sorted(common):
        diff = group.mul(xl[b], group.inv(yl[b]))
        cells.setdefault((xb[b], yb[b], diff), []).append(b)
    return canonicalize(x.size_b, cells.values(), {b: xl[b] for b in common}, group)


def join(x, y, group: FiniteGroup):
    """Least upper bound in the completed lattice.

    Merge supports, close the two partitions transitively, and solve for a
    labeling satisfying both sides' constraints by propagation; any
    conflict means no SPC upper bound exists and the top is returned.
    """
    if x is TOP or y is TOP:
        return TOP
    if x.size_b != y.size_b:
        raise InputError("SPCs over different base sets")
    size_b = x.size_b
    union = sorted(set(x.subset) | set(y.subset))
    if not union:
        return empty_spc(size_b)

    parent = {b: b for b in union}

    def find(b):
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        return b

    def merge(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for spc in (x, y):
        for blk in spc.blocks:
            for b in blk[1:]:
                merge(blk[0], b)

    merged: dict[int, list[int]] = {}
    for b in union:
        merged.setdefault(find(b), []).append(b)

    # Within each source block, values are tied to the block anchor by a
    # known right factor: mu(b) = mu(anchor) * c.  Propagate over the merged
    # component and detect conflicting cycles.
    constraints: dict[int, list[tuple[int, int]]] = {b: [] for b in union}
    for spc in (x, y):
        lab = spc.label_of()
        for blk in spc.blocks:
            anchor = blk[0]
            for b in blk[1:]:
                c = group.mul(group.inv(lab[anchor]), lab[b])
                constraints[anchor].append((b, c))
                constraints[b].append((anchor, group.inv(c)))

    mu: dict[int, int] = {}
    for members in merged.values():
        base = min(members)
        mu[base] = group.identity
        stack = [base]
        while stack:
            a = stack.pop()
            for b, c in constraints[a]:
                val = group.mul(mu[a], c)
                if b in mu:
                    if mu[b] != val:
                        return TOP
                else:
                    mu[b] = val
                    stack.append(b)
    return canonicalize(size_b, merged.values(), mu, group)


# -- enumeration (used by oracles, search and the CLI) -------------------


def _set_partitions(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def enumerate_spcs(size_b: int, group: FiniteGroup) -> list[SPC]:
    """All SPCs over {1..size_b}, in canonical search order (larger
    supports first, finer partitions first)."""
    import itertools

    points = list(range(1, size_b + 1))
    out = []
    for r in range(size_b + 1):
        for w in itertools.combinations(points, r):
            for part in _set_partitions(list(w)):
                blocks = [tuple(sorted(blk)) for blk in part]
                free = [
                    [group.identity] if i == 0 else list(range(len(group)))
                    for blk in blocks
                    for i in range(len(blk))
                ]
                for combo in itertools.product(*free):
                    mu = {}
                    k = 0
                    for blk in blocks:
                        for b in sorted(blk):
                            mu[b] = combo[k]
                            k += 1
                    out.append(canonicalize(size_b, blocks, mu, group))
    out = sorted(set(out), key=SPC.sort_key)
    return out


# -- the coordinate action on labeled subsets ----------------------------


@dataclass(frozen=True)
class CrossSectionFailure:
    """Witness that (3) fails: the colliding pair and their images."""

    b1: int
    b2: int

    def __bool__(self):
        return False


def mu_action(
    mu: dict[int, int],
    rlm_map: tuple[int, ...],
    gen_labels: tuple[int, ...],
    group: FiniteGroup,
):
    """Push a labeled subset forward along one generator.

    `rlm_map[b-1]` is the image of b (0 when undefined) and `gen_labels[b-1]`
    the group label at b.  Returns the transported labeling on W*s, or a
    `CrossSectionFailure` naming a pair b, b' with bs = b's but clashing
    transported labels.
    """
    out: dict[int, int] = {}
    origin: dict[int, int] = {}
    for b in sorted(mu):
        img = rlm_map[b - 1]
        if img == 0:
            continue
        val = group.mul(mu[b], gen_labels[b - 1])
        if img in out:
            if out[img] != val:
                return CrossSectionFailure(origin[img], b)
        else:
            out[img] = val
            origin[img] = b
    return out
