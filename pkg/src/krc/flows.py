"""Partial automata, their transition semigroups, flow verification and
the constructive decomposition a verified flow induces.

A flow labels every automaton state with an SPC over (B, G) of the
analyzed group-mapping presentation so that each transition transports
supports, blocks and cross sections coherently (conditions F1-F5).  From
a verified flow the lifted action on G x [b] x Q is built, and the
witness map onto G x B + 0 is checked to be a surjective morphism; the
resulting division of S into (G wr Sym_b wr T_A) x RLM is machine-checked
through the division machinery.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Optional

from .core import FiniteGroup, FiniteSemigroup, PartialTransformation, is_aperiodic
from .errors import InputError, ResourceError, VerificationError
from .products import (
    ActionPair,
    DivisionWitness,
    PairSemigroup,
    check_division,
    wreath,
)
from .semilocal import GroupMappingPresentation
from .spc import SPC, CrossSectionFailure, enumerate_spcs, mu_action

ZERO = "0"

DEFAULT_AUTOMATA_BUDGET = 20_000


@dataclass(frozen=True)
class Automaton:
    """Deterministic partial automaton; states are 1..n_states, letters are
    the generator names of the semigroup under analysis."""

    n_states: int
    letters: tuple[str, ...]
    delta: dict[tuple[int, str], int]

    def __post_init__(self):
        for (q, x), t in self.delta.items():
            if not (1 <= q <= self.n_states and 1 <= t <= self.n_states):
                raise InputError("transition out of state range")
            if x not in self.letters:
                raise InputError(f"unknown letter {x!r}")

    def step(self, q: int, x: str) -> Optional[int]:
        return self.delta.get((q, x))

    def letter_map(self, x: str) -> PartialTransformation:
        return PartialTransformation(
            tuple(self.delta.get((q, x), 0) for q in range(1, self.n_states + 1))
        )


def transition_semigroup(aut: Automaton, max_elements: int = 100_000) -> FiniteSemigroup:
    named = [(x, aut.letter_map(x)) for x in aut.letters]
    return FiniteSemigroup.generate(named, max_elements=max_elements)


@dataclass
class Flow:
    automaton: Automaton
    presentation: GroupMappingPresentation
    labeling: tuple[SPC, ...]

    def __post_init__(self):
        if len(self.labeling) != self.automaton.n_states:
            raise InputError("one SPC per state required")
        if self.automaton.letters != tuple(self.presentation.sgp.gen_names):
            raise InputError("automaton alphabet must match the generator names")


@dataclass
class FlowViolation:
    condition: str  # F1..F5
    state: int
    letter: str
    detail: str

    def __bool__(self):
        return False


def _transition_check(
    pres: GroupMappingPresentation, spc_q: SPC, spc_t: SPC, letter: str
) -> Optional[tuple[str, str]]:
    """F1-F5 for a single labeled transition; None when all pass."""
    group = pres.group
    rlm_map = pres.rlm_of_gen[letter]
    labels = pres.label_of_gen[letter]
    w_target = set(spc_t.subset)
    # F1: W_q x inside W_qx
    for b in spc_q.subset:
        img = rlm_map[b - 1]
        if img != 0 and img not in w_target:
            return ("F1", f"{b}.{letter} = {img} escapes the target support")
    # F2: every block lands inside a single target block
    target_block = spc_t.block_of()
    block_image: list[Optional[int]] = []
    for bi, blk in enumerate(spc_q.blocks):
        homes = {target_block[rlm_map[b - 1]] for b in blk if rlm_map[b - 1] != 0}
        if len(homes) > 1:
            return ("F2", f"block {blk} is split across target blocks")
        block_image.append(homes.pop() if homes else None)
    # F3: the induced block map is injective where defined
    seen: dict[int, int] = {}
    for bi, tgt in enumerate(block_image):
        if tgt is None:
            continue
        if tgt in seen:
            return (
                "F3",
                f"blocks {spc_q.blocks[seen[tgt]]} and {spc_q.blocks[bi]} collide",
            )
        seen[tgt] = bi
    # F4: the transported labeling is well defined
    moved = mu_action(spc_q.label_of(), rlm_map, labels, group)
    if isinstance(moved, CrossSectionFailure):
        return ("F4", f"cross-section condition fails at ({moved.b1}, {moved.b2})")
    # F5: per block, the transported labels lie in the target cross section
    t_label = spc_t.label_of()
    for bi, blk in enumerate(spc_q.blocks):
        images = sorted({rlm_map[b - 1] for b in blk if rlm_map[b - 1] != 0})
        if not images:
            continue
        anchor = images[0]
        shift = group.mul(moved[anchor], group.inv(t_label[anchor]))
        for c in images:
            if moved[c] != group.mul(shift, t_label[c]):
                return (
                    "F5",
                    f"block {blk} transports outside the target cross section at {c}",
                )
    return None


def verify_flow(flow: Flow):
    """Check F1-F5 at every defined transition; returns True or the first
    violation (a value, not an exception)."""
    aut = flow.automaton
    for q in range(1, aut.n_states + 1):
        for x in aut.letters:
            t = aut.step(q, x)
            if t is None:
                continue
            bad = _transition_check(
                flow.presentation, flow.labeling[q - 1], flow.labeling[t - 1], x
            )
            if bad is not None:
                return FlowViolation(bad[0], q, x, bad[1])
    return True


def trivial_flow(pres: GroupMappingPresentation) -> Flow:
    """One state, every letter looping, labeled with full support, singleton
    blocks and trivial cross sections."""
    letters = tuple(pres.sgp.gen_names)
    aut = Automaton(1, letters, {(1, x): 1 for x in letters})
    nb = pres.n_b
    blocks = [(b,) for b in range(1, nb + 1)]
    labels = [(pres.group.identity,)] * nb
    return Flow(aut, pres, (SPC(nb, tuple(blocks), tuple(labels)),))


# -- the constructive decomposition ---------------------------------------


@dataclass
class PresentationWitness:
    """Everything the flow-based decomposition produces: the block count
    b_bar, per-state-and-letter permutations and group corrections, the
    lifted action, the carrier Qbar with its projection rho, and the
    machine-checked division witness."""

    flow: Flow
    b_bar: int
    perms: dict[str, list[tuple[int, ...]]]  # per letter, per state: [b]->[b]
    gbar: dict[str, list[tuple[int, ...]]]  # per letter, per state: G labels
    transition_sgp: FiniteSemigroup
    qbar: list[Any]
    rho: dict[Any, Any]
    division: DivisionWitness = field(repr=False)

    def lifted_step(self, point: tuple[int, int, int], letter: str):
        """(g, j, q).x = (g gbar(j,q,x), j p_{q,qx}, qx); None when qx dies."""
        g, j, q = point
        qx = self.flow.automaton.step(q, letter)
        if qx is None:
            return None
        group = self.flow.presentation.group
        return (
            group.mul(g, self.gbar[letter][q - 1][j]),
            self.perms[letter][q - 1][j],
            qx,
        )


def _block_data(spc: SPC, b_bar: int):
    blocks = list(spc.blocks) + [()] * (b_bar - len(spc.blocks))
    return blocks


def presentation_construct(flow: Flow) -> PresentationWitness:
    ok = verify_flow(flow)
    if ok is not True:
        raise InputError(f"not a flow: {ok}")
    pres = flow.presentation
    group = pres.group
    aut = flow.automaton
    nq = aut.n_states
    b_bar = max(1, max(len(spc.blocks) for spc in flow.labeling))

    perms: dict[str, list[tuple[int, ...]]] = {}
    gbar: dict[str, list[tuple[int, ...]]] = {}
    for x in aut.letters:
        rlm_map = pres.rlm_of_gen[x]
        labels = pres.label_of_gen[x]
        perms[x] = []
        gbar[x] = []
        for q in range(1, nq + 1):
            qx = aut.step(q, x)
            if qx is None:
                # unused; keep a fixed shape so the data is deterministic
                perms[x].append(tuple(range(b_bar)))
                gbar[x].append((group.identity,) * b_bar)
                continue
            src = _block_data(flow.labeling[q - 1], b_bar)
            tgt_spc = flow.labeling[qx - 1]
            tgt_blocks = _block_data(tgt_spc, b_bar)
            tgt_of_point = tgt_spc.block_of()
            src_label = flow.labeling[q - 1].label_of()
            tgt_label = tgt_spc.label_of()
            partial: dict[int, int] = {}
            gvals: list[int] = []
            for j, blk in enumerate(src):
                movers = [b for b in blk if rlm_map[b - 1] != 0]
                if movers:
                    partial[j] = tgt_of_point[rlm_map[movers[0] - 1]]
                    b0 = movers[0]
                    val = group.mul(
                        group.mul(src_label[b0], labels[b0 - 1]),
                        group.inv(tgt_label[rlm_map[b0 - 1]]),
                    )
                    # F5 makes the correction independent of the chosen member
                    for b in movers[1:]:
                        other = group.mul(
                            group.mul(src_label[b], labels[b - 1]),
                            group.inv(tgt_label[rlm_map[b - 1]]),
                        )
                        if other != val:
                            raise VerificationError(
                                "group correction depends on the block member"
                            )
                    gvals.append(val)
                else:
                    gvals.append(group.identity)
            # complete the partial injection to a permutation of [b_bar]:
            # unmatched sources to unmatched targets, both in increasing order
            used = set(partial.values())
            free_targets = [j for j in range(b_bar) if j not in used]
            perm = []
            k = 0
            for j in range(b_bar):
                if j in partial:
                    perm.append(partial[j])
                else:
                    perm.append(free_targets[k])
                    k += 1
            if sorted(perm) != list(range(b_bar)):
                raise VerificationError("block map completion is not a permutation")
            perms[x].append(tuple(perm))
            gbar[x].append(tuple(gvals))

    tsg = transition_semigroup(aut)

    # Qbar and rho
    qbar: list[Any] = []
    rho: dict[Any, Any] = {}
    for g in range(len(group)):
        for j in range(b_bar):
            for q in range(1, nq + 1):
                qbar.append(((g, j, q), ZERO))
                rho[((g, j, q), ZERO)] = ZERO
    for q in range(1, nq + 1):
        blocks = flow.labeling[q - 1].blocks
        lab = flow.labeling[q - 1].label_of()
        for j, blk in enumerate(blocks):
            for b in blk:
                for g in range(len(group)):
                    omega = ((g, j, q), b)
                    qbar.append(omega)
                    rho[omega] = (group.mul(g, lab[b]), b)

    witness = PresentationWitness(
        flow, b_bar, perms, gbar, tsg, qbar, rho, division=None
    )
    _verify_rho(witness)
    witness.division = _division_witness(witness)
    return witness


def _verify_rho(w: PresentationWitness) -> None:
    """rho is onto G x B + 0 and commutes with every generator, the
    undefined-image branch included."""
    pres = w.flow.presentation
    group = pres.group
    nb = pres.n_b
    image = set(w.rho.values())
    want = {ZERO} | {(g, b) for g in range(len(group)) for b in range(1, nb + 1)}
    if image != want:
        raise VerificationError("rho is not onto G x B + 0")
    for omega in w.qbar:
        point, b = omega
        for x in w.flow.automaton.letters:
            rlm_map = pres.rlm_of_gen[x]
            labels = pres.label_of_gen[x]
            # action of x on G x B + 0 downstairs
            down = w.rho[omega]
            if down == ZERO:
                down_x = ZERO
            else:
                h, bb = down
                img = rlm_map[bb - 1]
                down_x = (group.mul(h, labels[bb - 1]), img) if img else ZERO
            # action of x upstairs
            up = w.lifted_step(point, x)
            if up is None:
                # the state path dies; nothing to compare
                continue
            if b == ZERO:
                omega_x = (up, ZERO)
            else:
                img = rlm_map[b - 1]
                omega_x = (up, img) if img else (up, ZERO)
            if omega_x not in w.rho:
                raise VerificationError(f"Qbar is not closed at {omega} under {x}")
            if w.rho[omega_x] != down_x:
                raise VerificationError(
                    f"rho is not a morphism at {omega} under {x}"
                )


def _division_witness(w: PresentationWitness) -> DivisionWitness:
    """S < (G wr Sym_b wr T_A) x RLM, with the lift read off the flow."""
    pres = w.flow.presentation
    group = pres.group
    b_bar = w.b_bar
    sym = FiniteGroup.symmetric(b_bar)
    sym_sgp = FiniteSemigroup.from_elements(sym.elements, lambda a, b: a * b)
    inner = wreath(
        ActionPair.of_group(group),
        ActionPair.of_transformations(sym_sgp),
    )
    inner_carrier = inner.full_carrier()
    inner_sgp = FiniteSemigroup.from_elements(
        inner_carrier.elements, inner.mul, sort_key=inner.sort_key
    )
    inner_pair = ActionPair(list(inner.points), inner_sgp, inner.act)
    outer = wreath(inner_pair, ActionPair.of_transformations(w.transition_sgp))

    lifts = {}
    for x, gi in zip(pres.sgp.gen_names, pres.sgp.gens):
        fvals = []
        for q in range(1, w.flow.automaton.n_states + 1):
            if w.flow.automaton.step(q, x) is None:
                fvals.append(None)
            else:
                perm = PartialTransformation(
                    tuple(p + 1 for p in w.perms[x][q - 1])
                )
                fvals.append(inner.make(list(w.gbar[x][q - 1]), perm))
        wx = outer.make(fvals, w.transition_sgp.elements[
            w.transition_sgp.index[w.flow.automaton.letter_map(x)]
        ])
        lifts[x] = (wx, pres.rlmq.morphism[pres.sgp.elements[gi]])

    target = PairSemigroup(outer, pres.rlmq.rlm)
    witness = check_division(pres.sgp, target, lifts=lifts)

    # the [b] x Q part of every lifted generator is a fiberwise permutation
    # over the automaton's own transition action
    for x in pres.sgp.gen_names:
        for q in range(1, w.flow.automaton.n_states + 1):
            if sorted(w.perms[x][q - 1]) != list(range(b_bar)):
                raise VerificationError("lifted generator is not fiberwise a permutation")
    return witness


# -- flow search -----------------------------------------------------------


@dataclass
class FlowSearchExhausted:
    max_states: int
    automata_tried: int
    budget: int

    def __bool__(self):
        return False


def _enumerate_automata(
    n_states: int, letters: tuple[str, ...]
) -> Iterator[Automaton]:
    """All partial automata in canonical order: targets 1..n then undefined,
    lexicographic over (state, letter) slots."""
    slots = [(q, x) for q in range(1, n_states + 1) for x in letters]
    for combo in itertools.product(range(1, n_states + 2), repeat=len(slots)):
        delta = {
            slot: t for slot, t in zip(slots, combo) if t <= n_states
        }
        yield Automaton(n_states, letters, delta)


def flow_search(
    pres: GroupMappingPresentation,
    max_states: int,
    cap: int = 0,
    cap_check: Optional[Callable[[FiniteSemigroup], bool]] = None,
    automata_budget: int = DEFAULT_AUTOMATA_BUDGET,
):
    """First verified flow over automata with at most max_states states whose
    transition semigroup passes the complexity cap; exhaustion is explicit
    and never a nonexistence claim."""
    if cap_check is None:
        if cap != 0:
            raise InputError("cap > 0 needs an explicit cap_check")
        cap_check = is_aperiodic
    letters = tuple(pres.sgp.gen_names)
    spcs = enumerate_spcs(pres.n_b, pres.group)
    compat: dict[tuple[int, int, str], bool] = {}

    def compatible(i: int, k: int, x: str) -> bool:
        key = (i, k, x)
        hit = compat.get(key)
        if hit is None:
            hit = _transition_check(pres, spcs[i], spcs[k], x) is None
            compat[key] = hit
        return hit

    tried = 0
    for m in range(1, max_states + 1):
        for aut in _enumerate_automata(m, letters):
            if tried >= automata_budget:
                return FlowSearchExhausted(max_states, tried, automata_budget)
            tried += 1
            try:
                tsg = transition_semigroup(aut)
            except ResourceError:
                continue
            if not cap_check(tsg):
                continue
            assignment = _search_labeling(pres, aut, spcs, compatible)
            if assignment is not None:
                flow = Flow(aut, pres, tuple(spcs[i] for i in assignment))
                if verify_flow(flow) is not True:
                    raise VerificationError("search produced a non-flow")
                return flow
    return FlowSearchExhausted(max_states, tried, automata_budget)


def _iter_labelings(pres, aut: Automaton, spcs, compatible) -> Iterator[list[int]]:
    """All consistent labelings, backtracking after transition-consistency
    propagation; domains are SPC indices in canonical order, so solutions
    come out canonically ordered."""
    m = aut.n_states
    arcs = [
        (q, t, x)
        for (q, x), t in sorted(aut.delta.items(), key=lambda kv: (kv[0][0], kv[0][1]))
    ]
    domains: list[list[int]] = [list(range(len(spcs))) for _ in range(m)]
    changed = True
    while changed:
        changed = False
        for (q, t, x) in arcs:
            dq, dt = domains[q - 1], domains[t - 1]
            keep = [i for i in dq if any(compatible(i, k, x) for k in dt)]
            if len(keep) != len(dq):
                domains[q - 1] = keep
                changed = True
            keep_t = [k for k in dt if any(compatible(i, k, x) for i in domains[q - 1])]
            if len(keep_t) != len(dt):
                domains[t - 1] = keep_t
                changed = True
        if any(not d for d in domains):
            return

    assignment: list[Optional[int]] = [None] * m

    def consistent(state: int, idx: int) -> bool:
        for (q, t, x) in arcs:
            vq = idx if q == state else assignment[q - 1]
            vt = idx if t == state else assignment[t - 1]
            if vq is not None and vt is not None and not compatible(vq, vt, x):
                return False
        return True

    def backtrack(state: int) -> Iterator[list[int]]:
        if state > m:
            yield list(assignment)
            return
        for idx in domains[state - 1]:
            if consistent(state, idx):
                assignment[state - 1] = idx
                yield from backtrack(state + 1)
                assignment[state - 1] = None

    yield from backtrack(1)


def _search_labeling(pres, aut: Automaton, spcs, compatible) -> Optional[list[int]]:
    for assignment in _iter_labelings(pres, aut, spcs, compatible):
        return assignment
    return None
