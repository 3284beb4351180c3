"""Local structure at a regular J-class: the RLM and GM quotients,
right/left/group-mapping classification, and Rees coordinates together
with the coordinate action on them.

The coordinatization fixes the least idempotent e of the class, G = the
H-class of e, and least-element representatives p_a in a n L_e and
q_b in R_e n b; every element of the class is then p_a * g * q_b for a
unique g, and the structure matrix entry C(b, a) is the coordinate of
q_b * p_a (or 0 when the product drops out of the class).  All of this
is verified exhaustively at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .core import FiniteGroup, FiniteSemigroup, PartialTransformation, maximal_subgroup
from .errors import InputError, VerificationError
from .products import ActionPair, DivisionWitness, WreathProduct, check_division, wreath


@dataclass
class JClassRef:
    """A J-class of a semigroup with its R-class list A and L-class list B.

    Ids are the canonical Green ids (classes ordered by least element), so
    references are stable across runs.
    """

    sgp: FiniteSemigroup
    j_id: int
    a_classes: list[int] = field(init=False)
    b_classes: list[int] = field(init=False)

    def __post_init__(self):
        gs = self.sgp.green()
        if not 0 <= self.j_id < len(gs.j_classes):
            raise InputError(f"no J-class with id {self.j_id}")
        members = gs.j_classes[self.j_id]
        self.a_classes = sorted({gs.r_of[i] for i in members})
        self.b_classes = sorted({gs.l_of[i] for i in members})

    @property
    def members(self) -> list[int]:
        return self.sgp.green().j_classes[self.j_id]

    @property
    def is_regular(self) -> bool:
        return self.sgp.green().regular[self.j_id]

    def contains_nontrivial_subgroup(self) -> bool:
        gs = self.sgp.green()
        return any(
            gs.j_of[e] == self.j_id and len(gs.h_classes[gs.h_of[e]]) > 1
            for e in gs.idempotents
        )


# -- classification ------------------------------------------------------


@dataclass
class Classification:
    right_mapping: bool
    left_mapping: bool
    generalized_group_mapping: bool
    group_mapping: bool
    zero_index: Optional[int]
    zero_minimal_ideals: list[tuple[int, list[int]]]  # (j_id, ideal incl. zero)
    distinguished_j: Optional[int]


def _zero_minimal_ideals(sgp: FiniteSemigroup) -> tuple[Optional[int], list[tuple[int, list[int]]]]:
    gs = sgp.green()
    z = sgp.zero_index()
    out = []
    if z is None or len(sgp.elements) == 1:
        # the kernel counts as the 0-minimal ideal (a trivial semigroup is
        # its own zero, but its minimal ideal still counts)
        z = None
        for c, members in enumerate(gs.j_classes):
            if gs.j_order[c] == {c}:
                out.append((c, list(members)))
        if len(out) != 1:
            raise VerificationError("finite semigroup without unique kernel")
    else:
        zc = gs.j_of[z]
        for c, members in enumerate(gs.j_classes):
            if c != zc and gs.j_order[c] == {c, zc}:
                out.append((c, list(members) + [z]))
    return z, out


def classify(sgp: FiniteSemigroup) -> Classification:
    """Right/left/group-mapping flags via faithfulness on 0-minimal ideals."""
    z, ideals = _zero_minimal_ideals(sgp)
    n = len(sgp.elements)
    right_on = []
    left_on = []
    for j_id, ideal in ideals:
        right_maps = {
            tuple(sgp.mul_index(a, s) for a in ideal) for s in range(n)
        }
        if len(right_maps) == n:
            right_on.append(j_id)
        left_maps = {
            tuple(sgp.mul_index(s, a) for a in ideal) for s in range(n)
        }
        if len(left_maps) == n:
            left_on.append(j_id)
    right_mapping = bool(right_on)
    left_mapping = bool(left_on)
    distinguished = None
    if right_mapping or left_mapping:
        if len(ideals) != 1:
            raise VerificationError(
                "right/left mapping semigroup with several 0-minimal ideals"
            )
        distinguished = ideals[0][0]
        if not sgp.green().regular[distinguished]:
            raise VerificationError("0-minimal ideal of a mapping semigroup not regular")
    ggm = right_mapping and left_mapping
    gm = False
    if ggm:
        gm = JClassRef(sgp, distinguished).contains_nontrivial_subgroup()
    return Classification(
        right_mapping, left_mapping, ggm, gm, z, ideals, distinguished
    )


# -- RLM quotient ---------------------------------------------------------


@dataclass
class RlmQuotient:
    """The action of S on the L-classes of J by partial maps, with the
    quotient morphism table."""

    source: FiniteSemigroup
    jref: JClassRef
    rlm: FiniteSemigroup  # transformations on 1..|B|
    morphism: dict[Any, PartialTransformation]
    image_of_j: set[PartialTransformation]


def _lclass_action_map(sgp: FiniteSemigroup, jref: JClassRef, s_idx: int) -> PartialTransformation:
    """The partial map of one element on B, verified representative-free."""
    gs = sgp.green()
    b_pos = {b: k for k, b in enumerate(jref.b_classes)}
    images = []
    for b in jref.b_classes:
        targets = set()
        for u in gs.l_classes[b]:
            p = sgp.mul_index(u, s_idx)
            targets.add(b_pos[gs.l_of[p]] + 1 if gs.j_of[p] == jref.j_id else 0)
        if len(targets) != 1:
            raise VerificationError(
                f"L-class action not well defined at b={b}, s={s_idx}"
            )
        images.append(targets.pop())
    return PartialTransformation(tuple(images))


def rlm_quotient(sgp: FiniteSemigroup, jref: JClassRef) -> RlmQuotient:
    if not jref.is_regular:
        raise InputError("RLM quotient needs a regular J-class")
    named = [
        (name, _lclass_action_map(sgp, jref, gi))
        for name, gi in zip(sgp.gen_names, sgp.gens)
    ]
    rlm = FiniteSemigroup.generate(named)
    morphism = {
        sgp.elements[i]: _lclass_action_map(sgp, jref, i)
        for i in range(len(sgp.elements))
    }
    for v in morphism.values():
        if v not in rlm.index:
            raise VerificationError("quotient morphism leaves the generated image")
    image_of_j = {morphism[sgp.elements[i]] for i in jref.members}

    # the image of J is an aperiodic J-class of the quotient
    rgs = rlm.green()
    img_ids = {rgs.j_of[rlm.index[v]] for v in image_of_j}
    if len(img_ids) != 1:
        raise VerificationError("image of J is not a single J-class")
    for e in rgs.idempotents:
        if rgs.j_of[e] in img_ids and len(rgs.h_classes[rgs.h_of[e]]) > 1:
            raise VerificationError("image of J is not aperiodic")

    cls = classify(rlm)
    if not cls.right_mapping:
        raise VerificationError("RLM quotient is not right mapping")
    distinguished = {
        rlm.elements[i]
        for i in rlm.green().j_classes[cls.distinguished_j]
    }
    if distinguished != image_of_j:
        raise VerificationError(
            "distinguished class of the RLM quotient is not the image of J"
        )
    return RlmQuotient(sgp, jref, rlm, morphism, image_of_j)


# -- GM quotient ------------------------------------------------------------


@dataclass
class GmQuotient:
    source: FiniteSemigroup
    jref: JClassRef
    quotient: FiniteSemigroup  # values are least preimage indices
    morphism: dict[Any, int]
    generalized_only: bool  # True when J is aperiodic (warning case)
    injective_on_all_subgroups: bool


def gm_quotient(sgp: FiniteSemigroup, jref: JClassRef) -> GmQuotient:
    """Quotient by s = t  iff  xsy and xty agree through J for all x,y in J."""
    if not jref.is_regular:
        raise InputError("GM quotient needs a regular J-class")
    gs = sgp.green()
    members = jref.members
    n = len(sgp.elements)
    profiles: dict[tuple, list[int]] = {}
    for s in range(n):
        prof = []
        for x in members:
            xs = sgp.mul_index(x, s)
            for y in members:
                p = sgp.mul_index(xs, y)
                prof.append(p if gs.j_of[p] == jref.j_id else -1)
        profiles.setdefault(tuple(prof), []).append(s)
    class_rep = [0] * n
    for cls_members in profiles.values():
        rep = min(cls_members)
        for s in cls_members:
            class_rep[s] = rep
    # congruence check: multiplication must be well defined on classes
    for u in range(n):
        for v in range(n):
            if class_rep[sgp.mul_index(u, v)] != class_rep[
                sgp.mul_index(class_rep[u], class_rep[v])
            ]:
                raise VerificationError("J-profile relation is not a congruence")

    reps = sorted(set(class_rep))
    quotient = FiniteSemigroup.from_elements(
        reps,
        lambda a, b: class_rep[sgp.mul_index(a, b)],
        sort_key=lambda v: v,
        gen_values=[class_rep[g] for g in sgp.gens],
        gen_names=list(sgp.gen_names),
    )
    morphism = {sgp.elements[i]: class_rep[i] for i in range(n)}

    generalized_only = not jref.contains_nontrivial_subgroup()
    qcls = classify(quotient)
    if generalized_only:
        if not qcls.generalized_group_mapping:
            raise VerificationError("GM image is not generalized group mapping")
    elif not qcls.group_mapping:
        raise VerificationError("GM image is not group mapping")

    # injectivity on subgroups: guaranteed for subgroups whose identity
    # lies in J (that one is asserted), recorded as data for the rest
    injective_all = True
    for e in gs.idempotents:
        h_members = gs.h_classes[gs.h_of[e]]
        image = {class_rep[i] for i in h_members}
        if len(image) != len(h_members):
            injective_all = False
            if gs.j_of[e] == jref.j_id:
                raise VerificationError(
                    "GM morphism not injective on a subgroup of the distinguished class"
                )
    return GmQuotient(sgp, jref, quotient, morphism, generalized_only, injective_all)


# -- Rees coordinates -------------------------------------------------------


@dataclass
class ReesCoordinates:
    """J u {0} as a coordinatized 0-simple structure: group G, index sets
    A (R-classes) and B (L-classes), structure matrix C over G u {0}
    (entry -1 encodes 0), and the two coordinate maps."""

    sgp: FiniteSemigroup
    jref: JClassRef
    group: FiniteGroup
    a_classes: list[int]
    b_classes: list[int]
    matrix: list[list[int]]  # [b_pos][a_pos] -> G index or -1
    coord: dict[int, tuple[int, int, int]]  # element idx -> (a_pos, g_idx, b_pos)
    uncoord: dict[tuple[int, int, int], int]
    e_index: int
    p_reps: list[int]  # per a_pos
    q_reps: list[int]  # per b_pos

    def verify_transport(self) -> None:
        """uncoord(a,g,b) * uncoord(a',g',b') = uncoord(a, g C(b,a') g', b')
        or falls out of J exactly when C(b,a') = 0; checked for all pairs."""
        sgp, g = self.sgp, self.group
        gs = sgp.green()
        for u, (a1, g1, b1) in self.coord.items():
            for v, (a2, g2, b2) in self.coord.items():
                p = sgp.mul_index(u, v)
                c = self.matrix[b1][a2]
                if c < 0:
                    if gs.j_of[p] == self.jref.j_id:
                        raise VerificationError(
                            "product stayed in J where the structure matrix is 0"
                        )
                else:
                    want = self.uncoord[(a1, g.mul(g.mul(g1, c), g2), b2)]
                    if p != want:
                        raise VerificationError("multiplication transport failed")

    def verify_matrix_regular(self) -> None:
        for row in self.matrix:
            if all(v < 0 for v in row):
                raise VerificationError("structure matrix has a zero row")
        for a in range(len(self.a_classes)):
            if all(row[a] < 0 for row in self.matrix):
                raise VerificationError("structure matrix has a zero column")


def rees_coordinates(sgp: FiniteSemigroup, jref: JClassRef) -> ReesCoordinates:
    if not jref.is_regular:
        raise InputError("Rees coordinates need a regular J-class")
    gs = sgp.green()
    j_id = jref.j_id
    idems = sorted(e for e in gs.idempotents if gs.j_of[e] == j_id)
    e = idems[0]
    group = maximal_subgroup(sgp, e)
    g_index = {sgp.index[v]: k for k, v in enumerate(group.elements)}
    a_classes, b_classes = jref.a_classes, jref.b_classes
    le, re = gs.l_of[e], gs.r_of[e]

    p_reps = []
    for a in a_classes:
        inter = [i for i in gs.r_classes[a] if gs.l_of[i] == le]
        if not inter:
            raise VerificationError("empty R-class/L_e intersection in a J-class")
        p_reps.append(min(inter))
    q_reps = []
    for b in b_classes:
        inter = [i for i in gs.l_classes[b] if gs.r_of[i] == re]
        if not inter:
            raise VerificationError("empty R_e/L-class intersection in a J-class")
        q_reps.append(min(inter))

    a_pos = {a: k for k, a in enumerate(a_classes)}
    b_pos = {b: k for k, b in enumerate(b_classes)}
    group_indices = [sgp.index[v] for v in group.elements]

    coord: dict[int, tuple[int, int, int]] = {}
    uncoord: dict[tuple[int, int, int], int] = {}
    for u in jref.members:
        a = a_pos[gs.r_of[u]]
        b = b_pos[gs.l_of[u]]
        hits = []
        pa, qb = p_reps[a], q_reps[b]
        for k, gi in enumerate(group_indices):
            if sgp.mul_index(sgp.mul_index(pa, gi), qb) == u:
                hits.append(k)
        if len(hits) != 1:
            raise VerificationError(
                f"element {u} is p_a*g*q_b for {len(hits)} values of g"
            )
        coord[u] = (a, hits[0], b)
        uncoord[(a, hits[0], b)] = u

    if len(uncoord) != len(jref.members) or len(uncoord) != len(a_classes) * len(
        group.elements
    ) * len(b_classes):
        raise VerificationError("coordinates are not a bijection onto A x G x B")

    matrix = []
    for b in range(len(b_classes)):
        row = []
        for a in range(len(a_classes)):
            prod = sgp.mul_index(q_reps[b], p_reps[a])
            if gs.j_of[prod] == j_id:
                if prod not in g_index:
                    raise VerificationError("q_b * p_a stayed in J but left H_e")
                row.append(g_index[prod])
            else:
                row.append(-1)
        matrix.append(row)

    rc = ReesCoordinates(
        sgp, jref, group, list(a_classes), list(b_classes), matrix,
        coord, uncoord, e, p_reps, q_reps,
    )
    rc.verify_transport()
    rc.verify_matrix_regular()
    return rc


# -- the coordinate form of the action (labels per generator) ---------------


@dataclass
class GroupMappingPresentation:
    """A (generalized) group mapping semigroup in coordinates: the Rees
    data of its distinguished class plus, per generator x, the partial map
    b -> b.x on B and the group label b -> (b)x.

    The reproduction law (a,g,b)x = (a, g*(b)x, b.x) is verified for every
    coordinate triple and every generator at construction.
    """

    sgp: FiniteSemigroup
    jref: JClassRef
    rees: ReesCoordinates
    rlmq: RlmQuotient
    rlm_of_gen: dict[str, tuple[int, ...]]  # 1-based images on B, 0 undefined
    label_of_gen: dict[str, tuple[int, ...]]  # G indices, identity where undefined
    group_mapping: bool

    @property
    def group(self) -> FiniteGroup:
        return self.rees.group

    @property
    def n_b(self) -> int:
        return len(self.rees.b_classes)

    def label_of(self, b_pos: int, s_value) -> Optional[tuple[int, int]]:
        """((b)s, b.s) for an arbitrary element, or None if b.s is undefined."""
        rc = self.rees
        s_idx = self.sgp.index[s_value]
        u = rc.uncoord[(0, rc.group.identity, b_pos)]
        p = self.sgp.mul_index(u, s_idx)
        if self.sgp.green().j_of[p] != self.jref.j_id:
            return None
        a, g, b2 = rc.coord[p]
        if a != 0:
            raise VerificationError("action moved the R-class coordinate")
        return g, b2


def group_mapping_presentation(sgp: FiniteSemigroup) -> GroupMappingPresentation:
    cls = classify(sgp)
    if not cls.generalized_group_mapping:
        raise InputError("semigroup is not generalized group mapping")
    jref = JClassRef(sgp, cls.distinguished_j)
    rc = rees_coordinates(sgp, jref)
    rlmq = rlm_quotient(sgp, jref)
    group = rc.group
    nb = len(rc.b_classes)

    rlm_of_gen: dict[str, tuple[int, ...]] = {}
    label_of_gen: dict[str, tuple[int, ...]] = {}
    for name, gi in zip(sgp.gen_names, sgp.gens):
        rlm_map = []
        labels = []
        for b in range(nb):
            u = rc.uncoord[(0, group.identity, b)]
            p = sgp.mul_index(u, gi)
            if sgp.green().j_of[p] == jref.j_id:
                a2, g2, b2 = rc.coord[p]
                rlm_map.append(b2 + 1)
                labels.append(g2)
            else:
                rlm_map.append(0)
                labels.append(group.identity)
        rlm_of_gen[name] = tuple(rlm_map)
        label_of_gen[name] = tuple(labels)
        # the RLM quotient must agree with the coordinate action on B
        lam = rlmq.morphism[sgp.elements[gi]]
        if lam.images != tuple(rlm_map):
            raise VerificationError("coordinate action disagrees with the RLM map")

    pres = GroupMappingPresentation(
        sgp, jref, rc, rlmq, rlm_of_gen, label_of_gen, cls.group_mapping
    )
    _verify_coordinate_action(pres)
    return pres


def _verify_coordinate_action(pres: GroupMappingPresentation) -> None:
    """Eq-style reproduction: raw products match (a, g*(b)x, b.x) everywhere."""
    sgp, rc = pres.sgp, pres.rees
    gs = sgp.green()
    group = rc.group
    for name, gi in zip(sgp.gen_names, sgp.gens):
        rlm_map = pres.rlm_of_gen[name]
        labels = pres.label_of_gen[name]
        for u, (a, g, b) in rc.coord.items():
            p = sgp.mul_index(u, gi)
            if rlm_map[b] == 0:
                if gs.j_of[p] == pres.jref.j_id:
                    raise VerificationError(
                        f"(a,g,b){name} stayed in J although b.{name} is undefined"
                    )
            else:
                want = rc.uncoord[(a, group.mul(g, labels[b]), rlm_map[b] - 1)]
                if p != want:
                    raise VerificationError(
                        f"coordinate action fails at {(a, g, b)} under {name}"
                    )


# -- theta^R and the wreath embedding ---------------------------------------


def r_class_action(sgp: FiniteSemigroup, jref: JClassRef, r_id: int) -> ActionPair:
    """The faithful partial action of S on one R-class of the distinguished
    J-class of a right mapping semigroup."""
    cls = classify(sgp)
    if not cls.right_mapping or cls.distinguished_j != jref.j_id:
        raise InputError("theta^R needs a right mapping semigroup at its ideal")
    gs = sgp.green()
    if r_id not in jref.a_classes:
        raise InputError("R-class does not lie in the given J-class")
    points = sorted(gs.r_classes[r_id])

    def act(u, s_value):
        p = sgp.mul_index(u, sgp.index[s_value])
        if gs.j_of[p] != jref.j_id:
            return None
        if gs.r_of[p] != r_id:
            raise VerificationError("stability violated: u*s left the R-class inside J")
        return p

    pair = ActionPair(points, sgp, act)
    pair.check_faithful()
    return pair


def theta_prime_representation(sgp: FiniteSemigroup) -> FiniteSemigroup:
    """A right mapping semigroup as partial transformations of its
    distinguished J-class (the restriction of the ideal action away from
    zero, which stays faithful)."""
    cls = classify(sgp)
    if not cls.right_mapping:
        raise InputError("theta' needs a right mapping semigroup")
    gs = sgp.green()
    members = sorted(gs.j_classes[cls.distinguished_j])
    pos = {u: k + 1 for k, u in enumerate(members)}
    named = []
    for name, gi in zip(sgp.gen_names, sgp.gens):
        images = []
        for u in members:
            p = sgp.mul_index(u, gi)
            images.append(pos[p] if gs.j_of[p] == cls.distinguished_j else 0)
        named.append((name, PartialTransformation(tuple(images))))
    rep = FiniteSemigroup.generate(named)
    if len(rep) != len(sgp):
        raise VerificationError("theta' representation is not faithful")
    return rep


@dataclass
class FaspEmbedding:
    """S embedded in (G,G) wr (B, RLM_J(S)) via x -> ((b)x, RLM(x))."""

    presentation: GroupMappingPresentation
    wreath_product: WreathProduct
    lifts: dict[str, Any]
    witness: DivisionWitness

    def element_image(self, s_value):
        for w, s in self.witness.morphism.items():
            if s == s_value:
                return w
        raise InputError("element not in the embedded image")


def fasp_embedding(pres: GroupMappingPresentation) -> FaspEmbedding:
    group = pres.group
    w = wreath(
        ActionPair.of_group(group),
        ActionPair.of_transformations(pres.rlmq.rlm),
        restrict_to_domain=True,
    )
    lifts = {}
    for name in pres.sgp.gen_names:
        rlm_map = pres.rlm_of_gen[name]
        labels = pres.label_of_gen[name]
        fvals = [
            labels[b] if rlm_map[b] != 0 else None for b in range(pres.n_b)
        ]
        lifts[name] = w.make(fvals, PartialTransformation(rlm_map))
    witness = check_division(pres.sgp, w, lifts=lifts)
    if len(witness.morphism) != len(pres.sgp.elements):
        raise VerificationError("wreath embedding is not injective")
    _verify_fasp_action(pres, w, witness)
    return FaspEmbedding(pres, w, lifts, witness)


def _verify_fasp_action(pres, w, witness) -> None:
    """The wreath image acts on G x B exactly as S does on R_e."""
    sgp, rc = pres.sgp, pres.rees
    gs = sgp.green()
    for wv, sv in witness.morphism.items():
        s_idx = sgp.index[sv]
        for u, (a, g, b) in rc.coord.items():
            if a != 0:
                continue  # R_e is the a = 0 slice
            p = sgp.mul_index(u, s_idx)
            in_j = gs.j_of[p] == pres.jref.j_id
            img = w.act((g, b + 1), wv)
            if not in_j:
                if img is not None:
                    raise VerificationError("wreath action defined where theta^R is not")
            else:
                a2, g2, b2 = rc.coord[p]
                if img != (g2, b2 + 1):
                    raise VerificationError(
                        f"wreath action disagrees with theta^R at {(g, b)} under {sv!r}"
                    )
