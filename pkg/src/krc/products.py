"""Products of transformation semigroups and division certificates.

The wreath product here follows the convention that the left factor's
functions are post-composed through the right factor's action:
(b,q)(f,t) = (b(qf), qt) and (f,t)(f',t') = (f.(t o f'), tt').  Function
parts may carry None entries, read as an adjoined identity of the left
semigroup; the skip convention keeps the product associative on partial
right actions.

Division S < T is always handled as a checkable certificate: generator
lifts whose generated relation inside T x S is a surjective function onto
S.  Search mode scans lift tuples in canonical order under a budget and
never claims nonexistence.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

from .core import FiniteGroup, FiniteSemigroup, PartialTransformation
from .errors import InputError, ResourceError, VerificationError

WREATH_CARRIER_BUDGET = 10**6
DIVISION_SEARCH_BUDGET = 2_000_000


class EnumeratedCarrier:
    """A plain enumerated multiplication structure (no Cayley machinery).

    Used for carriers that are too large or too transient to wrap in a
    full FiniteSemigroup; satisfies the same .elements/.mul protocol.
    """

    def __init__(self, elements: list[Any], mul: Callable[[Any, Any], Any]):
        self.elements = elements
        self._mul = mul
        self._cache: dict[tuple[Any, Any], Any] = {}

    def __len__(self):
        return len(self.elements)

    def mul(self, u, v):
        key = (u, v)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._mul(u, v)
            self._cache[key] = hit
        return hit


class PairSemigroup:
    """Componentwise product of two multiplication structures."""

    def __init__(self, left, right, enumerate_carrier: bool = False):
        self.left = left
        self.right = right
        self.elements = None
        if enumerate_carrier:
            self.elements = [
                (a, b) for a in left.elements for b in right.elements
            ]

    def mul(self, u, v):
        return (self.left.mul(u[0], v[0]), self.right.mul(u[1], v[1]))


# -- actions -------------------------------------------------------------


@dataclass
class ActionPair:
    """A transformation semigroup (Q, S): S with a faithful partial right
    action on the ordered point set Q."""

    points: list[Any]
    sgp: FiniteSemigroup
    act: Callable[[Any, Any], Optional[Any]]

    def position(self, point) -> int:
        if not hasattr(self, "_pos"):
            self._pos = {p: i for i, p in enumerate(self.points)}
        return self._pos[point]

    def act_table(self, value) -> PartialTransformation:
        """The element's action as a partial transformation of 1..|Q|."""
        images = []
        for p in self.points:
            img = self.act(p, value)
            images.append(0 if img is None else self.position(img) + 1)
        return PartialTransformation(tuple(images))

    def check_faithful(self) -> None:
        seen: dict = {}
        for v in self.sgp.elements:
            t = self.act_table(v)
            if t in seen:
                raise VerificationError(
                    f"action not faithful: {seen[t]!r} and {v!r} act identically"
                )
            seen[t] = v

    def check_action(self) -> None:
        """(p.u).v = p.(uv) over everything, with undefinedness matching."""
        for u in self.sgp.elements:
            for v in self.sgp.elements:
                uv = self.sgp.mul(u, v)
                for p in self.points:
                    step = self.act(p, u)
                    lhs = None if step is None else self.act(step, v)
                    if lhs != self.act(p, uv):
                        raise VerificationError(
                            f"not an action at point {p!r} with ({u!r}, {v!r})"
                        )

    @classmethod
    def of_transformations(cls, sgp: FiniteSemigroup) -> "ActionPair":
        n = sgp.degree

        def act(q, f):
            img = f(q)
            return img if img else None

        return cls(list(range(1, n + 1)), sgp, act)

    @classmethod
    def of_group(cls, group: FiniteGroup) -> "ActionPair":
        """(G, G): the right regular action, with elements 0..|G|-1."""
        table = group.table
        sgp = FiniteSemigroup.from_elements(
            range(len(group)), lambda a, b: table[a][b], sort_key=lambda v: v
        )
        return cls(list(range(len(group))), sgp, lambda p, g: table[p][g])

    @classmethod
    def trivial(cls) -> "ActionPair":
        sgp = FiniteSemigroup.generate([("1", PartialTransformation.identity(1))])
        return cls([1], sgp, lambda p, f: p)


def direct_product_pair(a: ActionPair, b: ActionPair) -> ActionPair:
    """(Q, S) x (Q', S'): componentwise action on Q x Q'."""
    values = [(u, v) for u in a.sgp.elements for v in b.sgp.elements]
    ka, kb = a.sgp.index, b.sgp.index

    def mul(u, v):
        return (a.sgp.mul(u[0], v[0]), b.sgp.mul(u[1], v[1]))

    sgp = FiniteSemigroup.from_elements(
        values, mul, sort_key=lambda w: (ka[w[0]], kb[w[1]])
    )
    points = [(p, q) for p in a.points for q in b.points]

    def act(pq, w):
        ia = a.act(pq[0], w[0])
        ib = b.act(pq[1], w[1])
        if ia is None or ib is None:
            return None
        return (ia, ib)

    return ActionPair(points, sgp, act)


# -- wreath products ------------------------------------------------------


class WreathProduct:
    """(B,S) wr (Q,T) as a lazy carrier on pairs (f, t).

    f is a tuple over Q-positions with values in S (or None for the
    adjoined identity), t is an element of T.  Elements multiply by the
    wreath formula and act on B x Q points; the full carrier S^Q x T is
    materialized only under the configured budget.
    """

    def __init__(self, left: ActionPair, right: ActionPair, restrict_to_domain: bool = False):
        self.left = left
        self.right = right
        self.points = [(b, q) for b in left.points for q in right.points]
        # with restrict_to_domain, function parts carry None outside the
        # domain of their own t-component; this keeps s -> (f_s, t_s) maps
        # structurally injective over partial right actions
        self.restrict_to_domain = restrict_to_domain
        self._cache: dict = {}

    def make(self, fvals: Sequence[Any], t) -> tuple[tuple, Any]:
        if len(fvals) != len(self.right.points):
            raise InputError("function part has wrong arity")
        if self.restrict_to_domain:
            fvals = [
                None if self.right.act(q, t) is None else v
                for v, q in zip(fvals, self.right.points)
            ]
        return (tuple(fvals), t)

    def mul(self, u, v):
        key = (u, v)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        f1, t1 = u
        f2, t2 = v
        out = []
        for i, q in enumerate(self.right.points):
            qi = self.right.act(q, t1)
            if qi is None:
                out.append(f1[i])
                continue
            other = f2[self.right.position(qi)]
            if f1[i] is None:
                out.append(other)
            elif other is None:
                out.append(f1[i])
            else:
                out.append(self.left.sgp.mul(f1[i], other))
        t12 = self.right.sgp.mul(t1, t2)
        if self.restrict_to_domain:
            out = [
                None if self.right.act(q, t12) is None else w
                for w, q in zip(out, self.right.points)
            ]
        res = (tuple(out), t12)
        self._cache[key] = res
        return res

    def act(self, point, w):
        (b, q), (f, t) = point, w
        fq = f[self.right.position(q)]
        b2 = b if fq is None else self.left.act(b, fq)
        q2 = self.right.act(q, t)
        if b2 is None or q2 is None:
            return None
        return (b2, q2)

    def sort_key(self, w):
        f, t = w
        li = self.left.sgp.index
        return (
            self.right.sgp.index[t],
            tuple(-1 if v is None else li[v] for v in f),
        )

    def act_table(self, w) -> PartialTransformation:
        pos = {p: i for i, p in enumerate(self.points)}
        images = []
        for p in self.points:
            img = self.act(p, w)
            images.append(0 if img is None else pos[img] + 1)
        return PartialTransformation(tuple(images))

    def action_pair(self, carrier: FiniteSemigroup) -> ActionPair:
        return ActionPair(list(self.points), carrier, self.act)

    def full_carrier(self, budget: int = WREATH_CARRIER_BUDGET) -> EnumeratedCarrier:
        size = len(self.left.sgp) ** len(self.right.points) * len(self.right.sgp)
        if size > budget:
            raise ResourceError(
                f"wreath carrier of size {size} exceeds the budget of {budget}"
            )
        elements = [
            (f, t)
            for t in self.right.sgp.elements
            for f in itertools.product(self.left.sgp.elements, repeat=len(self.right.points))
        ]
        elements.sort(key=self.sort_key)
        return EnumeratedCarrier(elements, self.mul)

    def generated(self, named_gens: Sequence[tuple[str, Any]]) -> FiniteSemigroup:
        return FiniteSemigroup.generate(
            named_gens, mul=self.mul, sort_key=self.sort_key
        )


def wreath(
    left: ActionPair, right: ActionPair, restrict_to_domain: bool = False
) -> WreathProduct:
    return WreathProduct(left, right, restrict_to_domain)


def semigroup_wreath_oracle(s_oracle, t_sgp: FiniteSemigroup):
    """The abstract wreath S wr T = S^(T^1) x T with T acting on positions
    by right translation; returns (carrier points list, mul oracle).

    Positions are T's elements plus an adjoined identity marker.  Used for
    derived-semigroup division targets where no state set is given.
    """
    marker = ("id",)
    positions = [marker] + list(t_sgp.elements)
    pos_index = {p: i for i, p in enumerate(positions)}

    def translate(p, t):
        return t if p is positions[0] else t_sgp.mul(p, t)

    def mul(u, v):
        f1, t1 = u
        f2, t2 = v
        out = []
        for i, p in enumerate(positions):
            q = translate(p, t1)
            other = f2[pos_index[q]]
            if f1[i] is None:
                out.append(other)
            elif other is None:
                out.append(f1[i])
            else:
                out.append(s_oracle.mul(f1[i], other))
        return (tuple(out), t_sgp.mul(t1, t2))

    return positions, EnumeratedCarrier([], mul)


def enumerated_semigroup_wreath(
    s_sgp: FiniteSemigroup,
    t_sgp: FiniteSemigroup,
    budget: int = WREATH_CARRIER_BUDGET,
) -> EnumeratedCarrier:
    """S wr T with the full carrier S^(T^1) x T materialized (small cases
    only); element order is canonical for reproducible searches."""
    positions, oracle = semigroup_wreath_oracle(s_sgp, t_sgp)
    size = len(s_sgp.elements) ** len(positions) * len(t_sgp.elements)
    if size > budget:
        raise ResourceError(
            f"abstract wreath carrier of size {size} exceeds the budget of {budget}"
        )
    elements = [
        (f, t)
        for t in t_sgp.elements
        for f in itertools.product(s_sgp.elements, repeat=len(positions))
    ]
    oracle.elements = elements
    return oracle


# -- semidirect products --------------------------------------------------


def semidirect(
    s: FiniteSemigroup,
    t: FiniteSemigroup,
    beta: Callable[[Any, Any], Any],
) -> FiniteSemigroup:
    """S x| T for a left action beta(t, s) of T on S by endomorphisms.

    The action laws are verified exhaustively before the table is built.
    """
    for tv in t.elements:
        for sv in s.elements:
            if beta(tv, sv) not in s.index:
                raise InputError("beta leaves the carrier")
            for sw in s.elements:
                if beta(tv, s.mul(sv, sw)) != s.mul(beta(tv, sv), beta(tv, sw)):
                    raise InputError("beta(t, -) is not an endomorphism")
        for tw in t.elements:
            for sv in s.elements:
                if beta(t.mul(tv, tw), sv) != beta(tv, beta(tw, sv)):
                    raise InputError("beta is not a left action")

    def mul(u, v):
        return (s.mul(u[0], beta(u[1], v[0])), t.mul(u[1], v[1]))

    values = [(sv, tv) for sv in s.elements for tv in t.elements]
    return FiniteSemigroup.from_elements(
        values, mul, sort_key=lambda w: (s.index[w[0]], t.index[w[1]])
    )


# -- division certificates -------------------------------------------------


@dataclass
class DivisionWitness:
    """Generator lifts realizing S < T, with the verified graph closure."""

    source: FiniteSemigroup
    target: Any
    lifts: dict[str, Any]
    morphism: dict[Any, Any] = field(repr=False)

    def verify(self) -> None:
        result = _relation_closure(self.source, self.target, self.lifts)
        if not isinstance(result, dict):
            raise VerificationError(f"division witness failed to re-verify: {result}")
        if result != self.morphism:
            raise VerificationError("division witness morphism table mismatch")


@dataclass
class ExhaustionReport:
    """Search gave up; explicitly not a nonexistence claim."""

    tried: int
    budget: int
    searched_all: bool

    def __bool__(self):
        return False


def _relation_closure(s: FiniteSemigroup, target, lifts: dict[str, Any]):
    """Close {(lift(x), x)} under multiplication; return the t -> s map if
    it stays functional, else a description of the first conflict."""
    gen_pairs = []
    for name, gi in zip(s.gen_names, s.gens):
        if name not in lifts:
            return f"no lift for generator {name!r}"
        gen_pairs.append((lifts[name], s.elements[gi]))
    mapping: dict[Any, Any] = {}
    frontier = []
    for tv, sv in gen_pairs:
        if tv in mapping:
            if mapping[tv] != sv:
                return f"conflict at generator lift {tv!r}"
        else:
            mapping[tv] = sv
            frontier.append(tv)
    while frontier:
        new = []
        for tv in frontier:
            sv = mapping[tv]
            for tg, sg in gen_pairs:
                t2 = target.mul(tv, tg)
                s2 = s.mul(sv, sg)
                prev = mapping.get(t2)
                if prev is None:
                    mapping[t2] = s2
                    new.append(t2)
                elif prev != s2:
                    return f"relation not functional at {t2!r}"
        frontier = new
    if len(set(mapping.values())) != len(s.elements):
        return "relation not surjective onto the source"
    return mapping


def check_division(
    s: FiniteSemigroup,
    target,
    lifts: Optional[dict[str, Any]] = None,
    budget: int = DIVISION_SEARCH_BUDGET,
):
    """Certify S < target.

    With lifts: verify them (VerificationError on failure).  Without:
    scan lift tuples in canonical order, returning the first witness or an
    ExhaustionReport; exhaustion is an explicit "unknown".
    """
    if lifts is not None:
        result = _relation_closure(s, target, lifts)
        if not isinstance(result, dict):
            raise VerificationError(f"division lifts rejected: {result}")
        witness = DivisionWitness(s, target, dict(lifts), result)
        witness.verify()
        return witness

    if getattr(target, "elements", None) is None:
        raise InputError("division search needs an enumerated target")
    names = list(s.gen_names)
    k = len(names)
    # an element whose solo closure already conflicts can never appear at
    # that position of a viable tuple
    viable: list[list[Any]] = []
    for i, name in enumerate(names):
        sub = FiniteSemigroup.generate(
            [(name, s.elements[s.gens[i]])], mul=s._mul,
            sort_key=lambda v: s.index[v],
        )
        ok = [
            tv
            for tv in target.elements
            if isinstance(_relation_closure(sub, target, {name: tv}), dict)
        ]
        viable.append(ok)
    tried = 0
    total = 1
    for ok in viable:
        total *= len(ok)
    for combo in itertools.product(*viable):
        if tried >= budget:
            return ExhaustionReport(tried, budget, searched_all=False)
        tried += 1
        lifts_try = dict(zip(names, combo))
        result = _relation_closure(s, target, lifts_try)
        if isinstance(result, dict):
            witness = DivisionWitness(s, target, lifts_try, result)
            witness.verify()
            return witness
    return ExhaustionReport(tried, budget, searched_all=True)


# -- the product-of-wreaths embedding --------------------------------------


@dataclass
class EmbeddingWitness:
    """A verified injective morphism given by an element table."""

    table: dict[Any, Any]
    target_mul: Callable[[Any, Any], Any]

    def verify_morphism(self, mul_source) -> None:
        items = list(self.table)
        if len(set(self.table.values())) != len(items):
            raise VerificationError("embedding is not injective")
        for u in items:
            for v in items:
                uv = mul_source(u, v)
                if self.table[uv] != self.target_mul(self.table[u], self.table[v]):
                    raise VerificationError(f"embedding not a morphism at ({u}, {v})")


def embed_product_of_wreaths(
    qs: ActionPair,
    qs2: ActionPair,
    pt: ActionPair,
    pt2: ActionPair,
    carrier_budget: int = 5000,
):
    """Realize (Q,S)wr(P,T) x (Q',S')wr(P',T') inside
    ((Q,S)x(Q',S')) wr ((P,T)x(P',T')) via ((f,t),(f',t')) -> (F,(t,t'))
    with F(p,p') = (pf, p'f'); verified injective, multiplicative, and
    action-compatible point by point.
    """
    w1 = wreath(qs, pt)
    w2 = wreath(qs2, pt2)
    c1 = w1.full_carrier(carrier_budget)
    c2 = w2.full_carrier(carrier_budget)
    if len(c1.elements) * len(c2.elements) > carrier_budget:
        raise ResourceError(
            f"product carrier exceeds embedding budget {carrier_budget}"
        )
    inner = direct_product_pair(qs, qs2)
    outer = direct_product_pair(pt, pt2)
    big = wreath(inner, outer)

    def phi(u):
        (f, t), (f2, t2) = u
        fv = []
        for (p, p2) in big.right.points:
            fv.append((f[pt.position(p)], f2[pt2.position(p2)]))
        return big.make(fv, (t, t2))

    source = PairSemigroup(c1, c2, enumerate_carrier=True)
    table = {u: phi(u) for u in source.elements}
    witness = EmbeddingWitness(table, big.mul)
    witness.verify_morphism(source.mul)
    # pointwise action agreement: (q,p,q',p') . ((f,t),(f',t'))
    for u in source.elements:
        (f, t), (f2, t2) = u
        for (q, p) in w1.points:
            for (q2, p2) in w2.points:
                a1 = w1.act((q, p), (f, t))
                a2 = w2.act((q2, p2), (f2, t2))
                lhs = None
                if a1 is not None and a2 is not None:
                    lhs = ((a1[0], a2[0]), (a1[1], a2[1]))
                rhs = big.act(((q, q2), (p, p2)), table[u])
                if lhs != rhs:
                    raise VerificationError(
                        f"action mismatch at {(q, p, q2, p2)} under {u}"
                    )
    return witness
