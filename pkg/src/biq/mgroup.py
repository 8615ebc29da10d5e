"""The étale quotient M: pairs (h_E, h_C) of normalizing automorphisms whose
conjugation actions on G agree through α, modulo the centralizers.

Two shapes of C side are supported.  For elliptic C, α(G) is an
EllipticAction and actions on G are permutations of the points of G(k).
For the cuspidal C of a quasi-bielliptic surface, α is one of the action
families and actions are ParamEndos on the family parameter plus the
permutation of its étale elements.

Conventions: every automorphism acts on points, and ad_h(x) = h x h^-1.
The cusp solvers conjugate the other way round, so a C-side element h is
fed to them as its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from biq import cuspaut, ellipt
from biq.errors import BiqError, LiftingAssumptionViolated, NotInNormalizer, NotSubgroup
from biq.grouprec import mult_table, recognize


@dataclass
class Setup:
    """G ⊂ E together with its action on C."""

    sub: ellipt.IsoSub
    fam: cuspaut.ActionFamily | None = None  # cuspidal C
    act: ellipt.EllipticAction | None = None  # elliptic C

    def __post_init__(self):
        if (self.fam is None) == (self.act is None):
            raise BiqError("a setup needs exactly one of an action family or an elliptic action")
        if self.act is not None:
            self._alpha = alpha_map(self.sub, self.act)
            self._alpha_inv = {v.key(): k for k, v in self._alpha.items()}

    @property
    def field(self):
        return self.sub.curve.f

    @property
    def quasi(self) -> bool:
        return self.fam is not None

    def alpha(self, P):
        return self._alpha[P]


def alpha_map(sub: ellipt.IsoSub, act: ellipt.EllipticAction) -> dict:
    """Extend generator images to a homomorphism G(k) -> α(G)(k); check it is one and is injective."""
    E = sub.curve
    if len(sub.gens) != len(act.gens):
        raise BiqError("one image per étale generator is needed")
    ident = ellipt.affine(ellipt.identity_aut(act.curve))
    out = {None: ident}
    frontier = [None]
    while frontier:
        nxt = []
        for P in frontier:
            for g, x in zip(sub.gens, act.gens):
                Q = E.add(P, g)
                img = ellipt.compose_affine(out[P], x)
                if Q in out:
                    if out[Q].key() != img.key():
                        raise BiqError(f"the generator images do not define a homomorphism (at {Q})")
                else:
                    out[Q] = img
                    nxt.append(Q)
        frontier = nxt
    if len({v.key() for v in out.values()}) != len(out):
        raise BiqError("α is not injective on G(k)")
    return out


# ---------------------------------------------------------------------------

def coset_reps(normalizer, centralizer, op, key):
    """One representative per left coset gC, the first in the given order."""
    nkeys = {key(x) for x in normalizer}
    ckeys = [key(x) for x in centralizer]
    if any(k not in nkeys for k in ckeys):
        raise NotSubgroup("centralizer is not contained in the normalizer")
    cset = set(ckeys)
    for x in centralizer:
        for y in centralizer:
            if key(op(x, y)) not in cset:
                raise NotSubgroup("centralizer is not closed under composition")
    seen, reps = set(), []
    for g in normalizer:
        if key(g) in seen:
            continue
        reps.append(g)
        for c in centralizer:
            seen.add(key(op(g, c)))
    return reps


def e_ad(setup: Setup, h: ellipt.AutEO):
    """ad of h_E on G: a ParamEndo in the family's parameter, or a permutation of G(k)."""
    if setup.quasi:
        return ellipt.induced_kernel_ad(h, setup.sub, setup.fam)
    perm = setup.sub.permutation(h)
    if perm is None:
        raise NotInNormalizer(f"{h} does not preserve G(k)")
    return perm


def c_ad(setup: Setup, h):
    """ad of h_C on α(G), pulled back to G: same shape as e_ad."""
    if setup.quasi:
        return cuspaut.induced_ad(setup.fam, cuspaut.invert(h))
    pts = setup.sub.points
    out = []
    for P in pts:
        img = ellipt.conjugate_affine(h, setup.alpha(P))
        Q = setup._alpha_inv.get(img.key(), "missing")
        if Q == "missing":
            raise NotInNormalizer(f"{h} moves α({P}) outside α(G)")
        out.append(pts.index(Q))
    return tuple(out)


def ad_key(x):
    return x.key() if isinstance(x, cuspaut.ParamEndo) else x


def ad_match(setup: Setup, h_E, h_C) -> bool:
    """α ∘ ad_{h_E} = ad_{h_C} ∘ α."""
    return ad_key(e_ad(setup, h_E)) == ad_key(c_ad(setup, h_C))


def compose_ad(x, y):
    """x after y."""
    if isinstance(x, cuspaut.ParamEndo):
        return y.then(x)
    return tuple(x[i] for i in y)


@dataclass
class MatchPair:
    h_E: object
    h_C: object
    action: object

    def describe(self) -> dict:
        return {"h_E": repr(self.h_E), "h_C": repr(self.h_C), "action": repr(self.action)}


@dataclass
class MGroupResult:
    label: str
    witnesses: list
    notes: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.witnesses)


def e_sides(setup: Setup):
    N = ellipt.normalizer_O(setup.sub)
    C = ellipt.centralizer_O(setup.sub)
    return N, C


def c_sides(setup: Setup):
    if setup.quasi:
        R = cuspaut.kpoint_ring(setup.field)
        N = cuspaut.normalizer_enum(setup.fam, R, with_table=False).elements
        C = cuspaut.centralizer_kpoints(setup.fam, setup.field)
        return N, C
    N = ellipt.c_normalizer(setup.act)
    return N, ellipt.c_centralizer(setup.act, N)


def _c_preimage(setup: Setup, action):
    """Some h_C in the normalizer with the given action on G, or None."""
    if setup.quasi:
        sols = cuspaut.ad_preimage(setup.fam, setup.field, action.image, action.etale or None, limit=1)
        return cuspaut.invert(sols[0]) if sols else None
    for h in setup._c_normalizer:
        if c_ad(setup, h) == action:
            return h
    return None


def compute_M(setup: Setup, expected_order: int | None = None) -> MGroupResult:
    """M as the group of actions on G realized on both sides.

    E-side coset representatives of N/C are pushed to their actions on G;
    each action is looked up on the C side.  With ``expected_order`` set, a
    smaller result raises LiftingAssumptionViolated.
    """
    NE, CE = e_sides(setup)
    reps = coset_reps(NE, CE, ellipt.compose_aut, lambda h: h.key())
    notes = [f"E side: {len(reps)} cosets of N/C in Aut(E, O)"]
    if not setup.quasi:
        setup._c_normalizer = ellipt.c_normalizer(setup.act)
    matched = {}
    for h in reps:
        action = e_ad(setup, h)
        k = ad_key(action)
        if k in matched:
            raise BiqError("two E-side cosets act identically on G")
        h_C = _c_preimage(setup, action)
        if h_C is not None:
            matched[k] = MatchPair(h, h_C, action)
    actions = [m.action for m in matched.values()]
    label = recognize(mult_table(actions, compose_ad, key=ad_key))
    if len(reps) % len(actions):
        raise BiqError("|M| does not divide |N_E / C_E|")
    if setup.quasi:
        notes.append("C side: preimages of each action solved over k-points")
    else:
        notes.append(f"C side: {len(setup._c_normalizer)} normalizing automorphisms searched")
    if setup.sub.connected:
        notes.append(f"infinitesimal factor {setup.sub.conn_label} compared through its parameter")
    if expected_order is not None and len(actions) < expected_order:
        raise LiftingAssumptionViolated(
            f"only {len(actions)} of {expected_order} expected cosets are matched")
    return MGroupResult(label, list(matched.values()), notes)


def matched_pairs(setup: Setup):
    """All pairs (h_E, h_C) of normalizing k-points with equal actions on G, by brute force."""
    NE, _ = e_sides(setup)
    NC, _ = c_sides(setup)
    by_action = {}
    for h in NC:
        by_action.setdefault(ad_key(c_ad(setup, h)), []).append(h)
    out = []
    for h in NE:
        for h_C in by_action.get(ad_key(e_ad(setup, h)), []):
            out.append((h, h_C))
    return out
