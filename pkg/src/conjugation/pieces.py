"""K-stable piece combinatorics on the W~^S labels.

``kpieces(a)`` is the set of w in W~^S whose piece K_w meets K . I a I. It is
computed by the reduction: a minimal ≈-class gives its class representative;
otherwise a strictly reducing conjugation by s_i splits the problem into
``s_i e`` and ``s_i e s_i``.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.conjugation.conj import classify, leq_S, reduce_to_minimal, strict_drops
from src.lattice.afweyl import AffineElt, affine_group, in_WS
from src.lattice.rootsys import Coweight, NodeSet
from src.lattice.weyl import WeylElt
from src.utils.config import Config
from src.utils.errors import InvariantViolationError, PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

PIECES_SCHEMA = 'adlv.pieces/1'
BRANCH_POLICIES = ('smallest', 'largest')


def _sort_key(a: AffineElt) -> Tuple:
    return (a.length, a.fin.length, a.fin.word, a.trans)


@dataclass(frozen=True)
class PieceSet:
    """Labels w in W~^S of the pieces K_w meeting K . I a I"""

    source: AffineElt
    members: FrozenSet[AffineElt]
    memo_size: int
    policy: str = 'smallest'
    kind: str = 'combinatorial piece set'

    def sorted_members(self) -> List[AffineElt]:
        return sorted(self.members, key=_sort_key)

    def full_support_members(self) -> List[AffineElt]:
        S = self.source.system.S
        return [w for w in self.sorted_members() if w.fin.supp == S]

    def has_full_support_member(self) -> bool:
        return bool(self.full_support_members())

    def digest(self) -> str:
        payload = '|'.join(str(w) for w in self.sorted_members())
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def trace_digest(self) -> str:
        """Digest of the reduction of the source to its minimal class"""
        return reduce_to_minimal(self.source).digest()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': PIECES_SCHEMA,
            'type': self.source.label,
            'kind': self.kind,
            'source': str(self.source),
            'members': [str(w) for w in self.sorted_members()],
            'memo_size': self.memo_size,
            'policy': self.policy,
            'digest': self.digest(),
            'trace_digest': self.trace_digest(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _explore(b: AffineElt, policy: str,
             memo: Dict[AffineElt, FrozenSet[AffineElt]]) -> FrozenSet[AffineElt]:
    if b in memo:
        return memo[b]
    drops = strict_drops(b)
    if not drops:
        result = frozenset([classify(b)])
    else:
        e, i = drops[0] if policy == 'smallest' else drops[-1]
        left = e.lmul(i)
        result = _explore(left, policy, memo) | _explore(left.rmul(i), policy, memo)
    memo[b] = result
    return result


def kpieces(a: AffineElt, policy: str = 'smallest') -> PieceSet:
    """All w in W~^S with K_w meeting K . I a I"""
    if policy not in BRANCH_POLICIES:
        raise PreconditionError(f"Unknown branch policy {policy!r}; use one of {BRANCH_POLICIES}")
    memo: Dict[AffineElt, FrozenSet[AffineElt]] = {}
    members = _explore(a, policy, memo)

    bound = a.system.weyl_order ** 2
    if len(memo) > bound:
        raise InvariantViolationError(f"kpieces memo reached {len(memo)} keys, above |W|^2 = {bound}")

    logger.debug(f"kpieces({a}) -> {len(members)} pieces, memo {len(memo)}")
    return PieceSet(a, members, len(memo), policy)


def _check_face(J: Iterable[int], x: WeylElt, lam: Coweight) -> Tuple[NodeSet, Coweight]:
    system = x.group.system
    J = system.check_nodes(J)
    lam = system.coweight(lam)
    if system.i_lambda(lam) != J:
        raise PreconditionError(f"I(lambda) = {sorted(system.i_lambda(lam))} differs from J = {sorted(J)}")
    if not x.group.is_min_coset_rep(x, J):
        raise PreconditionError(f"{x} is not in W^J for J = {sorted(J)}")
    return J, lam


def xy_pieces(J: Iterable[int], x: WeylElt, y: WeylElt, lam: Coweight,
              policy: str = 'smallest') -> PieceSet:
    """kpieces of x e^(-lambda) y^-1 given by its normal-form data"""
    J, lam = _check_face(J, x, lam)
    group = affine_group(x.group.system)
    source = group.from_normal_form(J, lam, x, y)
    pieces = kpieces(source, policy)
    return PieceSet(source, pieces.members, pieces.memo_size, policy, 'K-stable pieces')


def bxb_meets_gpiece(J: Iterable[int], x: WeylElt, y: WeylElt, w: WeylElt, lam: Coweight) -> bool:
    """Whether [J, x, y] meets Z_{J, w}, through w e^(-lambda) in kpieces(x e^(-lambda) y^-1)"""
    J, lam = _check_face(J, x, lam)
    if not w.group.is_min_coset_rep(w, J):
        raise PreconditionError(f"{w} is not in W^J for J = {sorted(J)}")
    target = affine_group(x.group.system).element(w, tuple(-c for c in lam))
    return target in xy_pieces(J, x, y, lam).members


def kpiece_closure_contains(w: AffineElt, w_prime: AffineElt) -> bool:
    """Whether K_{w'} lies in the closure of K_w"""
    for label in (w, w_prime):
        if not in_WS(label):
            raise PreconditionError(f"{label} is not in W~^S")
    return leq_S(w_prime, w)


@dataclass(frozen=True)
class Key2Step:
    """One reduction step for (J, x, y, lambda) with its certificate"""

    J: NodeSet
    x: WeylElt
    y: WeylElt
    lam: Coweight
    M: int
    mu: Coweight
    gamma: Coweight
    v: WeylElt
    x_new: WeylElt
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def terminal(self) -> bool:
        return self.v.is_identity()

    def next_data(self) -> Tuple[NodeSet, WeylElt, WeylElt, Coweight]:
        """(I(gamma), v, x^-1 y v, gamma), the data the induction continues with"""
        system = self.x.group.system
        return system.i_lambda(self.gamma), self.v, self.x.inverse() * self.y * self.v, self.gamma

    def holds(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'J': sorted(self.J),
            'x': str(self.x),
            'y': str(self.y),
            'lambda': list(self.lam),
            'M': self.M,
            'mu': list(self.mu),
            'gamma': list(self.gamma),
            'v': str(self.v),
            'x_new': str(self.x_new),
            'checks': dict(self.checks),
        }


def key2_reduce(J: Iterable[int], x: WeylElt, y: WeylElt, lam: Coweight) -> Key2Step:
    """Shift lambda by M rho^vee_{S-J} through y^-1 x and refactor as v gamma"""
    system = x.group.system
    W = x.group
    J, lam = _check_face(J, x, lam)
    z = y.inverse() * x
    if not W.is_min_coset_rep(z, J) or z.supp != system.S:
        raise PreconditionError(f"y^-1 x = {z} must lie in W^J and have full support")
    bound = system.growth_bound(len(J) + 1)
    outside = [i for i in system.nodes if i not in J]
    if any(lam[i - 1] < bound for i in outside):
        raise PreconditionError(f"<lambda, alpha_i> must reach {bound} for every i outside J")

    M = system.growth_bound(len(J))
    shift = tuple(M * c for c in system.rho_vee_J(system.S - J))
    moved = z.act(shift)
    mu = tuple(l - s + m for l, s, m in zip(lam, shift, moved))
    gamma, v = W.dominant_representative(mu)
    x_new = v.inverse() * z * v

    checks: Dict[str, bool] = {'factorization': v.act(gamma) == mu}
    if not v.is_identity():
        I_gamma = system.i_lambda(gamma)
        checks['b'] = all(
            system.pair(mu, k) >= M
            for k, root in enumerate(system.positive_roots)
            if any(root[i - 1] for i in outside)
        )
        checks['c'] = I_gamma < J
        checks['d'] = all(
            gamma[i - 1] >= system.growth_bound(len(I_gamma) + 1)
            for i in system.nodes if i not in I_gamma
        )
        checks['e'] = W.is_min_coset_rep(x_new, I_gamma) and x_new.supp == system.S
        checks['v_in_WJ'] = v.supp <= J
    step = Key2Step(J, x, y, lam, M, mu, gamma, v, x_new, checks)
    if not step.holds():
        logger.error(f"✗ key2 certificate failed: {step.to_dict()}")
    return step


def key2_chain(J: Iterable[int], x: WeylElt, y: WeylElt, lam: Coweight) -> List[Key2Step]:
    """Iterate key2_reduce until v = e; the face shrinks strictly at every step"""
    steps = [key2_reduce(J, x, y, lam)]
    while not steps[-1].terminal and steps[-1].holds():
        steps.append(key2_reduce(*steps[-1].next_data()))
    return steps
