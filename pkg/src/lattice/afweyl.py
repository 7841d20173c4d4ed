"""Extended affine Weyl group W~ = W x| Y.

An element ``w e^chi`` is stored as the pair (fin, trans) and acts on Y (x) R by
``v -> w(v + chi)``; the product law is
``(w e^chi)(w' e^chi') = ww' e^(w'^-1 chi + chi')``. The base alcove is the
dominant fundamental alcove, so ``s0 = s_theta e^(-theta^vee)``.
"""
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

from src.lattice.rootsys import Coweight, NodeSet, RootSystemData
from src.lattice.weyl import WeylElt, WeylGroup, format_word, parse_word, weyl_group
from src.utils.config import Config
from src.utils.errors import MixedRootSystemError, NotationError, PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

_TOKENS = re.compile(r't\[[^\]]*\]|[^\s]+')


def _add(a: Coweight, b: Coweight) -> Coweight:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Coweight) -> Coweight:
    return tuple(-x for x in a)


def format_coweight(lam: Coweight) -> str:
    return 't[' + ','.join(str(x) for x in lam) + ']'


@dataclass(frozen=True)
class AffineElt:
    """w e^chi with w = fin and chi = trans"""

    fin: WeylElt
    trans: Coweight

    @property
    def label(self) -> str:
        return self.fin.label

    @property
    def system(self) -> RootSystemData:
        return self.fin.group.system

    @property
    def group(self) -> 'AffineWeylGroup':
        return affine_group(self.system)

    def __mul__(self, other: 'AffineElt') -> 'AffineElt':
        if not isinstance(other, AffineElt) or other.label != self.label:
            raise MixedRootSystemError(f"Cannot multiply {self.label} by {other!r}")
        moved = other.fin.inverse().act(self.trans)
        return AffineElt(self.fin * other.fin, _add(moved, other.trans))

    def inverse(self) -> 'AffineElt':
        return AffineElt(self.fin.inverse(), _neg(self.fin.act(self.trans)))

    def __str__(self) -> str:
        parts = []
        if not self.fin.is_identity():
            parts.append(str(self.fin))
        if any(self.trans):
            parts.append(format_coweight(self.trans))
        return ' '.join(parts) or 'e'

    def __repr__(self) -> str:
        return f"AffineElt({self.label}, {self})"

    def act(self, v: Coweight) -> Coweight:
        return self.fin.act(_add(v, self.trans))

    def is_identity(self) -> bool:
        return self.fin.is_identity() and not any(self.trans)

    @cached_property
    def length(self) -> int:
        """Sum over positive roots of |<chi,beta>|, or |<chi,beta> + 1| when w(beta) < 0"""
        n = self.system.num_positive
        perm = self.fin.perm
        total = 0
        for k, p in enumerate(self.system.pairings(self.trans)):
            total += abs(p) if perm[k] < n else abs(p + 1)
        return total

    # simple-reflection moves; index 0 is the affine reflection

    def lmul(self, i: int) -> 'AffineElt':
        if i == 0:
            return self.group.s0 * self
        return AffineElt(self.fin.lmul(i), self.trans)

    def rmul(self, i: int) -> 'AffineElt':
        if i == 0:
            return self * self.group.s0
        return AffineElt(self.fin.rmul(i), self.system.reflect_coweight(i, self.trans))

    def conjugate(self, i: int) -> 'AffineElt':
        """s_i a s_i for a finite simple reflection s_i"""
        if i == 0:
            raise PreconditionError("Partial conjugation only uses s1..sn, never s0")
        return AffineElt(self.fin.lmul(i).rmul(i), self.system.reflect_coweight(i, self.trans))

    def left_descents(self) -> FrozenSet[int]:
        return frozenset(i for i in self.group.affine_nodes if self.lmul(i).length < self.length)

    def right_descents(self) -> FrozenSet[int]:
        return frozenset(i for i in self.group.affine_nodes if self.rmul(i).length < self.length)


@dataclass(frozen=True)
class NormalForm:
    """x e^(-lambda) y^-1 with lambda dominant, J = I(lambda) and x in W^J"""

    J: NodeSet
    lam: Coweight
    x: WeylElt
    y: WeylElt

    def recompose(self) -> AffineElt:
        group = affine_group(self.x.group.system)
        return group.element(self.x, _neg(self.lam)) * group.element(self.y.inverse())

    @property
    def w_S(self) -> AffineElt:
        """The W~^S factor x e^(-lambda)"""
        return affine_group(self.x.group.system).element(self.x, _neg(self.lam))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'J': sorted(self.J),
            'lambda': list(self.lam),
            'x': str(self.x),
            'y': str(self.y),
        }


class AffineWeylGroup:
    """W~ for one root system, with s0 built from the highest root"""

    def __init__(self, system: RootSystemData):
        self.system = system
        self.label = system.label
        self.W: WeylGroup = weyl_group(system)
        self.affine_nodes = (0,) + system.nodes

        word, j = system.theta_descent
        u = self.W.from_word(word)
        self.s_theta = u * self.W.s(j) * u.inverse()
        self.theta_coroot = system.theta_coroot
        self.identity = AffineElt(self.W.identity, system.zero())
        self.s0 = AffineElt(self.s_theta, _neg(self.theta_coroot))

    def __repr__(self) -> str:
        return f"AffineWeylGroup({self.label})"

    def element(self, fin: Optional[WeylElt] = None, trans: Optional[Iterable] = None) -> AffineElt:
        fin = self.W.identity if fin is None else fin
        self.W.check_same(fin)
        trans = self.system.zero() if trans is None else self.system.coweight(trans)
        return AffineElt(fin, trans)

    def translation(self, chi: Iterable) -> AffineElt:
        return self.element(None, chi)

    def s(self, i: int) -> AffineElt:
        return self.s0 if i == 0 else AffineElt(self.W.s(i), self.system.zero())

    def from_word(self, word: Iterable[int]) -> AffineElt:
        a = self.identity
        for i in word:
            a = a.rmul(i)
        return a

    def parse(self, text: str) -> AffineElt:
        """Read a product such as 's2 s1 t[-1,0] s2' or 's0 s1'"""
        tokens = _TOKENS.findall(text)
        if not tokens:
            raise NotationError("Empty affine word; use 'e' for the identity")
        a = self.identity
        for token in tokens:
            if token.startswith('t['):
                body = token[2:-1].strip()
                try:
                    coords = [int(part) for part in body.split(',')] if body else []
                except ValueError:
                    raise NotationError(f"Cannot read translation {token!r}") from None
                if len(coords) != self.system.rank:
                    raise NotationError(f"Translation {token!r} needs {self.system.rank} entries")
                a = a * self.translation(coords)
            elif token == 'e':
                continue
            else:
                for i in parse_word(token, allow_affine=True):
                    if i > self.system.rank:
                        raise NotationError(f"s{i} is not a generator of {self.label}~")
                    a = a.rmul(i)
        return a

    def from_normal_form(self, J: Iterable[int], lam: Iterable[int],
                         x: WeylElt, y: WeylElt) -> AffineElt:
        return NormalForm(frozenset(J), self.system.coweight(lam), x, y).recompose()


@lru_cache(maxsize=None)
def affine_group(system: RootSystemData) -> AffineWeylGroup:
    return AffineWeylGroup(system)


def inverse(a: AffineElt) -> AffineElt:
    return a.inverse()


def length_affine(a: AffineElt) -> int:
    return a.length


def descents(a: AffineElt) -> Dict[str, FrozenSet[int]]:
    return {'left': a.left_descents(), 'right': a.right_descents()}


def normalize(a: AffineElt) -> NormalForm:
    """Write a = x e^(-lambda) y^-1 with lambda dominant and x in W^{I(lambda)}"""
    W = a.fin.group
    lam, y0 = W.dominant_representative(_neg(a.trans))
    J = a.system.i_lambda(lam)
    x, v = W.coset_decompose(a.fin * y0, J)
    y = y0 * v.inverse()
    return NormalForm(J, lam, x, y)


def in_affine_subgroup(a: AffineElt) -> bool:
    """Whether a lies in W_a = W x| X"""
    return a.system.in_coroot_lattice(a.trans)


def same_omega_coset(a: AffineElt, b: AffineElt) -> bool:
    if a.label != b.label:
        raise MixedRootSystemError(f"Cannot compare {a.label} with {b.label}")
    return a.system.in_coroot_lattice(tuple(x - y for x, y in zip(a.trans, b.trans)))


def reduced_word_affine(a: AffineElt) -> Tuple[Tuple[int, ...], AffineElt]:
    """Greedy reduced word over s0..sn; returns (word, tau) with a = s_word * tau, l(tau) = 0"""
    letters: List[int] = []
    while a.length:
        i = min(a.left_descents())
        letters.append(i)
        a = a.lmul(i)
    return tuple(letters), a


def bruhat_leq_affine(a: AffineElt, b: AffineElt) -> bool:
    """Bruhat order; elements of different Omega-cosets are incomparable"""
    if not same_omega_coset(a, b):
        return False
    while b.length:
        if a.length > b.length:
            return False
        i = min(b.left_descents())
        if a.lmul(i).length < a.length:
            a = a.lmul(i)
        b = b.lmul(i)
    return a == b


def in_WS(a: AffineElt, J: Optional[Iterable[int]] = None) -> bool:
    """Whether a is a minimal representative of a W_J (default W) right coset"""
    J = a.system.S if J is None else a.system.check_nodes(J)
    return all(a.rmul(j).length > a.length for j in J)


def right_coset_split(a: AffineElt) -> Tuple[AffineElt, WeylElt]:
    """a = w1 * u with w1 in W~^S and u in W"""
    nf = normalize(a)
    return nf.w_S, nf.y.inverse()


def relative_I(J: Iterable[int], w: AffineElt) -> NodeSet:
    """Largest K in J with w s_i w^-1 a simple reflection s_j, j in K, for every i in K"""
    K = w.system.check_nodes(J)
    if not in_WS(w, K):
        raise PreconditionError(f"{w} is not a minimal coset representative for J = {sorted(K)}")
    group = w.group
    w_inv = w.inverse()
    images = {}
    for i in sorted(K):
        conj = w * group.s(i) * w_inv
        images[i] = next((j for j in K if conj == group.s(j)), None)
    while True:
        keep = frozenset(i for i in K if images[i] is not None and images[i] in K)
        if keep == K:
            return K
        K = keep


def diagram_automorphism(a: AffineElt) -> AffineElt:
    """delta(w e^chi) = w* e^(-w0 chi)"""
    w0 = a.fin.group.longest_element()
    return AffineElt(a.fin.star(), _neg(w0.act(a.trans)))
