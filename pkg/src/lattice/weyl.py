"""Finite Weyl group W of a root system.

Elements are stored as the permutation they induce on all roots, which is a
canonical form: two elements are equal iff their root permutations agree.
Reduced words are derived on demand and are ShortLex-minimal.
"""
import logging
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from src.lattice.rootsys import Coweight, NodeSet, RootSystemData
from src.utils.config import Config
from src.utils.errors import MixedRootSystemError, NotationError, PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

_TOKEN = re.compile(r'^s(\d+)$')


def parse_word(text: str, allow_affine: bool = False) -> Tuple[int, ...]:
    """Read 's1 s2 s3' (or 'e') into a tuple of node indices"""
    tokens = text.replace(',', ' ').split()
    if not tokens:
        raise NotationError("Empty word; use 'e' for the identity")
    if tokens == ['e']:
        return ()
    letters = []
    for token in tokens:
        match = _TOKEN.match(token)
        if match is None:
            raise NotationError(f"Cannot read generator {token!r} in {text!r}")
        index = int(match.group(1))
        if index == 0 and not allow_affine:
            raise NotationError(f"s0 is not a generator of the finite Weyl group: {text!r}")
        letters.append(index)
    return tuple(letters)


def format_word(word: Sequence[int]) -> str:
    return ' '.join(f"s{i}" for i in word) if word else 'e'


@dataclass(frozen=True)
class WeylElt:
    """Element of W, canonical as a permutation of root indices"""

    label: str
    perm: Tuple[int, ...]
    group: 'WeylGroup' = field(compare=False, repr=False)

    def __mul__(self, other: 'WeylElt') -> 'WeylElt':
        self.group.check_same(other)
        p = self.perm
        return self.group.from_perm(tuple(p[k] for k in other.perm))

    def __str__(self) -> str:
        return format_word(self.word)

    def __repr__(self) -> str:
        return f"WeylElt({self.label}, {self})"

    @cached_property
    def inverse_perm(self) -> Tuple[int, ...]:
        inverse = [0] * len(self.perm)
        for k, image in enumerate(self.perm):
            inverse[image] = k
        return tuple(inverse)

    def inverse(self) -> 'WeylElt':
        return self.group.from_perm(self.inverse_perm)

    @cached_property
    def length(self) -> int:
        n = self.group.num_positive
        return sum(1 for k in range(n) if self.perm[k] >= n)

    def is_identity(self) -> bool:
        return self.length == 0

    def sends_positive(self, k: int) -> bool:
        """Whether w maps the positive root k to a positive root"""
        return self.perm[k] < self.group.num_positive

    def right_descents(self) -> NodeSet:
        """{i : l(w s_i) < l(w)}, i.e. w(alpha_i) < 0"""
        n = self.group.num_positive
        return frozenset(i for i in self.group.nodes if self.perm[i - 1] >= n)

    def left_descents(self) -> NodeSet:
        """{i : l(s_i w) < l(w)}, i.e. w^-1(alpha_i) < 0"""
        n = self.group.num_positive
        return frozenset(i for i in self.group.nodes if self.inverse_perm[i - 1] >= n)

    def lmul(self, i: int) -> 'WeylElt':
        """s_i * w"""
        s = self.group.simple_perm(i)
        return self.group.from_perm(tuple(s[k] for k in self.perm))

    def rmul(self, i: int) -> 'WeylElt':
        """w * s_i"""
        p = self.perm
        return self.group.from_perm(tuple(p[k] for k in self.group.simple_perm(i)))

    @cached_property
    def word(self) -> Tuple[int, ...]:
        """ShortLex-minimal reduced word"""
        letters = []
        w = self
        while w.length:
            i = min(w.left_descents())
            letters.append(i)
            w = w.lmul(i)
        return tuple(letters)

    @cached_property
    def supp(self) -> NodeSet:
        return frozenset(self.word)

    def act(self, lam: Coweight) -> Coweight:
        """Contragredient action: <w lambda, alpha_i> = <lambda, w^-1 alpha_i>"""
        system = self.group.system
        return tuple(system.pair(lam, self.inverse_perm[i - 1]) for i in self.group.nodes)

    def star(self) -> 'WeylElt':
        w0 = self.group.longest_element()
        return w0 * self * w0


class WeylGroup:
    """The Weyl group of one irreducible root system"""

    def __init__(self, system: RootSystemData):
        self.system = system
        self.label = system.label
        self.num_positive = system.num_positive
        self.nodes = system.nodes
        size = len(system.roots)
        self._simple = {
            i: tuple(system.reflect_root(i, k) for k in range(size)) for i in system.nodes
        }
        self.identity = WeylElt(self.label, tuple(range(size)), self)

    def __repr__(self) -> str:
        return f"WeylGroup({self.label})"

    def check_same(self, other: object) -> None:
        if getattr(other, 'label', None) != self.label:
            raise MixedRootSystemError(
                f"Cannot combine elements of {self.label} and {getattr(other, 'label', other)}"
            )

    def simple_perm(self, i: int) -> Tuple[int, ...]:
        try:
            return self._simple[i]
        except KeyError:
            raise PreconditionError(f"s{i} is not a simple reflection of {self.label}") from None

    def from_perm(self, perm: Tuple[int, ...]) -> WeylElt:
        return WeylElt(self.label, perm, self)

    def s(self, i: int) -> WeylElt:
        return self.from_perm(self.simple_perm(i))

    def from_word(self, word: Iterable[int]) -> WeylElt:
        w = self.identity
        for i in word:
            w = w.rmul(i)
        return w

    def parse(self, text: str) -> WeylElt:
        return self.from_word(parse_word(text))

    # ---------------------------------------------------------------- structure

    def longest_element(self) -> WeylElt:
        return self._longest

    @cached_property
    def _longest(self) -> WeylElt:
        w = self.identity
        while True:
            ascents = [i for i in self.nodes if i not in w.right_descents()]
            if not ascents:
                return w
            w = w.rmul(ascents[0])

    def order(self) -> int:
        """|W| by enumeration (rank-guarded)"""
        return len(self.elements())

    def delta(self, i: int) -> int:
        """Diagram permutation -w0 on S"""
        image = self.longest_element().perm[i - 1]
        return image - self.num_positive + 1

    def delta_set(self, J: Iterable[int]) -> NodeSet:
        return frozenset(self.delta(i) for i in J)

    def bruhat_leq(self, a: WeylElt, b: WeylElt) -> bool:
        """Bruhat order by the lifting property along left descents of b"""
        self.check_same(a)
        self.check_same(b)
        while b.length:
            if a.length > b.length:
                return False
            i = min(b.left_descents())
            if i in a.left_descents():
                a = a.lmul(i)
            b = b.lmul(i)
        return a.is_identity()

    def coset_decompose(self, a: WeylElt, J: Iterable[int]) -> Tuple[WeylElt, WeylElt]:
        """a = u * v with u in W^J and v in W_J"""
        J = self.system.check_nodes(J)
        u, v = a, self.identity
        while True:
            descents = sorted(u.right_descents() & J)
            if not descents:
                return u, v
            j = descents[0]
            u = u.rmul(j)
            v = v.lmul(j)

    def is_min_coset_rep(self, a: WeylElt, J: Iterable[int]) -> bool:
        return not (a.right_descents() & frozenset(J))

    def dominant_representative(self, lam: Coweight) -> Tuple[Coweight, WeylElt]:
        """(gamma, v) with gamma dominant, v in W^{I(gamma)} and v gamma = lambda"""
        lam = self.system.coweight(lam)
        gamma, v = lam, self.identity
        while True:
            negative = [i for i in self.nodes if gamma[i - 1] < 0]
            if not negative:
                break
            i = negative[0]
            gamma = self.system.reflect_coweight(i, gamma)
            v = v.rmul(i)
        v, _ = self.coset_decompose(v, self.system.i_lambda(gamma))
        return gamma, v

    # ------------------------------------------------------------ enumeration

    def _closure(self, generators: Iterable[int],
                 keep: Optional[Callable[[WeylElt], bool]] = None) -> List[WeylElt]:
        generators = sorted(generators)
        seen = {self.identity.perm: self.identity}
        queue = deque([self.identity])
        while queue:
            w = queue.popleft()
            for i in generators:
                nxt = w.lmul(i)
                if nxt.perm in seen or nxt.length < w.length:
                    continue
                if keep is not None and not keep(nxt):
                    continue
                seen[nxt.perm] = nxt
                queue.append(nxt)
        return sorted(seen.values(), key=lambda w: (w.length, w.word))

    def elements(self) -> List[WeylElt]:
        """All of W in ShortLex order of reduced words"""
        Config.require_enumeration(self.system.rank, f"W({self.label}) enumeration")
        return self._closure(self.nodes)

    def parabolic_elements(self, J: Iterable[int]) -> List[WeylElt]:
        """The standard parabolic subgroup W_J"""
        J = self.system.check_nodes(J)
        Config.require_enumeration(len(J), f"W_J enumeration in {self.label}")
        return self._closure(J)

    def enumerate_WJ_reps(self, J: Iterable[int]) -> List[WeylElt]:
        """Minimal length representatives W^J of W / W_J"""
        J = self.system.check_nodes(J)
        Config.require_enumeration(self.system.rank, f"W^J enumeration in {self.label}")
        return self._closure(self.nodes, keep=lambda w: not (w.right_descents() & J))


@lru_cache(maxsize=None)
def weyl_group(system: RootSystemData) -> WeylGroup:
    return WeylGroup(system)


# Functional surface


def mul(a: WeylElt, b: WeylElt) -> WeylElt:
    return a * b


def inv(a: WeylElt) -> WeylElt:
    return a.inverse()


def act(a: WeylElt, lam: Coweight) -> Coweight:
    return a.act(a.group.system.coweight(lam))


def length(a: WeylElt) -> int:
    return a.length


def bruhat_leq(a: WeylElt, b: WeylElt) -> bool:
    return a.group.bruhat_leq(a, b)


def supp(a: WeylElt) -> NodeSet:
    return a.supp


def star(a: WeylElt) -> WeylElt:
    return a.star()


def coset_decompose(a: WeylElt, J: Iterable[int]) -> Tuple[WeylElt, WeylElt]:
    return a.group.coset_decompose(a, J)


def descents(a: WeylElt) -> Dict[str, FrozenSet[int]]:
    return {'left': a.left_descents(), 'right': a.right_descents()}
