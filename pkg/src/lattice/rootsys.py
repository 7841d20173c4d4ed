"""Exact root-system and coweight-lattice arithmetic for one irreducible type.

Coweights are plain tuples of Python ints holding the pairings
``coords[i-1] = <lambda, alpha_i>`` (fundamental-coweight coordinates), so no
entry ever wraps. Nodes are numbered from 1 in Bourbaki order.
"""
import logging
import math
import numbers
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np
import sympy

from src.utils.config import Config
from src.utils.errors import InvalidRootSystemError, PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

Coweight = Tuple[int, ...]
NodeSet = FrozenSet[int]
Root = Tuple[int, ...]

# Known number of positive roots per type, used to validate the closure.
_POSITIVE_ROOT_COUNT = {
    'A': lambda n: n * (n + 1) // 2,
    'B': lambda n: n * n,
    'C': lambda n: n * n,
    'D': lambda n: n * (n - 1),
    'E': lambda n: {6: 36, 7: 63, 8: 120}[n],
    'F': lambda n: 24,
    'G': lambda n: 6,
}

_WEYL_ORDER = {
    'A': lambda n: math.factorial(n + 1),
    'B': lambda n: 2 ** n * math.factorial(n),
    'C': lambda n: 2 ** n * math.factorial(n),
    'D': lambda n: 2 ** (n - 1) * math.factorial(n),
    'E': lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
    'F': lambda n: 1152,
    'G': lambda n: 12,
}


def _bonds(type_label: str, rank: int) -> List[Tuple[int, int, int]]:
    """Dynkin bonds (long node, short node, multiplicity); simple bonds have multiplicity 1"""
    chain = [(i, i + 1, 1) for i in range(1, rank)]
    if type_label == 'A' and rank >= 1:
        return chain
    if type_label == 'B' and rank >= 2:
        return chain[:-1] + [(rank - 1, rank, 2)]
    if type_label == 'C' and rank >= 2:
        return chain[:-1] + [(rank, rank - 1, 2)]
    if type_label == 'D' and rank >= 4:
        return chain[:-1] + [(rank - 2, rank, 1)]
    if type_label == 'E' and rank in (6, 7, 8):
        return [(1, 3, 1), (2, 4, 1)] + [(i, i + 1, 1) for i in range(3, rank)]
    if type_label == 'F' and rank == 4:
        return [(1, 2, 1), (2, 3, 2), (3, 4, 1)]
    if type_label == 'G' and rank == 2:
        return [(2, 1, 3)]
    raise InvalidRootSystemError(f"No irreducible root system of type {type_label}{rank}")


def cartan_matrix(type_label: str, rank: int) -> Tuple[Tuple[int, ...], ...]:
    """Cartan matrix with entries <alpha_i^vee, alpha_j> (0-based rows and columns)"""
    matrix = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]
    for long_node, short_node, mult in _bonds(type_label, rank):
        matrix[long_node - 1][short_node - 1] = -1
        matrix[short_node - 1][long_node - 1] = -mult
    return tuple(tuple(row) for row in matrix)


def check_coweight(coords: Iterable, rank: int) -> Coweight:
    """Validate and normalise a coweight given by its pairings with the simple roots"""
    values = tuple(coords)
    if len(values) != rank:
        raise PreconditionError(f"Coweight {values} has {len(values)} entries, expected {rank}")
    for value in values:
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise PreconditionError(f"Coweight entries must be integers, got {value!r}")
    return tuple(int(value) for value in values)


@dataclass(frozen=True)
class RootSystemData:
    """Cartan data, roots and coweight pairings of one irreducible root system.

    Positive roots are stored in simple-root coordinates, ordered by height;
    the simple roots come first in node order. ``roots`` lists the positive
    roots followed by their negatives, so root index ``k + N`` is ``-root k``.
    """

    type_label: str
    rank: int
    cartan: Tuple[Tuple[int, ...], ...] = field(compare=False, repr=False)
    positive_roots: Tuple[Root, ...] = field(compare=False, repr=False)
    theta: int = field(compare=False, repr=False)
    simple_coroots_in_coweight_basis: Tuple[Tuple[int, ...], ...] = field(
        compare=False, repr=False
    )
    roots: Tuple[Root, ...] = field(init=False, compare=False, repr=False)
    root_index: Dict[Root, int] = field(init=False, compare=False, repr=False)
    theta_descent: Tuple[Tuple[int, ...], int] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        roots = self.positive_roots + tuple(tuple(-c for c in beta) for beta in self.positive_roots)
        object.__setattr__(self, 'roots', roots)
        object.__setattr__(self, 'root_index', {beta: k for k, beta in enumerate(roots)})
        object.__setattr__(self, 'theta_descent', self._descend_theta())

    # ------------------------------------------------------------------ basics

    @property
    def label(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def nodes(self) -> Tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @property
    def S(self) -> NodeSet:
        return frozenset(self.nodes)

    @property
    def num_positive(self) -> int:
        return len(self.positive_roots)

    @property
    def weyl_order(self) -> int:
        """|W|, from the classical order formulas"""
        return _WEYL_ORDER[self.type_label](self.rank)

    @property
    def cartan_array(self) -> np.ndarray:
        """Read-only numpy view of the Cartan matrix"""
        array = np.array(self.cartan, dtype=np.int64)
        array.setflags(write=False)
        return array

    def check_node(self, i: int) -> int:
        if not isinstance(i, numbers.Integral) or not 1 <= i <= self.rank:
            raise PreconditionError(f"Node {i!r} is not in S = {{1..{self.rank}}} of {self.label}")
        return int(i)

    def check_nodes(self, J: Iterable[int]) -> NodeSet:
        return frozenset(self.check_node(i) for i in J)

    def coweight(self, coords: Iterable) -> Coweight:
        return check_coweight(coords, self.rank)

    def height(self, k: int) -> int:
        return sum(self.roots[k])

    # --------------------------------------------------------------- pairings

    def coroot_pairing(self, i: int, k: int) -> int:
        """<alpha_i^vee, beta> for the root with index k"""
        row = self.cartan[i - 1]
        return sum(c * a for c, a in zip(self.roots[k], row))

    def reflect_root(self, i: int, k: int) -> int:
        """Index of s_i(beta) for the root with index k"""
        beta = self.roots[k]
        c = self.coroot_pairing(i, k)
        image = tuple(b - c if n == i - 1 else b for n, b in enumerate(beta))
        return self.root_index[image]

    def pair(self, lam: Coweight, k: int) -> int:
        """<lambda, beta> by linearity from <lambda, alpha_i> = coords[i-1]"""
        if not 0 <= k < len(self.roots):
            raise PreconditionError(f"Root index {k} out of range for {self.label}")
        return sum(c * x for c, x in zip(self.roots[k], lam))

    def pairings(self, lam: Coweight) -> Tuple[int, ...]:
        """Pairings of lambda with every positive root, in root order"""
        return _pairings(self, lam)

    def reflect_coweight(self, i: int, lam: Coweight) -> Coweight:
        """s_i(lambda) = lambda - <lambda, alpha_i> alpha_i^vee"""
        c = lam[i - 1]
        if c == 0:
            return lam
        row = self.cartan[i - 1]
        return tuple(x - c * a for x, a in zip(lam, row))

    # ------------------------------------------------------------- coweights

    def zero(self) -> Coweight:
        return (0,) * self.rank

    def simple_coroot(self, i: int) -> Coweight:
        """alpha_i^vee in fundamental-coweight coordinates (row i of the Cartan matrix)"""
        self.check_node(i)
        return tuple(self.cartan[i - 1])

    def is_dominant(self, lam: Coweight) -> bool:
        return all(x >= 0 for x in lam)

    def i_lambda(self, lam: Coweight) -> NodeSet:
        """I(lambda): simple roots orthogonal to a dominant coweight"""
        lam = self.coweight(lam)
        if not self.is_dominant(lam):
            raise PreconditionError(f"I(lambda) needs a dominant coweight, got {lam}")
        return frozenset(i for i in self.nodes if lam[i - 1] == 0)

    def rho_vee_J(self, J: Iterable[int]) -> Coweight:
        J = self.check_nodes(J)
        return tuple(1 if i in J else 0 for i in self.nodes)

    @property
    def rho_vee(self) -> Coweight:
        return self.rho_vee_J(self.S)

    @property
    def theta_root(self) -> Root:
        return self.positive_roots[self.theta]

    @property
    def theta_height(self) -> int:
        """<rho^vee, theta>"""
        return self.pair(self.rho_vee, self.theta)

    def growth_bound(self, exponent: int) -> int:
        """(<rho^vee, theta> + 2) ** exponent"""
        return (self.theta_height + 2) ** exponent

    def is_quasi_regular(self, lam: Coweight) -> Tuple[bool, int]:
        """Every root pairing is 0 or at least (<rho^vee,theta>+2)^(|S|+1) in absolute value"""
        lam = self.coweight(lam)
        bound = self.growth_bound(self.rank + 1)
        ok = all(p == 0 or abs(p) >= bound for p in self.pairings(lam))
        return ok, bound

    def coroot_coordinates(self, lam: Coweight) -> Tuple[sympy.Rational, ...]:
        """Solve lambda = sum m_j alpha_j^vee exactly (rational solution)"""
        lam = self.coweight(lam)
        system = sympy.Matrix(self.cartan).T
        solution = system.LUsolve(sympy.Matrix(lam))
        return tuple(sympy.nsimplify(value) for value in solution)

    def in_coroot_lattice(self, lam: Coweight) -> bool:
        """Whether lambda lies in the coroot lattice X"""
        return all(value.is_integer for value in self.coroot_coordinates(lam))

    # ------------------------------------------------------------ highest root

    def _descend_theta(self) -> Tuple[Tuple[int, ...], int]:
        """Write theta = s_{i1} ... s_{ik}(alpha_j); returns ((i1, ..., ik), j)"""
        k = self.theta
        word = []
        while self.height(k) > 1:
            i = next(i for i in self.nodes if self.coroot_pairing(i, k) > 0)
            k = self.reflect_root(i, k)
            word.append(i)
        return tuple(word), k + 1

    @property
    def theta_coroot(self) -> Coweight:
        """theta^vee in fundamental-coweight coordinates"""
        word, j = self.theta_descent
        lam = self.simple_coroot(j)
        for i in reversed(word):
            lam = self.reflect_coweight(i, lam)
        return lam


@lru_cache(maxsize=65536)
def _pairings(system: RootSystemData, lam: Coweight) -> Tuple[int, ...]:
    return tuple(sum(c * x for c, x in zip(beta, lam)) for beta in system.positive_roots)


def _enumerate_positive_roots(cartan: Sequence[Sequence[int]]) -> List[Root]:
    rank = len(cartan)
    simple = [tuple(1 if n == i else 0 for n in range(rank)) for i in range(rank)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for i in range(rank):
            c = sum(b * a for b, a in zip(beta, cartan[i]))
            image = tuple(b - c if n == i else b for n, b in enumerate(beta))
            if all(x >= 0 for x in image) and any(image) and image not in found:
                found.add(image)
                frontier.append(image)
    return sorted(found, key=lambda beta: (sum(beta), tuple(-c for c in beta)))


@lru_cache(maxsize=None)
def build_root_system(type_label: str, rank: int) -> RootSystemData:
    """Build the root data of the irreducible type (type_label, rank)"""
    if not isinstance(type_label, str) or type_label.upper() not in _POSITIVE_ROOT_COUNT:
        raise InvalidRootSystemError(f"Unknown type label {type_label!r}")
    if isinstance(rank, bool) or not isinstance(rank, numbers.Integral) or rank < 1:
        raise InvalidRootSystemError(f"Rank must be a positive integer, got {rank!r}")
    type_label = type_label.upper()
    rank = int(rank)

    cartan = cartan_matrix(type_label, rank)
    positive = _enumerate_positive_roots(cartan)
    expected = _POSITIVE_ROOT_COUNT[type_label](rank)
    if len(positive) != expected:
        raise InvalidRootSystemError(
            f"Root closure for {type_label}{rank} produced {len(positive)} roots, expected {expected}"
        )

    top = max(sum(beta) for beta in positive)
    highest = [k for k, beta in enumerate(positive) if sum(beta) == top]
    if len(highest) != 1:
        raise InvalidRootSystemError(f"{type_label}{rank} has no unique highest root")

    coroots = tuple(tuple(cartan[j][i] for j in range(rank)) for i in range(rank))
    system = RootSystemData(
        type_label=type_label,
        rank=rank,
        cartan=cartan,
        positive_roots=tuple(positive),
        theta=highest[0],
        simple_coroots_in_coweight_basis=coroots,
    )
    logger.debug(f"Built {system.label}: {len(positive)} positive roots, theta={system.theta_root}")
    return system


def parse_type(text: str) -> Tuple[str, int]:
    """Split a label such as 'A3' into ('A', 3)"""
    text = text.strip()
    if len(text) < 2 or not text[1:].isdigit():
        raise InvalidRootSystemError(f"Cannot read root system label {text!r}")
    return text[0].upper(), int(text[1:])
