"""Label-level model of the wonderful compactification.

B x B orbits are labelled [J, x, y] and G-stable pieces Z_{J, w}; only the
labels and their closure order are represented, never the variety.
"""
import itertools
import json
import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Union

import pandas as pd

from src.lattice.afweyl import NormalForm
from src.lattice.rootsys import NodeSet, RootSystemData
from src.lattice.weyl import WeylElt, WeylGroup, weyl_group
from src.utils.config import Config
from src.utils.errors import NotationError, PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

_GPIECE = re.compile(r'^\s*Z\[\s*\{([\d,\s]*)\}\s*;\s*([^\]]*)\]\s*$')
_BXB = re.compile(r'^\s*\[\s*\{([\d,\s]*)\}\s*;\s*([^;\]]*);\s*([^\]]*)\]\s*$')


def _format_nodes(J: Iterable[int]) -> str:
    return '{' + ','.join(str(i) for i in sorted(J)) + '}'


def _read_nodes(text: str) -> NodeSet:
    parts = [p for p in text.replace(' ', '').split(',') if p]
    return frozenset(int(p) for p in parts)


@dataclass(frozen=True)
class GPieceLabel:
    """Z_{J, w} with w in W^J"""

    J: NodeSet
    w: WeylElt

    def __post_init__(self) -> None:
        if self.w.right_descents() & self.J:
            raise PreconditionError(f"{self.w} has a descent in J = {sorted(self.J)}")

    def __str__(self) -> str:
        return f"Z[{_format_nodes(self.J)}; {self.w}]"

    def to_dict(self) -> Dict[str, Any]:
        return {'J': sorted(self.J), 'w': str(self.w)}


@dataclass(frozen=True)
class BxBLabel:
    """[J, x, y] with x in W^J"""

    J: NodeSet
    x: WeylElt
    y: WeylElt

    def __post_init__(self) -> None:
        if self.x.right_descents() & self.J:
            raise PreconditionError(f"{self.x} has a descent in J = {sorted(self.J)}")

    def __str__(self) -> str:
        return f"[{_format_nodes(self.J)}; {self.x}; {self.y}]"

    def to_dict(self) -> Dict[str, Any]:
        return {'J': sorted(self.J), 'x': str(self.x), 'y': str(self.y)}


def parse_label(W: WeylGroup, text: str) -> Union[GPieceLabel, BxBLabel]:
    """Read 'Z[{1}; s1 s2]' or '[{1}; x; y]' back into a label"""
    match = _GPIECE.match(text)
    if match:
        J = W.system.check_nodes(_read_nodes(match.group(1)))
        return GPieceLabel(J, W.parse(match.group(2)))
    match = _BXB.match(text)
    if match:
        J = W.system.check_nodes(_read_nodes(match.group(1)))
        return BxBLabel(J, W.parse(match.group(2)), W.parse(match.group(3)))
    raise NotationError(f"Cannot read label {text!r}")


def _subsets(system: RootSystemData) -> List[NodeSet]:
    nodes = system.nodes
    subsets = []
    for size in range(len(nodes), -1, -1):
        subsets.extend(frozenset(c) for c in itertools.combinations(nodes, size))
    return subsets


def enumerate_gpieces(system: RootSystemData) -> List[GPieceLabel]:
    """All labels (J, w), J in S, w in W^J"""
    Config.require_enumeration(system.rank, f"G-stable pieces of {system.label}")
    W = weyl_group(system)
    labels = [GPieceLabel(J, w) for J in _subsets(system) for w in W.enumerate_WJ_reps(J)]
    logger.info(f"✓ {system.label}: {len(labels)} G-stable piece labels")
    return labels


def gpiece_closure_contains(a: GPieceLabel, b: GPieceLabel) -> bool:
    """Whether Z_b lies in the closure of Z_a"""
    if not b.J <= a.J:
        return False
    W = a.w.group
    return any(W.bruhat_leq(u * a.w * u.inverse(), b.w) for u in W.parabolic_elements(a.J))


def steinberg_boundary(system: RootSystemData) -> List[GPieceLabel]:
    """Pieces (J, w) with J != S and supp(w) = S"""
    S = system.S
    return [p for p in enumerate_gpieces(system) if p.J != S and p.w.supp == S]


def is_coxeter(w: WeylElt) -> bool:
    """Some reduced word uses every simple reflection exactly once"""
    return w.length == w.group.system.rank and w.supp == w.group.system.S


def specialize_labels(nf: NormalForm, mode: str) -> Union[BxBLabel, GPieceLabel]:
    """Label met by the specialization of x e^(-lambda) y^-1

    ``orbit`` gives the B x B orbit [I(lambda), x, y]; ``kpiece`` needs y = e and
    gives Z_{delta(I(lambda)), x*}.
    """
    if mode == 'orbit':
        return BxBLabel(nf.J, nf.x, nf.y)
    if mode == 'kpiece':
        if not nf.y.is_identity():
            raise PreconditionError(f"kpiece relabeling needs y = e, got y = {nf.y}")
        W = nf.x.group
        return GPieceLabel(W.delta_set(nf.J), nf.x.star())
    raise PreconditionError(f"Unknown specialization mode {mode!r}; use 'orbit' or 'kpiece'")


def closure_matrix(labels: List[GPieceLabel]) -> pd.DataFrame:
    """Boolean matrix: row a, column b is True when Z_b is in the closure of Z_a"""
    names = [str(p) for p in labels]
    data = [[gpiece_closure_contains(a, b) for b in labels] for a in labels]
    return pd.DataFrame(data, index=names, columns=names)


def covering_relations(labels: List[GPieceLabel]) -> List[tuple]:
    """Hasse edges (a, b): b is a maximal piece strictly inside the closure of a"""
    matrix = closure_matrix(labels).values
    n = len(labels)
    edges = []
    for i in range(n):
        for j in range(n):
            if i == j or not matrix[i][j]:
                continue
            between = any(
                matrix[i][k] and matrix[k][j] for k in range(n) if k not in (i, j)
            )
            if not between:
                edges.append((labels[i], labels[j]))
    return edges


def closure_to_dot(system: RootSystemData) -> str:
    labels = enumerate_gpieces(system)
    lines = [f'digraph "{system.label}_closure" {{', '  rankdir=TB;']
    for p in labels:
        lines.append(f'  "{p}";')
    for a, b in covering_relations(labels):
        lines.append(f'  "{a}" -> "{b}";')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def closure_to_dict(system: RootSystemData) -> Dict[str, Any]:
    labels = enumerate_gpieces(system)
    return {
        'schema': 'adlv.closure/1',
        'type': system.label,
        'labels': [p.to_dict() for p in labels],
        'covers': [{'from': str(a), 'to': str(b)} for a, b in covering_relations(labels)],
    }


def boundary_to_dict(system: RootSystemData) -> Dict[str, Any]:
    return {
        'schema': 'adlv.boundary/1',
        'type': system.label,
        'labels': [p.to_dict() for p in steinberg_boundary(system)],
    }


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True)
