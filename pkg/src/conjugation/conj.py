"""Partial conjugation of W on W~.

Only the finite simple reflections s1..sn conjugate; s0 never does. A
conjugation step ``a -> s_i a s_i`` is allowed when it does not increase the
length, and the ≈-class of ``a`` is everything reachable by length-preserving
steps.
"""
import hashlib
import json
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

from src.lattice.afweyl import (
    AffineElt,
    bruhat_leq_affine,
    in_WS,
    relative_I,
    right_coset_split,
)
from src.lattice.weyl import WeylElt
from src.utils.config import Config
from src.utils.errors import InvariantViolationError, PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

TRACE_SCHEMA = 'adlv.trace/1'


@dataclass(frozen=True)
class MinimalizationTrace:
    """Record of a reduction a ->_S v * w1 to a minimal element"""

    source: AffineElt
    steps: Tuple[Tuple[int, AffineElt], ...]
    result: AffineElt
    class_rep: AffineElt
    v_part: WeylElt
    strict_drops: int = field(default=0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': TRACE_SCHEMA,
            'type': self.source.label,
            'source': str(self.source),
            'steps': [{'s': i, 'element': str(a), 'length': a.length} for i, a in self.steps],
            'result': str(self.result),
            'class_rep': str(self.class_rep),
            'v_part': str(self.v_part),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]

    def verify(self) -> bool:
        """Re-check every step with the length formula"""
        current = self.source
        for i, nxt in self.steps:
            if current.conjugate(i) != nxt or nxt.length > current.length:
                return False
            current = nxt
        if current != self.result:
            return False
        if not in_WS(self.class_rep):
            return False
        w_v = self.class_rep.group.element(self.v_part)
        return (w_v * self.class_rep == self.result
                and self.result.length == self.v_part.length + self.class_rep.length)


@lru_cache(maxsize=8192)
def _approx_class(a: AffineElt) -> Tuple[Tuple[AffineElt, ...], Dict[AffineElt, Tuple]]:
    order = [a]
    parent: Dict[AffineElt, Optional[Tuple[AffineElt, int]]] = {a: None}
    queue = deque([a])
    while queue:
        e = queue.popleft()
        for i in e.system.nodes:
            nxt = e.conjugate(i)
            if nxt in parent or nxt.length != e.length:
                continue
            parent[nxt] = (e, i)
            order.append(nxt)
            queue.append(nxt)
    if len(order) > a.system.weyl_order:
        raise InvariantViolationError(
            f"≈-class of {a} has {len(order)} elements, more than |W| = {a.system.weyl_order}"
        )
    return tuple(order), parent


def approx_class(a: AffineElt) -> List[AffineElt]:
    """The ≈-class of a in BFS order (smallest index first)"""
    return list(_approx_class(a)[0])


def strict_drops(a: AffineElt) -> List[Tuple[AffineElt, int]]:
    """All (e, i) with e ≈ a and l(s_i e s_i) < l(e), in BFS order then by i"""
    drops = []
    for e in approx_class(a):
        for i in e.system.nodes:
            if e.conjugate(i).length < e.length:
                drops.append((e, i))
    return drops


def _path_to(a: AffineElt, target: AffineElt) -> List[Tuple[int, AffineElt]]:
    parent = _approx_class(a)[1]
    path = []
    node = target
    while parent[node] is not None:
        previous, i = parent[node]
        path.append((i, node))
        node = previous
    return list(reversed(path))


def split_minimal(e: AffineElt) -> Optional[Tuple[AffineElt, WeylElt]]:
    """(w1, v) when e = v * w1 with w1 in W~^S and v in W_{I(S, w1)}"""
    w1, u = right_coset_split(e)
    if not u.supp <= relative_I(e.system.S, w1):
        return None
    return w1, (e * w1.inverse()).fin


def reduce_to_minimal(a: AffineElt) -> MinimalizationTrace:
    """Conjugate a down to a minimal element of the form v * w1"""
    steps: List[Tuple[int, AffineElt]] = []
    current = a
    drops = 0
    while True:
        candidates = strict_drops(current)
        if not candidates:
            break
        e, i = candidates[0]
        steps.extend(_path_to(current, e))
        current = e.conjugate(i)
        steps.append((i, current))
        drops += 1
        logger.debug(f"Strict drop by s{i}: length {e.length} -> {current.length}")

    for e in approx_class(current):
        split = split_minimal(e)
        if split is not None:
            steps.extend(_path_to(current, e))
            w1, v = split
            return MinimalizationTrace(a, tuple(steps), e, w1, v, drops)

    raise InvariantViolationError(f"No element v * w1 in the minimal ≈-class of {current}")


def classify(a: AffineElt) -> AffineElt:
    """The unique w in W~^S with a in [w]"""
    return reduce_to_minimal(a).class_rep


def minimal_orbit_elements(w: AffineElt) -> List[AffineElt]:
    """(W . w)_min for w in W~^S, which is the ≈-class of w"""
    if not in_WS(w):
        raise PreconditionError(f"{w} is not in W~^S")
    return approx_class(w)


def leq_S(w: AffineElt, w_prime: AffineElt) -> bool:
    """Some v in (W . w)_min lies below w' in the Bruhat order"""
    return any(bruhat_leq_affine(v, w_prime) for v in minimal_orbit_elements(w))
