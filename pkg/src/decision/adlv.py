"""Emptiness decider for X_w(1) with certificates, and emptiness tables."""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd
from joblib import Parallel, delayed

import src
from src.conjugation.conj import reduce_to_minimal
from src.conjugation.pieces import kpieces
from src.lattice.afweyl import AffineElt, affine_group, in_affine_subgroup, normalize
from src.lattice.rootsys import Coweight, RootSystemData, build_root_system
from src.lattice.weyl import weyl_group
from src.monitoring.metrics import PerformanceMonitor
from src.utils.config import Config
from src.utils.errors import PreconditionError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

VERDICT_SCHEMA = 'adlv.verdict/1'

EMPTY = 'Empty'
NONEMPTY = 'NonEmpty'
INCONCLUSIVE = 'Inconclusive'

RULES_BY_STATUS = {
    EMPTY: {'NotInWa', 'SmallSupport', 'Main2Empty'},
    NONEMPTY: {'Main2NonEmpty', 'Main3NonEmpty', 'IdentityElement'},
    INCONCLUSIVE: {'OutOfScope'},
}


@dataclass(frozen=True)
class Verdict:
    """Decision on X_a(1) with the rule that produced it"""

    status: str
    rule: str
    evidence: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        if self.rule not in RULES_BY_STATUS.get(self.status, ()):
            raise ValueError(f"Rule {self.rule} cannot certify status {self.status}")

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': VERDICT_SCHEMA,
            'version': src.__version__,
            'status': self.status,
            'rule': self.rule,
            'evidence': self.evidence,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'Verdict':
        return cls(payload['status'], payload['rule'], payload.get('evidence', {}))


def _base_evidence(a: AffineElt) -> Dict[str, Any]:
    return {'type': a.label, 'element': str(a), 'length': a.length}


def decide(a: AffineElt) -> Verdict:
    """Run the decision pipeline; the first rule that applies wins"""
    system = a.system
    evidence = _base_evidence(a)

    if a.is_identity():
        return Verdict(NONEMPTY, 'IdentityElement', evidence)

    if not in_affine_subgroup(a):
        evidence['coroot_coordinates'] = [str(c) for c in system.coroot_coordinates(a.trans)]
        return Verdict(EMPTY, 'NotInWa', evidence)

    nf = normalize(a)
    evidence['normal_form'] = nf.to_dict()
    if nf.J == system.S:
        evidence['reason'] = 'lambda = 0'
        return Verdict(INCONCLUSIVE, 'OutOfScope', evidence)

    z = nf.y.inverse() * nf.x
    evidence['supp_y_inv_x'] = sorted(z.supp)
    if z.supp != system.S:
        return Verdict(EMPTY, 'SmallSupport', evidence)

    pieces = kpieces(a)
    evidence['pieces'] = [str(w) for w in pieces.sorted_members()]
    evidence['trace'] = reduce_to_minimal(a).to_dict()
    full = pieces.full_support_members()
    if not full:
        return Verdict(EMPTY, 'Main2Empty', evidence)
    evidence['witness'] = str(full[0])

    quasi_regular, bound = system.is_quasi_regular(nf.lam)
    evidence['quasi_regular_bound'] = bound
    if quasi_regular:
        return Verdict(NONEMPTY, 'Main2NonEmpty', evidence)

    face_bound = system.growth_bound(len(nf.J) + 1)
    evidence['face_bound'] = face_bound
    outside = [i for i in system.nodes if i not in nf.J]
    if all(nf.lam[i - 1] >= face_bound for i in outside):
        if nf.y.is_identity() and nf.x.supp == system.S:
            evidence['branch'] = 'y = e and supp(x) = S'
            return Verdict(NONEMPTY, 'Main3NonEmpty', evidence)
        W = nf.x.group
        if all((u * z * u.inverse()).supp == system.S for u in W.parabolic_elements(nf.J)):
            evidence['branch'] = 'supp(u y^-1 x u^-1) = S for all u in W_J'
            return Verdict(NONEMPTY, 'Main3NonEmpty', evidence)

    evidence['reason'] = 'translation part below the known bounds'
    return Verdict(INCONCLUSIVE, 'OutOfScope', evidence)


def verify_verdict(verdict: Verdict, a: AffineElt) -> bool:
    """Re-check the certificate of a verdict on a without re-running the pipeline"""
    system = a.system
    evidence = verdict.evidence
    if evidence.get('element') not in (None, str(a)):
        return False
    rule = verdict.rule
    if rule == 'IdentityElement':
        return a.is_identity()
    if rule == 'NotInWa':
        return not system.in_coroot_lattice(a.trans)

    nf = normalize(a)
    if nf.recompose() != a or nf.to_dict() != evidence.get('normal_form'):
        return False
    z = nf.y.inverse() * nf.x
    if rule == 'SmallSupport':
        return nf.J != system.S and z.supp != system.S
    if rule == 'OutOfScope':
        return True

    trace = reduce_to_minimal(a)
    if not trace.verify() or trace.to_dict() != evidence.get('trace'):
        return False
    listed = evidence.get('pieces', [])
    members = kpieces(a, policy='largest').sorted_members()
    if listed != [str(w) for w in members]:
        return False
    full = [w for w in members if w.fin.supp == system.S]
    if rule == 'Main2Empty':
        return not full
    if not full or not system.in_coroot_lattice(a.trans):
        return False
    if rule == 'Main2NonEmpty':
        return system.is_quasi_regular(nf.lam)[0]
    if rule == 'Main3NonEmpty':
        bound = system.growth_bound(len(nf.J) + 1)
        if any(nf.lam[i - 1] < bound for i in system.nodes if i not in nf.J):
            return False
        if nf.y.is_identity() and nf.x.supp == system.S:
            return True
        W = nf.x.group
        return all((u * z * u.inverse()).supp == system.S for u in W.parabolic_elements(nf.J))
    return False


def _decide_row(type_label: str, rank: int, lam: Coweight, x_word: Tuple[int, ...],
                y_words: List[Tuple[int, ...]]) -> List[Dict[str, Any]]:
    system = build_root_system(type_label, rank)
    group = affine_group(system)
    W = weyl_group(system)
    J = system.i_lambda(lam)
    x = W.from_word(x_word)
    row = []
    for y_word in y_words:
        a = group.from_normal_form(J, lam, x, W.from_word(y_word))
        row.append(decide(a).to_dict())
    return row


def emptiness_verdicts(system: RootSystemData, lam: Coweight,
                       n_jobs: Optional[int] = None) -> Dict[tuple, Verdict]:
    """Verdicts for every (x in W^{I(lambda)}, y in W), keyed by (x word, y word)"""
    lam = system.coweight(lam)
    if not system.is_dominant(lam):
        raise PreconditionError(f"Tables need a dominant coweight, got {lam}")
    Config.require_enumeration(system.rank, f"emptiness table of {system.label}")
    W = weyl_group(system)
    xs = W.enumerate_WJ_reps(system.i_lambda(lam))
    y_words = [y.word for y in W.elements()]
    n_jobs = Config.N_JOBS if n_jobs is None else n_jobs

    monitor = PerformanceMonitor(f"table {system.label} lambda={lam}")
    monitor.start()
    rows = Parallel(n_jobs=n_jobs)(
        delayed(_decide_row)(system.type_label, system.rank, lam, x.word, y_words) for x in xs
    )
    verdicts = {}
    for x, row in zip(xs, rows):
        for y_word, payload in zip(y_words, row):
            verdicts[(x.word, y_word)] = Verdict.from_dict(payload)
    monitor.stop()
    logger.info(f"✓ {system.label} table for lambda={lam}: {len(xs)} x {len(y_words)} cells")
    return verdicts


def emptiness_table(system: RootSystemData, lam: Coweight, n_jobs: Optional[int] = None) -> pd.DataFrame:
    """Status matrix with x in W^{I(lambda)} as rows and y in W as columns, ShortLex ordered"""
    verdicts = emptiness_verdicts(system, lam, n_jobs)
    W = weyl_group(system)
    xs = [x.word for x in W.enumerate_WJ_reps(system.i_lambda(system.coweight(lam)))]
    ys = [y.word for y in W.elements()]
    table = pd.DataFrame(
        [[verdicts[(x, y)].status for y in ys] for x in xs],
        index=[str(W.from_word(x)) for x in xs],
        columns=[str(W.from_word(y)) for y in ys],
    )
    table.index.name = 'x'
    return table
