import json

import pytest

from src.decision.adlv import (
    EMPTY,
    INCONCLUSIVE,
    NONEMPTY,
    VERDICT_SCHEMA,
    Verdict,
    decide,
    emptiness_table,
    emptiness_verdicts,
    verify_verdict,
)
from src.conjugation.conj import reduce_to_minimal
from src.lattice.afweyl import affine_group, diagram_automorphism
from src.utils.errors import PreconditionError
from src.validation.oracle import conformance_oracle


def nf_element(system, x, y, lam):
    group = affine_group(system)
    W = group.W
    return group.from_normal_form(system.i_lambda(lam), lam, W.parse(x), W.parse(y))


class TestDecide:
    """Test the decision pipeline rule by rule"""

    def test_worked_example(self, worked_example):
        """Test the worked example is empty by the piece criterion"""
        verdict = decide(worked_example['element'])

        assert (verdict.status, verdict.rule) == (EMPTY, 'Main2Empty')
        assert verdict.evidence['pieces'] == ['s3 s2 t[0,-628,-628]']
        assert verdict.evidence['supp_y_inv_x'] == [1, 2, 3]

    def test_trace_in_evidence(self, worked_example):
        """Test piece-based verdicts carry the reduction trace of a"""
        verdict = decide(worked_example['element'])
        trace = reduce_to_minimal(worked_example['element'])

        assert verdict.evidence['trace'] == trace.to_dict()
        assert verdict.evidence['trace']['class_rep'] == 's3 s2 t[0,-628,-628]'

    def test_not_in_affine_weyl_group(self, A3):
        """Test e^(-omega_1) lies outside W_a"""
        verdict = decide(affine_group(A3).translation((-1, 0, 0)))

        assert (verdict.status, verdict.rule) == (EMPTY, 'NotInWa')

    def test_identity(self, A3):
        """Test X_e(1) is nonempty"""
        verdict = decide(affine_group(A3).identity)

        assert (verdict.status, verdict.rule) == (NONEMPTY, 'IdentityElement')

    def test_finite_element_out_of_scope(self, A2):
        """Test lambda = 0 is never decided"""
        verdict = decide(affine_group(A2).s(1))

        assert (verdict.status, verdict.rule) == (INCONCLUSIVE, 'OutOfScope')
        assert not verdict.conclusive

    def test_small_support(self, A2):
        """Test supp(y^-1 x) != S gives Empty"""
        verdict = decide(nf_element(A2, 's1', 'e', (64, 64)))

        assert (verdict.status, verdict.rule) == (EMPTY, 'SmallSupport')
        assert verdict.evidence['supp_y_inv_x'] == [1]

    def test_quasi_regular_nonempty(self, A3):
        """Test a full-support piece with quasi-regular lambda"""
        verdict = decide(nf_element(A3, 's2 s1 s3 s2', 'e', (0, 628, 628)))

        assert (verdict.status, verdict.rule) == (NONEMPTY, 'Main2NonEmpty')
        assert verdict.evidence['quasi_regular_bound'] == 625

    def test_face_bound_nonempty(self, A3):
        """Test y = e, supp(x) = S with lambda at the face bound"""
        verdict = decide(nf_element(A3, 's2 s1 s3 s2', 'e', (0, 25, 26)))

        assert (verdict.status, verdict.rule) == (NONEMPTY, 'Main3NonEmpty')
        assert verdict.evidence['face_bound'] == 25
        assert verdict.evidence['branch'] == 'y = e and supp(x) = S'

    def test_below_bounds_out_of_scope(self, A2):
        """Test lambda below every bound stays undecided"""
        verdict = decide(nf_element(A2, 's1 s2', 'e', (1, 1)))

        assert (verdict.status, verdict.rule) == (INCONCLUSIVE, 'OutOfScope')
        assert verdict.evidence['witness'] == str(nf_element(A2, 's1 s2', 'e', (1, 1)))

    def test_diagram_equivariance(self, A3, worked_example):
        """Test decide commutes with the diagram automorphism"""
        samples = [
            worked_example['element'],
            nf_element(A3, 's2 s1 s3 s2', 'e', (0, 25, 26)),
            nf_element(A3, 's1 s2', 'e', (4, 4, 4)),
            affine_group(A3).translation((-1, 0, 0)),
        ]
        for a in samples:
            left, right = decide(a), decide(diagram_automorphism(a))
            assert (left.status, left.rule) == (right.status, right.rule)


class TestVerdict:
    """Test verdict documents and certificate checking"""

    def test_rule_must_match_status(self):
        """Test a rule cannot certify the wrong status"""
        with pytest.raises(ValueError):
            Verdict(EMPTY, 'Main2NonEmpty')

    def test_json_document(self, worked_example):
        """Test the verdict schema"""
        payload = json.loads(decide(worked_example['element']).to_json())

        assert payload['schema'] == VERDICT_SCHEMA
        assert payload['status'] == EMPTY
        assert payload['evidence']['normal_form']['x'] == 's2 s1 s3 s2'
        assert Verdict.from_dict(payload).rule == 'Main2Empty'

    @pytest.mark.parametrize('x,y,lam', [
        ('s2 s1 s3 s2', 's3 s2', (0, 628, 628)),
        ('s2 s1 s3 s2', 'e', (0, 628, 628)),
        ('s2 s1 s3 s2', 'e', (0, 25, 26)),
        ('e', 's1', (0, 0, 0)),
    ])
    def test_verify_A3(self, A3, x, y, lam):
        """Test every produced verdict re-checks"""
        a = nf_element(A3, x, y, lam)

        assert verify_verdict(decide(a), a)

    def test_verify_other_rules(self, A2, A3):
        """Test re-checking SmallSupport, OutOfScope, NotInWa and IdentityElement"""
        for a in [
            nf_element(A2, 's1', 'e', (64, 64)),
            nf_element(A2, 's1 s2', 'e', (1, 1)),
            affine_group(A3).translation((-1, 0, 0)),
            affine_group(A3).identity,
        ]:
            assert verify_verdict(decide(a), a)

    def test_verify_rejects_tampering(self, A3, worked_example):
        """Test a forged certificate is refused"""
        a = nf_element(A3, 's2 s1 s3 s2', 'e', (0, 628, 628))
        genuine = decide(a)
        forged = Verdict(EMPTY, 'Main2Empty', {**genuine.evidence, 'pieces': []})

        assert not verify_verdict(forged, a)
        assert not verify_verdict(genuine, worked_example['element'])

    def test_verify_rejects_forged_trace(self, worked_example):
        """Test a certificate whose trace was altered is refused"""
        a = worked_example['element']
        genuine = decide(a)
        trace = {**genuine.evidence['trace'], 'class_rep': 'e'}
        forged = Verdict(EMPTY, 'Main2Empty', {**genuine.evidence, 'trace': trace})
        missing = {k: v for k, v in genuine.evidence.items() if k != 'trace'}

        assert verify_verdict(genuine, a)
        assert not verify_verdict(forged, a)
        assert not verify_verdict(Verdict(EMPTY, 'Main2Empty', missing), a)


class TestEmptinessTable:
    """Test emptiness tables over (x, y)"""

    def test_zero_lambda(self, A2):
        """Test lambda = 0 has one row and only the identity decided"""
        table = emptiness_table(A2, (0, 0))

        assert list(table.index) == ['e']
        assert list(table.columns) == ['e', 's1', 's2', 's1 s2', 's2 s1', 's1 s2 s1']
        assert table.loc['e', 'e'] == NONEMPTY
        assert set(table.iloc[0, 1:]) == {INCONCLUSIVE}
        assert table.to_csv().splitlines()[0] == 'x,e,s1,s2,s1 s2,s2 s1,s1 s2 s1'

    def test_requires_dominant(self, A2):
        """Test non-dominant lambda is refused"""
        with pytest.raises(PreconditionError):
            emptiness_verdicts(A2, (1, -1))

    def test_regular_lambda(self, A2):
        """Test a regular lambda gives a |W| x |W| table"""
        table = emptiness_table(A2, (64, 64))

        assert table.shape == (6, 6)
        assert table.loc['s1', 'e'] == EMPTY
        assert table.loc['s1 s2', 'e'] == NONEMPTY

    @pytest.mark.slow
    def test_conformance(self, A2):
        """Test support criteria and inverse symmetry over the A2 table"""
        report = conformance_oracle(A2, (64, 64))

        assert report.passed
        assert report.instance_count == 36

    @pytest.mark.slow
    @pytest.mark.parametrize('lam', [(0, 628, 628), (628, 0, 628)])
    def test_conformance_A3(self, A3, lam):
        """Test support criteria and inverse symmetry over A3 tables on a one-node face"""
        report = conformance_oracle(A3, lam)

        assert report.passed
        assert report.instance_count == 12 * 24
