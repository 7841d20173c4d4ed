import pytest
import numpy as np
from hypothesis import given, strategies as st

from src.lattice.rootsys import build_root_system, cartan_matrix, parse_type
from src.utils.errors import InvalidRootSystemError, PreconditionError


class TestBuildRootSystem:
    """Test root-system construction"""

    @pytest.mark.parametrize('type_label,rank,count', [
        ('A', 1, 1), ('A', 2, 3), ('A', 3, 6), ('B', 3, 9), ('C', 2, 4),
        ('D', 4, 12), ('G', 2, 6), ('F', 4, 24), ('E', 6, 36), ('E', 8, 120),
    ])
    def test_positive_root_counts(self, type_label, rank, count):
        """Test classical number of positive roots"""
        system = build_root_system(type_label, rank)

        assert system.num_positive == count

    def test_highest_root_A2(self, A2):
        """Test theta = alpha1 + alpha2 in A2"""
        assert A2.theta_root == (1, 1)

    def test_highest_root_A3(self, A3):
        """Test theta = alpha1 + alpha2 + alpha3 in A3"""
        assert A3.theta_root == (1, 1, 1)

    def test_highest_root_G2(self):
        """Test theta = 3 alpha1 + 2 alpha2 in G2 (alpha1 short)"""
        G2 = build_root_system('G', 2)

        assert G2.theta_root == (3, 2)
        assert G2.theta_height == 5

    def test_roots_in_height_order(self, A3):
        """Test simple roots first, then by height"""
        heights = [sum(beta) for beta in A3.positive_roots]

        assert heights == sorted(heights)
        assert A3.positive_roots[:3] == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_cartan_convention_C2(self):
        """Test long node 2 bonded to short node 1 in C2"""
        assert cartan_matrix('C', 2) == ((2, -2), (-1, 2))
        assert cartan_matrix('B', 2) == ((2, -1), (-2, 2))

    def test_cartan_diagonal(self):
        """Test Cartan diagonal and off-diagonal signs"""
        for type_label, rank in [('A', 4), ('B', 3), ('D', 5), ('E', 7), ('F', 4)]:
            C = np.array(cartan_matrix(type_label, rank))

            assert (np.diag(C) == 2).all()
            assert (C[~np.eye(rank, dtype=bool)] <= 0).all()

    def test_reflection_closure(self, C2):
        """Test s_i(beta) is again a root for every root"""
        for i in C2.nodes:
            for k in range(len(C2.roots)):
                image = C2.reflect_root(i, k)
                assert 0 <= image < len(C2.roots)

    def test_theta_height_matches_pairing(self):
        """Test <rho^vee, theta> is the height of theta"""
        for type_label, rank in [('A', 3), ('B', 4), ('C', 3), ('D', 4), ('G', 2), ('F', 4)]:
            system = build_root_system(type_label, rank)
            assert system.theta_height == sum(system.theta_root)

    @pytest.mark.parametrize('type_label,rank', [('H', 2), ('D', 3), ('E', 5), ('A', 0), ('G', 3)])
    def test_invalid_type(self, type_label, rank):
        """Test invalid (type, rank) combinations"""
        with pytest.raises(InvalidRootSystemError):
            build_root_system(type_label, rank)

    def test_invalid_error_is_value_error(self):
        """Test invalid input surfaces as ValueError"""
        with pytest.raises(ValueError):
            build_root_system('Z', 2)

    def test_cartan_array_read_only(self, A2):
        """Test exported numpy arrays cannot be written"""
        array = A2.cartan_array

        assert array.dtype == np.int64
        with pytest.raises(ValueError):
            array[0, 0] = 5

    def test_parse_type(self):
        """Test 'A3' label parsing"""
        assert parse_type('A3') == ('A', 3)
        assert parse_type('e8') == ('E', 8)
        with pytest.raises(InvalidRootSystemError):
            parse_type('A')


class TestPairings:
    """Test coweight pairings and faces"""

    def test_pair_rho_theta_A2(self, A2):
        """Test <rho^vee, theta> = 2 in A2"""
        assert A2.pair(A2.rho_vee, A2.theta) == 2

    def test_pair_zero(self, A3):
        """Test pairing of zero with every root"""
        assert all(A3.pair(A3.zero(), k) == 0 for k in range(len(A3.roots)))

    def test_pair_reads_coordinate(self, A3):
        """Test <lambda, alpha_1> is the first coordinate"""
        assert A3.pair((0, 628, 628), 0) == 0
        assert A3.pairings((0, 628, 628)) == (0, 628, 628, 628, 1256, 1256)

    def test_pair_bad_index(self, A2):
        """Test out-of-range root index"""
        with pytest.raises(PreconditionError):
            A2.pair((1, 1), 17)

    def test_i_lambda(self, A3):
        """Test I(lambda) read-off"""
        assert A3.i_lambda(A3.rho_vee) == frozenset()
        assert A3.i_lambda(A3.zero()) == A3.S
        assert A3.i_lambda((0, 628, 628)) == frozenset({1})

    def test_i_lambda_rejects_non_dominant(self, A2):
        """Test I(lambda) needs a dominant coweight"""
        with pytest.raises(PreconditionError):
            A2.i_lambda((1, -1))

    def test_rho_vee_J(self, A2, A3):
        """Test rho^vee_J coordinates"""
        assert A2.rho_vee_J(A2.S) == (1, 1)
        assert A3.rho_vee_J(frozenset()) == (0, 0, 0)
        assert A3.rho_vee_J({2, 3}) == (0, 1, 1)

    def test_coweight_rejects_floats_and_bools(self, A2):
        """Test coordinates must be integers"""
        with pytest.raises(PreconditionError):
            A2.coweight((1.0, 2))
        with pytest.raises(PreconditionError):
            A2.coweight((True, 2))
        with pytest.raises(PreconditionError):
            A2.coweight((1, 2, 3))

    def test_theta_coroot(self, A2, C2):
        """Test theta^vee in fundamental-coweight coordinates"""
        assert A2.theta_coroot == (1, 1)
        assert C2.pair(C2.theta_coroot, C2.theta) == 2

    @pytest.mark.property_based
    @given(st.tuples(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50)),
           st.tuples(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50)))
    def test_pair_linear(self, lam, mu):
        """Test pairing is linear in lambda and additive over roots"""
        A3 = build_root_system('A', 3)
        total = tuple(a + b for a, b in zip(lam, mu))
        for k in range(A3.num_positive):
            assert A3.pair(total, k) == A3.pair(lam, k) + A3.pair(mu, k)
        # alpha1 + alpha2 is root 3
        assert A3.pair(lam, 3) == A3.pair(lam, 0) + A3.pair(lam, 1)


class TestQuasiRegularity:
    """Test the quasi-regularity bound"""

    def test_zero_is_quasi_regular(self, A2):
        """Test all-zero pairings"""
        assert A2.is_quasi_regular(A2.zero()) == (True, 64)

    def test_worked_example_bound(self, A3):
        """Test bound 625 in A3"""
        assert A3.is_quasi_regular((0, 628, 628)) == (True, 625)

    def test_small_coweight_not_quasi_regular(self, A2):
        """Test (1,1) in A2 falls below 64"""
        assert A2.is_quasi_regular((1, 1)) == (False, 64)

    def test_negative_pairings_count_by_absolute_value(self, A2):
        """Test non-dominant coweights use |<lambda, beta>|"""
        assert A2.is_quasi_regular((-64, -64))[0]
        assert A2.is_quasi_regular((64, -64))[0]
        assert not A2.is_quasi_regular((64, -63))[0]

    def test_E8_bound_is_exact(self):
        """Test the E8 bound exceeds 2**44 without wrapping"""
        E8 = build_root_system('E', 8)

        assert E8.theta_height == 29
        assert E8.growth_bound(9) == 31 ** 9
        assert E8.growth_bound(9) > 2 ** 44
        assert E8.is_quasi_regular(E8.zero()) == (True, 31 ** 9)


class TestCorootLattice:
    """Test membership in the coroot lattice"""

    def test_simple_coroots(self, C2):
        """Test every alpha_i^vee lies in X"""
        for i in C2.nodes:
            assert C2.in_coroot_lattice(C2.simple_coroot(i))

    def test_worked_example_coordinates(self, A3):
        """Test (0,628,628) = 471 a1 + 942 a2 + 785 a3"""
        assert A3.coroot_coordinates((0, 628, 628)) == (471, 942, 785)
        assert A3.in_coroot_lattice((0, 628, 628))

    def test_fundamental_coweight_not_in_X(self, A3):
        """Test omega_1 lies outside the coroot lattice"""
        assert not A3.in_coroot_lattice((1, 0, 0))

    def test_closed_under_addition(self, A2):
        """Test sums of lattice points stay in X"""
        a, b = (2, -1), (1, 1)

        assert A2.in_coroot_lattice(a) and A2.in_coroot_lattice(b)
        assert A2.in_coroot_lattice((3, 0))
