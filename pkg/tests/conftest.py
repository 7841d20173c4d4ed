import pytest
import sys
from pathlib import Path

from hypothesis import settings

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.lattice.afweyl import affine_group  # noqa: E402
from src.lattice.rootsys import build_root_system  # noqa: E402
from src.utils.config import Config  # noqa: E402

settings.register_profile('adlv', derandomize=True, max_examples=40, deadline=None)
settings.load_profile('adlv')


@pytest.fixture(autouse=True)
def restore_config():
    """Undo guard changes made by a test (the CLI writes them into Config)"""
    saved = {key: getattr(Config, key) for key in (
        'GUARD_OVERRIDE', 'MAX_ENUM_RANK', 'ORACLE_MAX_RANK', 'ORACLE_MAX_LEN', 'SEED', 'N_JOBS',
    )}
    yield
    for key, value in saved.items():
        setattr(Config, key, value)


@pytest.fixture
def A1():
    return build_root_system('A', 1)


@pytest.fixture
def A2():
    return build_root_system('A', 2)


@pytest.fixture
def A3():
    return build_root_system('A', 3)


@pytest.fixture
def C2():
    return build_root_system('C', 2)


@pytest.fixture
def worked_example(A3):
    """A3 instance x = s2 s1 s3 s2, y = s3 s2 on the face J = {1}"""
    group = affine_group(A3)
    W = group.W
    J = frozenset({1})
    lam = (0, 628, 628)
    x, y = W.parse('s2 s1 s3 s2'), W.parse('s3 s2')
    return {
        'system': A3,
        'group': group,
        'J': J,
        'lam': lam,
        'x': x,
        'y': y,
        'element': group.from_normal_form(J, lam, x, y),
    }
