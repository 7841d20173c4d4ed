import os
from pathlib import Path
from dotenv import load_dotenv
from typing import Dict, Any
import yaml

from src.utils.errors import GuardViolationError

# Load environment variables
env_path = Path(__file__).parent.parent.parent / '.env'
load_dotenv(dotenv_path=env_path)


class Config:
    """Application configuration"""

    # Logging
    LOG_LEVEL = os.getenv('ADLV_LOG_LEVEL', 'INFO')

    # Enumeration guards
    GUARD_OVERRIDE = os.getenv('ADLV_GUARD_OVERRIDE', '0') == '1'
    MAX_ENUM_RANK = int(os.getenv('ADLV_MAX_ENUM_RANK', 4))
    ORACLE_MAX_RANK = int(os.getenv('ADLV_ORACLE_MAX_RANK', 3))
    ORACLE_MAX_LEN = int(os.getenv('ADLV_ORACLE_MAX_LEN', 10))

    # Randomised checks
    SEED = int(os.getenv('ADLV_SEED', 20100601))

    # Workers for tables and selfcheck (joblib)
    N_JOBS = int(os.getenv('ADLV_N_JOBS', 1))

    # Output paths
    BASE_DIR = Path(__file__).parent.parent.parent
    OUTPUT_DIR = Path(os.getenv('ADLV_OUTPUT_DIR', str(BASE_DIR / 'output')))

    @classmethod
    def validate(cls) -> bool:
        """Validate configuration values"""
        problems = []
        if cls.MAX_ENUM_RANK < 1:
            problems.append('ADLV_MAX_ENUM_RANK must be positive')
        if cls.ORACLE_MAX_RANK < 1 or cls.ORACLE_MAX_LEN < 0:
            problems.append('oracle guards must be non-negative')
        if cls.N_JOBS == 0:
            problems.append('ADLV_N_JOBS must be non-zero')
        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            problems.append(f"unknown log level {cls.LOG_LEVEL}")

        if problems:
            raise ValueError(f"Invalid config: {'; '.join(problems)}")

        return True

    @classmethod
    def to_dict(cls) -> Dict[str, Any]:
        """Convert config to dictionary"""
        return {
            key: (str(value) if isinstance(value, Path) else value)
            for key, value in cls.__dict__.items()
            if key.isupper()
        }

    @classmethod
    def load_yaml(cls, path: str) -> Dict[str, Any]:
        """Apply upper-case overrides from a YAML file"""
        with open(path, 'r') as f:
            overrides = yaml.safe_load(f) or {}

        applied = {}
        for key, value in overrides.items():
            key = key.upper()
            if not hasattr(cls, key):
                raise ValueError(f"Unknown config key in {path}: {key}")
            setattr(cls, key, value)
            applied[key] = value

        cls.validate()
        return applied

    @classmethod
    def require_enumeration(cls, rank: int, what: str) -> None:
        """Refuse exhaustive enumeration above the rank guard unless overridden"""
        if rank > cls.MAX_ENUM_RANK and not cls.GUARD_OVERRIDE:
            raise GuardViolationError(
                f"{what} enumerates the full Weyl group; rank {rank} exceeds the guard "
                f"{cls.MAX_ENUM_RANK} (set ADLV_GUARD_OVERRIDE=1 to lift it)"
            )

    @classmethod
    def require_oracle(cls, rank: int, max_len: int, what: str) -> None:
        """Keep brute-force oracles within their rank and word-length guards"""
        if cls.GUARD_OVERRIDE:
            return
        if rank > cls.ORACLE_MAX_RANK or max_len > cls.ORACLE_MAX_LEN:
            raise GuardViolationError(
                f"{what}: rank {rank} / length {max_len} exceeds the oracle guard "
                f"({cls.ORACLE_MAX_RANK} / {cls.ORACLE_MAX_LEN})"
            )

    @classmethod
    def ensure_directories(cls) -> None:
        """Ensure the output directory exists"""
        cls.OUTPUT_DIR.mkdir(parents=True, exist_ok=True)
