#!/usr/bin/env python3
"""
Command-line entry point: decide, pieces, boundary, closure, table, selfcheck
"""
import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Tuple

import yaml

from src.compactification.geom import (
    boundary_to_dict,
    closure_matrix,
    closure_to_dict,
    closure_to_dot,
    covering_relations,
    enumerate_gpieces,
    steinberg_boundary,
    to_json,
)
from src.conjugation.pieces import BRANCH_POLICIES, kpieces
from src.decision.adlv import decide, emptiness_table
from src.lattice.afweyl import AffineElt, affine_group
from src.lattice.rootsys import RootSystemData, build_root_system, parse_type
from src.utils.config import Config
from src.utils.errors import AdlvError, GuardViolationError, NotationError

logging.basicConfig(level=Config.LOG_LEVEL)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARD = 2
EXIT_MISMATCH = 3

FORMATS = ('json', 'csv', 'dot', 'text')
SUPPORTED_FORMATS = {
    'decide': ('json', 'text'),
    'pieces': ('json', 'text'),
    'boundary': ('json', 'text'),
    'closure': ('dot', 'json', 'csv', 'text'),
    'table': ('csv', 'json', 'text'),
    'selfcheck': ('json', 'text'),
}


class UsageError(Exception):
    """Bad command-line usage"""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


@dataclass
class CliConfig:
    """Parsed command-line configuration; round-trips through YAML"""

    type_label: str = 'A'
    rank: int = 2
    output_format: str = 'json'
    guards: Dict[str, Any] = field(default_factory=lambda: {
        'override': Config.GUARD_OVERRIDE,
        'max_enum_rank': Config.MAX_ENUM_RANK,
        'oracle_max_rank': Config.ORACLE_MAX_RANK,
        'oracle_max_len': Config.ORACLE_MAX_LEN,
    })
    seed: int = field(default_factory=lambda: Config.SEED)

    def to_yaml(self) -> str:
        return yaml.safe_dump(asdict(self), sort_keys=True)

    @classmethod
    def from_yaml(cls, text: str) -> 'CliConfig':
        data = yaml.safe_load(text) or {}
        unknown = set(data) - {'type_label', 'rank', 'output_format', 'guards', 'seed'}
        if unknown:
            raise ValueError(f"Unknown CLI config keys: {sorted(unknown)}")
        return cls(**data)

    def apply(self) -> None:
        """Push guard settings into the process configuration"""
        Config.GUARD_OVERRIDE = bool(self.guards.get('override', Config.GUARD_OVERRIDE))
        Config.MAX_ENUM_RANK = int(self.guards.get('max_enum_rank', Config.MAX_ENUM_RANK))
        Config.ORACLE_MAX_RANK = int(self.guards.get('oracle_max_rank', Config.ORACLE_MAX_RANK))
        Config.ORACLE_MAX_LEN = int(self.guards.get('oracle_max_len', Config.ORACLE_MAX_LEN))
        Config.SEED = int(self.seed)
        Config.validate()

    def system(self) -> RootSystemData:
        return build_root_system(self.type_label, self.rank)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument('--type', dest='type_label', help="Root system type (A-G) or label such as A3")
    common.add_argument('--rank', type=int)
    common.add_argument('--format', dest='output_format', choices=FORMATS)
    common.add_argument('--seed', type=int)
    common.add_argument('--override-guards', action='store_true',
                        help="Lift the enumeration guards (same as ADLV_GUARD_OVERRIDE=1)")
    common.add_argument('--config', type=Path, help="YAML file holding a CLI configuration")
    common.add_argument('--save-config', type=Path, help="Write the effective configuration as YAML")
    common.add_argument('--settings', type=Path, help="YAML file of Config overrides such as max_enum_rank")
    common.add_argument('--output', type=Path,
                        help="Write the payload to this file (relative paths go under ADLV_OUTPUT_DIR)")

    parser = _Parser(prog='adlv', description="Emptiness of affine Deligne-Lusztig varieties")
    sub = parser.add_subparsers(dest='command', parser_class=_Parser)
    sub.required = True

    decide_cmd = sub.add_parser('decide', parents=[common], help="Decide emptiness of X_w(1)")
    pieces_cmd = sub.add_parser('pieces', parents=[common], help="K-stable pieces met by I w I")
    for cmd in (decide_cmd, pieces_cmd):
        cmd.add_argument('--elt', help="Affine word such as 's2 s1 t[-1,0] s2', or 'x | y | lambda'")
        cmd.add_argument('--x', help="x in W^I(lambda), e.g. 's2 s1 s3 s2'")
        cmd.add_argument('--y', help="y in W, e.g. 's3 s2'")
        cmd.add_argument('--lambda', dest='lam', help="Dominant coweight, e.g. 0,628,628")
    pieces_cmd.add_argument('--policy', choices=BRANCH_POLICIES, default='smallest')

    sub.add_parser('boundary', parents=[common], help="Steinberg-fiber boundary pieces")
    sub.add_parser('closure', parents=[common], help="Closure order of G-stable pieces")
    table_cmd = sub.add_parser('table', parents=[common], help="Emptiness table for one lambda")
    table_cmd.add_argument('--lambda', dest='lam', required=True)
    check_cmd = sub.add_parser('selfcheck', parents=[common], help="Run the oracle suite")
    check_cmd.add_argument('--deep', action='store_true')
    return parser


def parse_coweight(text: str) -> List[int]:
    try:
        return [int(part) for part in text.replace(' ', '').strip('()[]').split(',') if part]
    except ValueError:
        raise NotationError(f"Cannot read coweight {text!r}; expected e.g. 0,628,628") from None


def resolve_config(args: argparse.Namespace) -> CliConfig:
    config = CliConfig.from_yaml(args.config.read_text()) if args.config else CliConfig()
    if args.type_label:
        label = args.type_label.strip()
        if len(label) > 1:
            config.type_label, config.rank = parse_type(label)
        else:
            config.type_label = label.upper()
    if args.rank is not None:
        config.rank = args.rank
    if args.output_format:
        config.output_format = args.output_format
    elif args.command == 'closure' and not args.config:
        config.output_format = 'dot'
    elif args.command == 'table' and not args.config:
        config.output_format = 'csv'
    if args.seed is not None:
        config.seed = args.seed
    if args.override_guards:
        config.guards['override'] = True
    if config.output_format not in SUPPORTED_FORMATS[args.command]:
        raise UsageError(f"{args.command} does not support --format {config.output_format}")
    return config


def read_element(args: argparse.Namespace, system: RootSystemData) -> AffineElt:
    group = affine_group(system)
    if args.elt and '|' not in args.elt:
        return group.parse(args.elt)
    if args.elt:
        parts = [p.strip() for p in args.elt.split('|')]
        if len(parts) != 3:
            raise NotationError("Use 'x | y | lambda' for normal-form input")
        x_text, y_text, lam_text = parts
    else:
        if args.x is None or args.y is None or args.lam is None:
            raise UsageError("Give --elt, or all of --x, --y and --lambda")
        x_text, y_text, lam_text = args.x, args.y, args.lam
    lam = system.coweight(parse_coweight(lam_text))
    x, y = group.W.parse(x_text), group.W.parse(y_text)
    return group.from_normal_form(system.i_lambda(lam), lam, x, y)


def _json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + '\n'


def run_command(args: argparse.Namespace, config: CliConfig) -> Tuple[int, str]:
    command = args.command
    fmt = config.output_format

    if command == 'selfcheck':
        from src.validation.oracle import run_selfcheck

        summary = run_selfcheck(deep=args.deep, seed=config.seed)
        stable = {k: v for k, v in summary.items() if k not in ('timestamp', 'timings')}
        code = EXIT_OK if summary['status'] == 'PASS' else EXIT_MISMATCH
        if fmt == 'json':
            return code, _json(stable)
        lines = [f"{d['status']} {d['message']}" for d in summary['details']]
        lines.append(f"{summary['passed']}/{summary['total_checks']} checks passed")
        return code, '\n'.join(lines) + '\n'

    system = config.system()

    if command == 'decide':
        verdict = decide(read_element(args, system))
        if fmt == 'json':
            return EXIT_OK, _json(verdict.to_dict())
        return EXIT_OK, f"{verdict.status} ({verdict.rule})\n"

    if command == 'pieces':
        pieces = kpieces(read_element(args, system), policy=args.policy)
        if fmt == 'json':
            return EXIT_OK, _json(pieces.to_dict())
        return EXIT_OK, ''.join(f"{w}\n" for w in pieces.sorted_members())

    if command == 'boundary':
        if fmt == 'json':
            return EXIT_OK, to_json(boundary_to_dict(system)) + '\n'
        return EXIT_OK, ''.join(f"{p}\n" for p in steinberg_boundary(system))

    if command == 'closure':
        if fmt == 'dot':
            return EXIT_OK, closure_to_dot(system)
        if fmt == 'json':
            return EXIT_OK, to_json(closure_to_dict(system)) + '\n'
        labels = enumerate_gpieces(system)
        if fmt == 'csv':
            return EXIT_OK, closure_matrix(labels).to_csv()
        return EXIT_OK, ''.join(f"{a} > {b}\n" for a, b in covering_relations(labels))

    if command == 'table':
        table = emptiness_table(system, system.coweight(parse_coweight(args.lam)))
        if fmt == 'csv':
            return EXIT_OK, table.to_csv()
        if fmt == 'json':
            return EXIT_OK, _json({
                'schema': 'adlv.table/1',
                'type': system.label,
                'lambda': parse_coweight(args.lam),
                'rows': list(table.index),
                'columns': list(table.columns),
                'status': table.values.tolist(),
            })
        return EXIT_OK, table.to_string() + '\n'

    raise UsageError(f"Unknown command {command}")


def write_output(path: Path, output: str) -> Path:
    if not path.is_absolute():
        Config.ensure_directories()
        path = Config.OUTPUT_DIR / path
    path.write_text(output)
    logger.info(f"✓ Wrote {path}")
    return path


def main(argv: Optional[List[str]] = None) -> int:
    """Dispatch argv; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.settings:
            Config.load_yaml(str(args.settings))
        config = resolve_config(args)
        config.apply()
        if args.save_config:
            args.save_config.write_text(config.to_yaml())
        code, output = run_command(args, config)
    except UsageError as e:
        print(f"adlv: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GuardViolationError as e:
        logger.error(f"❌ {e}")
        return EXIT_GUARD
    except (AdlvError, ValueError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE

    if args.output:
        write_output(args.output, output)
    else:
        sys.stdout.write(output)
    return code


if __name__ == '__main__':
    sys.exit(main())
