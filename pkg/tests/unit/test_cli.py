import json

import pytest

from src.cli import (
    EXIT_GUARD,
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_USAGE,
    CliConfig,
    main,
    parse_coweight,
)
from src.utils.config import Config
from src.utils.errors import NotationError

WORKED = ['--type', 'A', '--rank', '3', '--x', 's2 s1 s3 s2', '--y', 's3 s2', '--lambda', '0,628,628']


class TestDecideCommand:
    """Test adlv decide"""

    def test_worked_example(self, capsys):
        """Test the worked example as JSON"""
        code = main(['decide'] + WORKED)
        payload = json.loads(capsys.readouterr().out)

        assert code == EXIT_OK
        assert payload['status'] == 'Empty'
        assert payload['rule'] == 'Main2Empty'

    def test_text_format(self, capsys):
        """Test the one-line text verdict"""
        code = main(['decide', '--type', 'A', '--rank', '3', '--x', 'e', '--y', 'e',
                     '--lambda', '0,0,0', '--format', 'text'])

        assert code == EXIT_OK
        assert capsys.readouterr().out == 'NonEmpty (IdentityElement)\n'

    def test_affine_word(self, capsys):
        """Test --elt with an affine word and a type label"""
        code = main(['decide', '--type', 'A3', '--elt', 't[-1,0,0]', '--format', 'text'])

        assert code == EXIT_OK
        assert capsys.readouterr().out == 'Empty (NotInWa)\n'

    def test_deterministic(self, capsys):
        """Test two runs print the same bytes"""
        main(['decide'] + WORKED)
        first = capsys.readouterr().out
        main(['decide'] + WORKED)

        assert capsys.readouterr().out == first


class TestOtherCommands:
    """Test pieces, boundary, closure and table"""

    def test_pieces_triple(self, capsys):
        """Test 'x | y | lambda' input"""
        code = main(['pieces', '--type', 'A3', '--elt', 's2 s1 s3 s2 | s3 s2 | 0,628,628',
                     '--format', 'text'])

        assert code == EXIT_OK
        assert capsys.readouterr().out == 's3 s2 t[0,-628,-628]\n'

    def test_boundary_json(self, capsys):
        """Test the A1 boundary"""
        code = main(['boundary', '--type', 'A', '--rank', '1', '--format', 'json'])
        payload = json.loads(capsys.readouterr().out)

        assert code == EXIT_OK
        assert payload['labels'] == [{'J': [], 'w': 's1'}]

    def test_closure_defaults_to_dot(self, capsys):
        """Test closure prints DOT by default"""
        code = main(['closure', '--type', 'A', '--rank', '1'])

        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith('digraph "A1_closure"')

    def test_table_csv(self, capsys):
        """Test the table header"""
        code = main(['table', '--type', 'A', '--rank', '2', '--lambda', '0,0'])
        lines = capsys.readouterr().out.splitlines()

        assert code == EXIT_OK
        assert lines[0] == 'x,e,s1,s2,s1 s2,s2 s1,s1 s2 s1'
        assert lines[1].startswith('e,NonEmpty,Inconclusive')


class TestExitCodes:
    """Test usage, guard and mismatch exits"""

    def test_no_command(self, capsys):
        """Test a missing subcommand"""
        assert main([]) == EXIT_USAGE
        assert 'adlv:' in capsys.readouterr().err

    def test_unsupported_format(self):
        """Test boundary has no DOT output"""
        assert main(['boundary', '--type', 'A', '--rank', '2', '--format', 'dot']) == EXIT_USAGE

    def test_bad_word(self):
        """Test an unknown generator"""
        assert main(['decide', '--type', 'A3', '--elt', 's9']) == EXIT_USAGE

    def test_missing_normal_form_part(self):
        """Test --x without --y and --lambda"""
        assert main(['decide', '--type', 'A3', '--x', 's1']) == EXIT_USAGE

    def test_guard(self):
        """Test rank 5 enumeration is refused"""
        assert main(['closure', '--type', 'A', '--rank', '5']) == EXIT_GUARD

    def test_selfcheck_failure(self, mocker, capsys):
        """Test a failing selfcheck exits with the mismatch code"""
        mocker.patch('src.validation.oracle.run_selfcheck', return_value={
            'timestamp': 'now', 'total_checks': 1, 'passed': 0, 'failed': 1,
            'success_rate': 0.0, 'status': 'FAIL',
            'details': [{'status': 'FAIL', 'message': 'forced: 1 mismatches'}], 'timings': [],
        })
        code = main(['selfcheck', '--format', 'text'])

        assert code == EXIT_MISMATCH
        assert capsys.readouterr().out == 'FAIL forced: 1 mismatches\n0/1 checks passed\n'


class TestCliConfig:
    """Test configuration round trips"""

    def test_save_and_load(self, tmp_path, capsys):
        """Test --save-config output is accepted by --config"""
        path = tmp_path / 'adlv.yaml'
        main(['boundary', '--type', 'A', '--rank', '2', '--format', 'text', '--save-config', str(path)])
        first = capsys.readouterr().out

        saved = CliConfig.from_yaml(path.read_text())
        assert (saved.type_label, saved.rank, saved.output_format) == ('A', 2, 'text')

        assert main(['boundary', '--config', str(path)]) == EXIT_OK
        assert capsys.readouterr().out == first

    def test_settings_file(self, tmp_path):
        """Test --settings applies Config overrides before guards are checked"""
        path = tmp_path / 'settings.yaml'
        path.write_text('max_enum_rank: 1\n')

        assert main(['closure', '--type', 'A', '--rank', '2', '--settings', str(path)]) == EXIT_GUARD

    def test_settings_seed_survives(self, tmp_path):
        """Test a seed from --settings is not reset by the CLI defaults"""
        path = tmp_path / 'settings.yaml'
        path.write_text('seed: 1234\n')

        assert main(['boundary', '--type', 'A', '--rank', '1', '--settings', str(path)]) == EXIT_OK
        assert Config.SEED == 1234

    def test_default_seed_follows_config(self, monkeypatch):
        """Test CliConfig reads the process seed when it is built"""
        monkeypatch.setattr(Config, 'SEED', 99)

        assert CliConfig().seed == 99

    def test_output_under_output_dir(self, tmp_path, monkeypatch, capsys):
        """Test relative --output paths land in ADLV_OUTPUT_DIR"""
        monkeypatch.setattr(Config, 'OUTPUT_DIR', tmp_path / 'out')
        code = main(['boundary', '--type', 'A', '--rank', '1', '--output', 'a1.json'])

        assert code == EXIT_OK
        assert capsys.readouterr().out == ''
        payload = json.loads((tmp_path / 'out' / 'a1.json').read_text())
        assert payload['schema'] == 'adlv.boundary/1'

    def test_unknown_key(self):
        """Test unknown YAML keys are refused"""
        with pytest.raises(ValueError):
            CliConfig.from_yaml('colour: blue\n')

    def test_parse_coweight(self):
        """Test coweight text"""
        assert parse_coweight('0,628,628') == [0, 628, 628]
        assert parse_coweight('(1, 2)') == [1, 2]
        with pytest.raises(NotationError):
            parse_coweight('1,x')
