"""
Command-line entry point.

dispatch(argv)는 명령 이름의 하이픈을 밑줄로 바꿔 core 앱의 관리 명령을 찾아 실행합니다.

Exit codes:
    0: 성공
    1: 사용법 오류 (도움말 출력, 매니페스트 없음)
    2: 실행 중 실패 (실패한 단계 이름이 들어간 진단 출력)
"""
import os
import sys
import uuid
from typing import List, Optional, TextIO

import django
from django.apps import apps
from django.core.management import load_command_class
from django.core.management.base import CommandError

from core.error_handling.exceptions import EXIT_OK, EXIT_USAGE
from core.error_handling.handlers import ErrorHandler
from core.manifest import RunManifest
from core.middleware.logging import StageLoggingMiddleware, StageRun

COMMANDS = (
    'ingest',
    'map-syllables',
    'find-novel',
    'build-vocab',
    'tokenize',
    'train',
    'evaluate',
    'sweep',
    'report',
    'synthesize',
)


def usage() -> str:
    lines = ['usage: hanlm <command> [options]', '', 'commands:']
    lines += [f"  {name}" for name in COMMANDS]
    lines += ['', "Run 'hanlm <command> --help' for command options."]
    return '\n'.join(lines) + '\n'


def setup_django() -> None:
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'hanlm.settings')
    if not apps.ready:
        django.setup()


def dispatch(argv: Optional[List[str]] = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    """Run one command and return its exit code; never raises for command failures."""
    setup_django()
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    if not argv:
        stderr.write(usage())
        return EXIT_USAGE
    if argv[0] in ('-h', '--help', 'help'):
        stdout.write(usage())
        return EXIT_OK
    if argv[0] not in COMMANDS:
        stderr.write(f"Unknown command: '{argv[0]}'\n\n{usage()}")
        return EXIT_USAGE

    stage = argv[0]
    command = load_command_class('core', stage.replace('-', '_'))
    parser = command.create_parser('hanlm', stage)
    try:
        options = vars(parser.parse_args(argv[1:]))
    except CommandError as e:
        stderr.write(f"{e}\n\n{parser.format_help()}")
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE

    args = options.pop('args', ())
    options.update(stdout=stdout, stderr=stderr)
    run = StageRun(stage=stage, argv=argv, options=options, run_id=str(uuid.uuid4()))
    manifest = RunManifest(command=stage, argv=argv, run_id=run.run_id)
    command.manifest = manifest

    def get_response(run: StageRun) -> int:
        command.execute(*args, **run.options)
        return EXIT_OK

    error = None
    try:
        exit_code = StageLoggingMiddleware(get_response)(run)
    except CommandError as e:
        stderr.write(f"{e}\n\n{parser.format_usage()}")
        return EXIT_USAGE
    except Exception as e:
        exit_code, error = ErrorHandler().handle_error(e, stage)
        stderr.write(error['summary'] + '\n')

    manifest.finish(exit_code, error)
    manifest.write()
    return exit_code
