"""
Command-line entry point: python -m seqrecourse <subcommand> [options]

Each subcommand module exposes HELP, add_arguments(parser) and
handle(args, stdout, stderr) returning the exit code.

Exit codes: 0 success, 1 recourse failure (or failed verification),
2 usage / I/O error.
"""
import argparse
import logging
import logging.config
import sys
from typing import List, Optional, TextIO

from . import __version__, settings
from .commands import explain, fit, gen_data, report, verify
from .exceptions import RecourseError, SeqRecourseError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RECOURSE_FAILURE = 1
EXIT_USAGE = 2

COMMANDS = {
    'gen-data': gen_data,
    'fit': fit,
    'explain': explain,
    'verify': verify,
    'report': report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='seqrecourse',
        description='Sequential algorithmic recourse: explore, exploit, enhance',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--verbose', '-v', action='count', default=0,
                        help='More logging (-v INFO, -vv DEBUG)')
    subparsers = parser.add_subparsers(dest='command', metavar='<command>')
    subparsers.required = True
    for name, command in COMMANDS.items():
        sub = subparsers.add_parser(name, help=command.HELP, description=command.HELP)
        command.add_arguments(sub)
        sub.set_defaults(handler=command.handle)
    return parser


def configure_logging(verbosity: int) -> None:
    logging.config.dictConfig(settings.LOGGING)
    if verbosity:
        level = logging.DEBUG if verbosity > 1 else logging.INFO
        logging.getLogger('seqrecourse').setLevel(level)


def main(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None,
         stderr: Optional[TextIO] = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_logging(args.verbose)
    try:
        return args.handler(args, stdout, stderr)
    except RecourseError as e:
        print(f"❌ Recourse failed: {e}", file=stderr)
        return EXIT_RECOURSE_FAILURE
    except (SeqRecourseError, OSError) as e:
        print(f"❌ {e}", file=stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
