import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from lab.conf import get_optimizer_config
from lab.emitters import render_json
from lab.exceptions import AnalyticMismatch, LabError, MonogamyViolation

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_MISMATCH = 3
EXIT_VIOLATION = 4


class LabCommand(BaseCommand):
    """Base for the lab commands: ``run`` does the work, failures become exit codes."""

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except AnalyticMismatch as e:
            raise CommandError(str(e), returncode=EXIT_MISMATCH)
        except MonogamyViolation as e:
            raise CommandError(str(e), returncode=EXIT_VIOLATION)
        except (LabError, ValueError) as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)

    def run(self, **options):
        raise NotImplementedError

    def write_json(self, data):
        self.stdout.write(render_json(data).decode('utf-8'), ending='')

    def output_dir(self, value):
        path = Path(value)
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise CommandError(f"cannot create output directory {path}: {e}", returncode=EXIT_USAGE)
        return path


def add_optimizer_arguments(parser):
    group = parser.add_argument_group('optimizer')
    group.add_argument('--restarts', type=int, help='Restarts of the fully-entangled-fraction search')
    group.add_argument('--iterations', type=int, dest='max_iterations',
                       help='Iteration cap per restart')
    group.add_argument('--optimizer-seed', type=int, default=0, help='Seed of the random restarts')


def optimizer_from_options(options):
    return get_optimizer_config(
        restarts=options.get('restarts'),
        max_iterations=options.get('max_iterations'),
        seed=options.get('optimizer_seed'),
    )
