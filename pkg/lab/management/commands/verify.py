from dataclasses import asdict

from django.core.management.base import CommandError
import pandas as pd

from lab.serializers import significant
from lab.verification import run_battery

from ._base import EXIT_VERIFY_FAILED, LabCommand, add_optimizer_arguments, optimizer_from_options

COLUMNS = ['name', 'passed', 'worst', 'threshold', 'cases', 'detail']


class Command(LabCommand):
    help = 'Run the invariant battery and print a pass/fail table; exits 1 on any failure'

    def add_arguments(self, parser):
        parser.add_argument('--quick', action='store_true', help='Smaller sample counts')
        parser.add_argument('--seed', type=int, default=0, help='Base seed of the random instances')
        parser.add_argument('--json', action='store_true', help='Print the results as JSON')
        add_optimizer_arguments(parser)

    def run(self, quick=False, seed=0, json=False, **options):
        results = run_battery(quick=quick, seed=seed, optimizer=optimizer_from_options(options))
        if json:
            self.write_json([
                {**asdict(r), 'worst': significant(r.worst), 'threshold': significant(r.threshold)}
                for r in results
            ])
        else:
            table = pd.DataFrame([asdict(r) for r in results], columns=COLUMNS)
            table['passed'] = table['passed'].map({True: 'PASS', False: 'FAIL'})
            self.stdout.write(table.to_string(index=False, float_format=lambda x: f"{x:.3e}"))

        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}",
                               returncode=EXIT_VERIFY_FAILED)
