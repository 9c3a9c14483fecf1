from lab.choices import Family
from lab.conf import get_tolerances
from lab.emitters import emit_sweep_csv, emit_sweep_svg
from lab.exceptions import OutOfRangeError
from lab.runner import SweepRunner, archive_sweep
from lab.serializers import SweepRecordSerializer

from ._base import LabCommand


def resolve_family(value):
    for family in Family:
        if family.value.lower() == value.lower():
            return family
    raise OutOfRangeError(f"family must be one of {', '.join(Family.values)}, got {value!r}")


class Command(LabCommand):
    help = 'Compare closed-form and numeric monogamy residuals of Ou_p or KS_p on a p-grid'

    def add_arguments(self, parser):
        parser.add_argument('family', help='Ou_p or KS_p')
        parser.add_argument('--grid', type=int, default=101, help='Equally spaced p values on [0, 1]')
        parser.add_argument('--out', help='Directory for sweep.csv and sweep.svg')
        parser.add_argument('--tol-report', type=float, default=None,
                            help='Allowed |analytic - numeric| (default from LAB_TOLERANCES)')
        parser.add_argument('--save', action='store_true', help='Archive the sweep in the database')

    def run(self, family, grid=101, out=None, tol_report=None, save=False, **options):
        family = resolve_family(family)
        if grid < 2:
            raise OutOfRangeError(f"--grid must be at least 2, got {grid}")
        tolerance = get_tolerances().report if tol_report is None else tol_report
        rows = SweepRunner(family, grid, tolerance).run()
        if out:
            directory = self.output_dir(out)
            emit_sweep_csv(rows, directory / 'sweep.csv')
            emit_sweep_svg(rows, directory / 'sweep.svg')
        if save:
            run = archive_sweep(family, rows)
            self.stderr.write(f"archived sweep {run.pk}")
        self.write_json(SweepRecordSerializer(rows, many=True).data)
