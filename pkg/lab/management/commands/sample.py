from dataclasses import replace

from django.core.management.base import CommandError

from lab.choices import Measure, Sampler
from lab.conf import get_eigensolver, get_tolerances
from lab.emitters import emit_csv, emit_json, emit_svg_scatter
from lab.exceptions import MonogamyViolation, OutOfRangeError
from lab.runner import MonteCarloRunner, archive_monte_carlo
from lab.serializers import RunSummarySerializer, ViolationSerializer

from ._base import EXIT_VIOLATION, LabCommand, add_optimizer_arguments, optimizer_from_options


class Command(LabCommand):
    help = 'Sample three-qutrit pure states and check the monogamy inequality on each'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=int, default=1000, help='Number of samples')
        parser.add_argument('--sampler', choices=[Sampler.HAAR, Sampler.CANONICAL], default=Sampler.HAAR)
        parser.add_argument('--seed', type=int, default=0, help='Sample i uses seed + i')
        parser.add_argument('--out', required=True, help='Directory for samples.csv, scatter.svg, summary.json')
        parser.add_argument('--measure', choices=[Measure.NEGATIVITY, Measure.CAPABILITY],
                            default=Measure.NEGATIVITY)
        parser.add_argument('--threads', type=int, default=None, help='Worker cap (default MONOQT_THREADS)')
        parser.add_argument('--tol-violation', type=float, default=None,
                            help='Residuals below minus this value count as violations')
        parser.add_argument('--save', action='store_true', help='Archive the run in the database')
        add_optimizer_arguments(parser)

    def run(self, n, sampler, seed, out, measure, threads=None, tol_violation=None, save=False, **options):
        if n < 1:
            raise OutOfRangeError(f"--n must be at least 1, got {n}")
        if threads is not None and threads < 1:
            raise OutOfRangeError(f"--threads must be at least 1, got {threads}")
        directory = self.output_dir(out)
        tolerances = get_tolerances()
        if tol_violation is not None:
            tolerances = replace(tolerances, violation=tol_violation)
        runner = MonteCarloRunner(
            sampler=sampler,
            base_seed=seed,
            measure=measure,
            threads=threads,
            strict=True,
            optimizer=optimizer_from_options(options),
            tolerances=tolerances,
        )
        try:
            result = runner.run(n)
        except MonogamyViolation as e:
            path = emit_json(ViolationSerializer.from_violation(e).data, directory / 'violation.json')
            raise CommandError(f"{e}; offending state written to {path}", returncode=EXIT_VIOLATION)

        emit_csv(result.records, directory / 'samples.csv')
        emit_svg_scatter(result.records, directory / 'scatter.svg')
        summary = RunSummarySerializer(result.summary).data
        emit_json(summary, directory / 'summary.json')
        if save:
            run = archive_monte_carlo(result, get_eigensolver())
            self.stderr.write(f"archived run {run.pk}")
        self.write_json(summary)
