from lab.exceptions import OutOfRangeError
from lab.models import MonteCarloRun, SweepRun
from lab.serializers import (
    MonogamySampleSerializer,
    MonteCarloRunSerializer,
    SweepPointSerializer,
    SweepRunSerializer,
)

from ._base import LabCommand


class Command(LabCommand):
    help = 'List archived Monte-Carlo runs and sweeps as JSON'

    def add_arguments(self, parser):
        parser.add_argument('--limit', type=int, default=10, help='Most recent runs of each kind')
        parser.add_argument('--run', type=int, help='Print the samples of one Monte-Carlo run')
        parser.add_argument('--sweep', type=int, help='Print the points of one sweep')

    def run(self, limit=10, run=None, sweep=None, **options):
        if run is not None:
            found = MonteCarloRun.objects.filter(pk=run).first()
            if found is None:
                raise OutOfRangeError(f"no archived Monte-Carlo run with id {run}")
            self.write_json({
                'run': MonteCarloRunSerializer(found).data,
                'samples': MonogamySampleSerializer(found.samples.all(), many=True).data,
            })
            return
        if sweep is not None:
            found = SweepRun.objects.filter(pk=sweep).first()
            if found is None:
                raise OutOfRangeError(f"no archived sweep with id {sweep}")
            self.write_json({
                'sweep': SweepRunSerializer(found).data,
                'points': SweepPointSerializer(found.points_set.all(), many=True).data,
            })
            return
        self.write_json({
            'monte_carlo': MonteCarloRunSerializer(MonteCarloRun.objects.all()[:limit], many=True).data,
            'sweeps': SweepRunSerializer(SweepRun.objects.all()[:limit], many=True).data,
        })
