import re

from lab.reports import build_report

from ._base import LabCommand, add_optimizer_arguments, optimizer_from_options

SIZED_NAME = re.compile(r'^(?P<name>\w+)\((?P<d>\d+)\)$')


class Command(LabCommand):
    help = 'Print negativities, capabilities and marginal spectra of a named state as JSON'

    def add_arguments(self, parser):
        parser.add_argument('name', help='Ou, KS, Ou_p, KS_p, MaxEnt, GHZ3, W3 or Product; MaxEnt(4) sets d')
        parser.add_argument('p', nargs='?', type=float, help='Superposition weight of Ou_p / KS_p')
        parser.add_argument('--d', type=int, default=None, help='Local dimension of MaxEnt, GHZ3, W3, Product')
        parser.add_argument('--focus', type=int, default=1, help='Party playing "1" in the residual (1-based)')
        add_optimizer_arguments(parser)

    def run(self, name, p=None, d=None, focus=1, **options):
        match = SIZED_NAME.match(name)
        if match:
            name = match.group('name')
            d = d or int(match.group('d'))
        data = build_report(name, p, d or 3, focus - 1, optimizer_from_options(options))
        self.write_json(data)
