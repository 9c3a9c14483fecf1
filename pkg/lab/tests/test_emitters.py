import json
import re
import tempfile
from pathlib import Path

from django.test import SimpleTestCase

from lab.choices import Branch, Sampler
from lab.emitters import (
    MONOGAMY_COLUMNS,
    emit_csv,
    emit_json,
    emit_svg_scatter,
    emit_sweep_csv,
    emit_sweep_svg,
    read_monogamy_csv,
    read_sweep_csv,
    render_json,
    to_screen,
)
from lab.exceptions import EmitterError
from lab.monogamy import MonogamyRecord, SweepRecord
from lab.runner import run_monte_carlo

CIRCLE = re.compile(r'<circle cx="([0-9.]+)" cy="([0-9.]+)"')


def sample_records():
    return [
        MonogamyRecord.from_terms(0.9, 0.3, 0.2, sample_id=0, sampler=Sampler.HAAR, seed=10),
        MonogamyRecord.from_terms(1.0, 1 / 3, 1 / 3, sample_id=1, sampler=Sampler.HAAR, seed=11),
        MonogamyRecord.from_terms(0.123456789012345, 0.0, 0.1, sample_id=2, sampler=Sampler.HAAR, seed=12),
    ]


class EmitterTestCase(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()


class CsvTests(EmitterTestCase):
    def test_header_and_row_count(self):
        path = emit_csv(sample_records()[:1], self.dir / 'samples.csv')
        lines = path.read_text().splitlines()
        self.assertEqual(len(lines), 2)
        self.assertEqual(lines[0], ','.join(MONOGAMY_COLUMNS))
        self.assertTrue(lines[1].startswith('0,0.3,0.2,0.9,'))
        self.assertTrue(lines[1].endswith(',haar,10'))

    def test_round_trip(self):
        records = sample_records()
        back = read_monogamy_csv(emit_csv(records, self.dir / 'samples.csv'))
        self.assertEqual(len(back), len(records))
        for a, b in zip(records, back):
            self.assertEqual((a.sample_id, a.seed, a.sampler), (b.sample_id, b.seed, b.sampler))
            for field in ('n_ab', 'n_ac', 'n_a_bc', 'lhs', 'residual'):
                self.assertAlmostEqual(getattr(a, field), getattr(b, field), delta=1e-12)

    def test_twelve_significant_digits(self):
        path = emit_csv(sample_records()[2:], self.dir / 'samples.csv')
        self.assertIn(',0.1,0.123456789012,', path.read_text())

    def test_sweep_round_trip(self):
        rows = [
            SweepRecord(0.0, 0.0, 1e-17, Branch.LOW, 0.0, 0.0),
            SweepRecord(1.0, 7 / 9, 7 / 9, Branch.HIGH, 1.0, 1 / 3),
        ]
        back = read_sweep_csv(emit_sweep_csv(rows, self.dir / 'sweep.csv'))
        self.assertEqual([r.branch for r in back], ['low', 'high'])
        self.assertAlmostEqual(back[1].analytic_residual, 7 / 9, delta=1e-12)

    def test_empty_records(self):
        with self.assertRaises(EmitterError):
            emit_csv([], self.dir / 'samples.csv')
        with self.assertRaises(EmitterError):
            emit_sweep_svg([], self.dir / 'sweep.svg')

    def test_unwritable_path(self):
        with self.assertRaises(EmitterError):
            emit_csv(sample_records(), self.dir / 'missing' / 'samples.csv')


class SvgTests(EmitterTestCase):
    def test_screen_corners(self):
        self.assertEqual(to_screen(0.0, 0.0), (12, 788))
        self.assertEqual(to_screen(1.0, 1.0), (788, 12))

    def test_scatter_points_lie_above_the_diagonal(self):
        result = run_monte_carlo(30, Sampler.HAAR, base_seed=1)
        text = emit_svg_scatter(result.records, self.dir / 'scatter.svg').read_text()
        points = CIRCLE.findall(text)
        self.assertEqual(len(points), 30)
        for cx, cy in points:
            # residual >= 0 puts every point on or above the line y = x
            self.assertLessEqual(float(cy), 800 - float(cx) + 1e-3)

    def test_document_shape(self):
        text = emit_svg_scatter(sample_records(), self.dir / 'scatter.svg').read_text()
        self.assertTrue(text.startswith('<?xml'))
        self.assertTrue(text.endswith('</svg>\n'))
        self.assertIn('<line x1="12.000" y1="788.000" x2="788.000" y2="12.000"', text)

    def test_sweep_plot(self):
        rows = [SweepRecord(p / 4, p / 8, p / 8, Branch.NOT_APPLICABLE, 0.0, 0.0) for p in range(5)]
        text = emit_sweep_svg(rows, self.dir / 'sweep.svg').read_text()
        self.assertIn('<polyline points="12.000,788.000 206.000,691.000', text)
        self.assertEqual(len(CIRCLE.findall(text)), 5)

    def test_identical_runs_give_identical_bytes(self):
        first = emit_svg_scatter(sample_records(), self.dir / 'a.svg').read_bytes()
        second = emit_svg_scatter(sample_records(), self.dir / 'b.svg').read_bytes()
        self.assertEqual(first, second)


class JsonTests(EmitterTestCase):
    def test_render(self):
        raw = render_json({'residual': 0.5, 'state': 'Ou'})
        self.assertTrue(raw.endswith(b'}\n'))
        self.assertEqual(json.loads(raw), {'residual': 0.5, 'state': 'Ou'})

    def test_emit(self):
        path = emit_json({'n': 3}, self.dir / 'summary.json')
        self.assertEqual(json.loads(path.read_text()), {'n': 3})

    def test_unwritable_path(self):
        with self.assertRaises(EmitterError):
            emit_json({'n': 3}, self.dir / 'missing' / 'summary.json')
