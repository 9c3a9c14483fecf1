"""CSV, SVG and JSON output of monogamy runs and sweeps.

Every emitter is a pure function of its records, so identical runs produce
byte-identical files.  Floats in CSV carry 12 significant digits.
"""
from dataclasses import asdict
import logging
from pathlib import Path

import pandas as pd
from rest_framework.renderers import JSONRenderer

from .exceptions import EmitterError
from .monogamy import MonogamyRecord, SweepRecord

logger = logging.getLogger(__name__)

MONOGAMY_COLUMNS = ['sample_id', 'n_ab', 'n_ac', 'n_a_bc', 'lhs', 'residual', 'sampler', 'seed']
SWEEP_COLUMNS = ['p', 'analytic_residual', 'numeric_residual', 'branch', 'analytic_n_a_bc', 'analytic_n_ab']
FLOAT_FORMAT = '%.12g'

SVG_SIZE = 800
SVG_MARGIN = 12
PLOT_SPAN = SVG_SIZE - 2 * SVG_MARGIN


def _require_records(records, what):
    records = list(records)
    if not records:
        raise EmitterError(f"no {what} to write")
    return records


def _write_text(path, text):
    path = Path(path)
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Cannot write {path}: {str(e)}")
        raise EmitterError(f"cannot write {path}: {e.strerror or e}") from e
    return path


def _frame(records, columns):
    return pd.DataFrame([asdict(r) for r in records], columns=columns)


def emit_csv(records, path):
    """Monogamy records, one row per sample, ordered as given."""
    records = _require_records(records, 'monogamy records')
    text = _frame(records, MONOGAMY_COLUMNS).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return _write_text(path, text)


def read_monogamy_csv(path):
    df = pd.read_csv(path, dtype={'sampler': str})
    missing = [c for c in MONOGAMY_COLUMNS if c not in df.columns]
    if missing:
        raise EmitterError(f"{path} lacks columns {missing}")
    return [
        MonogamyRecord(
            sample_id=int(row.sample_id),
            n_ab=float(row.n_ab),
            n_ac=float(row.n_ac),
            n_a_bc=float(row.n_a_bc),
            lhs=float(row.lhs),
            residual=float(row.residual),
            sampler=str(row.sampler),
            seed=int(row.seed),
        )
        for row in df.itertuples(index=False)
    ]


def emit_sweep_csv(records, path):
    records = _require_records(records, 'sweep records')
    text = _frame(records, SWEEP_COLUMNS).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return _write_text(path, text)


def read_sweep_csv(path):
    df = pd.read_csv(path, dtype={'branch': str})
    return [SweepRecord(**{c: getattr(row, c) for c in SWEEP_COLUMNS}) for row in df.itertuples(index=False)]


def to_screen(x, y):
    """Unit-square coordinates to SVG pixels (y grows downwards)."""
    return SVG_MARGIN + PLOT_SPAN * x, SVG_SIZE - SVG_MARGIN - PLOT_SPAN * y


def _svg_document(body):
    lo, hi = SVG_MARGIN, SVG_SIZE - SVG_MARGIN
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect x="{lo}" y="{lo}" width="{PLOT_SPAN}" height="{PLOT_SPAN}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    lines.extend(body)
    lines.append('</svg>')
    return '\n'.join(lines) + '\n'


def _circle(x, y, color):
    cx, cy = to_screen(x, y)
    return f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="2" fill="{color}"/>'


def emit_svg_scatter(records, path):
    """N_a(bc) against sqrt(N_ab^2 + N_ac^2) with the diagonal N_a(bc) = sqrt(N_ab^2 + N_ac^2)."""
    records = _require_records(records, 'monogamy records')
    x0, y0 = to_screen(0.0, 0.0)
    x1, y1 = to_screen(1.0, 1.0)
    body = [f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" stroke="blue" stroke-width="1"/>']
    body.extend(_circle(r.lhs, r.n_a_bc, 'black') for r in records)
    return _write_text(path, _svg_document(body))


def emit_sweep_svg(records, path):
    """Residual against p: the closed form as a polyline, numeric values as points."""
    records = _require_records(records, 'sweep records')
    curve = ' '.join('{:.3f},{:.3f}'.format(*to_screen(r.p, r.analytic_residual)) for r in records)
    body = [f'<polyline points="{curve}" fill="none" stroke="blue" stroke-width="1"/>']
    body.extend(_circle(r.p, r.numeric_residual, 'red') for r in records)
    return _write_text(path, _svg_document(body))


def render_json(data):
    return JSONRenderer().render(data, renderer_context={'indent': 2}) + b'\n'


def emit_json(data, path):
    path = Path(path)
    try:
        path.write_bytes(render_json(data))
    except OSError as e:
        logger.error(f"Cannot write {path}: {str(e)}")
        raise EmitterError(f"cannot write {path}: {e.strerror or e}") from e
    return path
