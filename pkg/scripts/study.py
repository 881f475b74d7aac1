#!/usr/bin/env python3
"""PE-type study over every preset network on the bundled grid.

For each network: explore and normalize the default grid, write the points
CSV, print the per-PE-type ratio summary and the accuracy fronts over the
per-type representative points.

Usage:
    uv run python scripts/study.py --out-dir out [--accuracy my_top1.csv]
"""
import os
import sys
from pathlib import Path

import click

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from ppa_explorer import data_path  # noqa: E402
from ppa_explorer.models.dse import Direction  # noqa: E402
from ppa_explorer.services.costmodel import default_cost_table  # noqa: E402
from ppa_explorer.services.dse import (  # noqa: E402
    best_per_pe_type,
    default_grid,
    explore,
    join_accuracy,
    load_accuracy,
    pareto_front,
    parse_objectives,
    pe_type_summary,
)
from ppa_explorer.services.report import write_points_csv  # noqa: E402
from ppa_explorer.services.workload import STUDY_PRESETS, builtin_network  # noqa: E402

FRONTS = {
    'accuracy vs perf/area': ('top1:max,perf_per_area:max', 'perf_per_area', Direction.MAX),
    'top-1 error vs energy': ('top1_error:min,energy:min', 'energy', Direction.MIN),
}


@click.command()
@click.option('--out-dir', default='out', show_default=True, type=click.Path(file_okay=False))
@click.option('--accuracy', 'accuracy_path', default=data_path('accuracy_example.csv'))
@click.option('--workers', type=int, default=1, show_default=True)
def main(out_dir, accuracy_path, workers):
    os.makedirs(out_dir, exist_ok=True)
    grid, table = default_grid(), default_cost_table()
    accuracy = load_accuracy(accuracy_path)

    for name in STUDY_PRESETS:
        net = builtin_network(name)
        points = explore(net, grid, table, normalize=True, workers=workers)
        path = os.path.join(out_dir, f'{name}.csv')
        write_points_csv(points, path)
        click.echo(f'== {name}: {sum(p.feasible for p in points)} feasible points -> {path}')
        for row in pe_type_summary(points):
            if row.perf_per_area_vs_int16 is None:
                continue
            click.echo(f'   {row.pe_type.value:<7} perf/area x{row.perf_per_area_vs_int16:.2f} '
                       f'energy x{row.energy_vs_int16:.3f} (vs best INT16)')

        for title, (spec, metric, direction) in FRONTS.items():
            reps = list(best_per_pe_type(points, metric, direction).values())
            front = pareto_front(join_accuracy(reps, accuracy, name), parse_objectives(spec))
            click.echo(f'   {title} front: ' + ', '.join(p.cfg.pe_type.value for p in front))


if __name__ == '__main__':
    main()
