"""Lệnh tradeoff - điểm góc và lưới giá trị của đường cong một thư viện"""
import click

import tradeoff as tr
import utils
from commands import output_format


@click.command('tradeoff')
@click.option('--n', 'num_files', type=int, required=True, help='Số file N')
@click.option('--k', 'num_users', type=int, required=True, help='Số user K')
@click.option('--kind', type=click.Choice(tr.KINDS), default=tr.KIND_SCHEME, show_default=True)
@click.option('--samples', type=int, default=20, show_default=True, help='Số khoảng của lưới đánh giá')
@click.pass_obj
@utils.cli_errors
def tradeoff_cmd(options, num_files, num_users, kind, samples):
    """Điểm góc và lưới đánh giá của R*(1, M, 1, N)"""
    curve = tr.resolve_tradeoff(kind, num_files, num_users)
    grid = tr.sample_tradeoff(curve, samples)
    corners = {p.memory for p in curve.corner_points()}
    inputs = {'num_files': num_files, 'num_users': num_users, 'kind': kind, 'samples': samples}
    outputs = {
        'label': curve.label,
        'corners': tr.tradeoff_to_json(curve),
        'slopes': [utils.format_rational(-g) for g in curve.slopes],
        'intercepts': [utils.format_rational(z) for z in curve.intercepts],
    }
    record = utils.make_run_record('tradeoff', inputs, outputs)
    rows = [
        [utils.format_rational(p.memory), utils.format_rational(p.rate),
         utils.format_decimal(p.memory), utils.format_decimal(p.rate), int(p.memory in corners)]
        for p in grid
    ]
    utils.emit(record, options['out'], output_format(options, 'csv'),
               ['memory', 'rate', 'memory_decimal', 'rate_decimal', 'corner'], rows)
