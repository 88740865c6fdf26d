"""Lệnh converse - thư viện ghép và khoảng cách với chặn dưới"""
import click

import allocation
import converse
import model
import utils
from commands import current_network, output_format
from commands.allocations import kind_option


@click.command('converse')
@kind_option
@click.pass_obj
@utils.cli_errors
def converse_cmd(options, kinds):
    """Dựng thư viện ghép và so sánh rate đạt được với chặn dưới"""
    network = current_network(options)
    tradeoffs = allocation.tradeoffs_for(network, kinds)
    library = converse.concatenate(network)
    report = converse.conjecture_gap(network, tradeoffs)
    outputs = {
        'concatenated': library.to_dict(),
        'gap': report.to_dict(),
    }
    record = utils.make_run_record('converse', {'kinds': list(kinds)}, outputs, model.config_to_dict(network))
    rows = [
        [n, utils.format_rational(beta), utils.format_rational(size)]
        for n, (beta, size) in enumerate(zip(library.betas, library.file_sizes), start=1)
    ]
    utils.emit(record, options['out'], output_format(options, 'json'), ['n', 'beta', 'file_size'], rows)
