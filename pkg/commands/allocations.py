"""Lệnh allocate và sweep"""
import logging

import click

import allocation
import model
import tradeoff as tr
import utils
from commands import current_network, output_format
from errors import VerificationError

logger = logging.getLogger(__name__)

kind_option = click.option(
    '--kind', 'kinds', type=click.Choice(tr.KINDS), multiple=True, default=(tr.KIND_AUTO,),
    show_default=True, help='Loại đường cong: một giá trị dùng chung hoặc lặp lại cho từng thư viện',
)


@click.command('allocate')
@kind_option
@click.option('--oracle', 'oracle_step', default=None, help='Bước lưới "p/q" để đối chiếu với vét cạn')
@click.pass_obj
@utils.cli_errors
def allocate_cmd(options, kinds, oracle_step):
    """Phân bổ cache tối ưu bằng thuật toán tham lam"""
    network = current_network(options)
    tradeoffs = allocation.tradeoffs_for(network, kinds)
    trace = allocation.greedy_allocate(network, tradeoffs)
    outputs = trace.to_dict()
    outputs['structure_violations'] = allocation.structure_violations(network, tradeoffs, trace.final)

    if oracle_step is not None:
        step = utils.parse_rational(oracle_step, '--oracle')
        best, best_rate = allocation.brute_force_allocate(network, tradeoffs, step)
        logger.info(f"Vét cạn bước {utils.format_rational(step)}: rate {utils.format_rational(best_rate)}")
        outputs['oracle'] = {
            'grid_step': utils.format_rational(step),
            'allocation': best.to_list(),
            'rate': utils.format_rational(best_rate),
        }
        if best_rate != trace.rate:
            raise VerificationError(
                f"Tham lam cho {utils.format_rational(trace.rate)}, vét cạn cho {utils.format_rational(best_rate)}",
                {'greedy': trace.final.to_list(), 'oracle': best.to_list()},
            )

    inputs = {'kinds': list(kinds), 'oracle_step': oracle_step}
    record = utils.make_run_record('allocate', inputs, outputs, model.config_to_dict(network))
    rows = [
        [number, step.library, step.segment_index, utils.format_rational(step.delta),
         utils.format_rational(step.allocated)]
        for number, step in enumerate(trace.steps, start=1)
    ]
    utils.emit(record, options['out'], output_format(options, 'json'),
               ['step', 'library', 'segment_index', 'delta', 'allocated'], rows)


@click.command('sweep')
@kind_option
@click.option('--samples', type=int, default=100, show_default=True, help='Số khoảng của lưới λ')
@click.pass_obj
@utils.cli_errors
def sweep_cmd(options, kinds, samples):
    """R(λ) cho mạng hai thư viện với phân bổ (λM, (1−λ)M)"""
    network = current_network(options)
    tradeoffs = allocation.tradeoffs_for(network, kinds)
    result = allocation.lambda_sweep(network, tradeoffs, samples)
    inputs = {'kinds': list(kinds), 'samples': samples}
    record = utils.make_run_record('sweep', inputs, result.to_dict(), model.config_to_dict(network))
    rows = [
        [utils.format_rational(lam), utils.format_rational(rate),
         utils.format_decimal(lam), utils.format_decimal(rate)]
        for lam, rate in result.points
    ]
    utils.emit(record, options['out'], output_format(options, 'csv'),
               ['lambda', 'rate', 'lambda_decimal', 'rate_decimal'], rows)
