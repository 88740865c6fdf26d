"""Lệnh simulate - kiểm chứng bit-exact đặt nội dung, phát và giải mã"""
import logging

import click

import allocation
import config
import model
import sim
import utils
from commands import current_network, output_format
from errors import InputError

logger = logging.getLogger(__name__)

ALLOC_GREEDY = 'greedy'
ALLOC_PROPORTIONAL = 'proportional'
ALLOC_EXPLICIT = 'explicit'


def choose_allocation(network, method, shares):
    if method == ALLOC_EXPLICIT:
        if not shares:
            raise InputError("--alloc explicit cần --shares, ví dụ 2/5,3/5")
        values = [utils.parse_rational(s, '--shares') for s in shares.split(',')]
        if len(values) != network.num_libraries:
            raise InputError(f"--shares có {len(values)} giá trị, cần {network.num_libraries}")
        return allocation.Allocation(tuple(values))
    if shares:
        raise InputError("--shares chỉ dùng với --alloc explicit")
    if method == ALLOC_PROPORTIONAL:
        return allocation.proportional_allocation(network)
    # tham lam trên chính đường cong của sơ đồ được mô phỏng
    tradeoffs = allocation.tradeoffs_for(network, 'scheme')
    return allocation.greedy_allocate(network, tradeoffs).final


@click.command('simulate')
@click.option('--alloc', 'method', type=click.Choice([ALLOC_GREEDY, ALLOC_PROPORTIONAL, ALLOC_EXPLICIT]),
              default=ALLOC_GREEDY, show_default=True)
@click.option('--shares', default=None, help='M_ℓ cho --alloc explicit, cách nhau bởi dấu phẩy')
@click.option('--base-size', type=click.IntRange(min=1), default=None, help='F (bit); mặc định tự chọn')
@click.option('--reduction', is_flag=True, help="Kiểm chứng thêm phép quy về thư viện ghép cho mọi d'")
@click.option('--dump', 'dump_path', type=click.Path(dir_okay=False), default=None,
              help='Ghi file, cache và bản tin dài nhất ra file nhị phân')
@click.pass_obj
@utils.cli_errors
def simulate_cmd(options, method, shares, base_size, reduction, dump_path):
    """Mô phỏng mọi demand vector và so sánh từng bit giải mã được"""
    network = current_network(options)
    seed = config.DEFAULT_SEED if options['seed'] is None else options['seed']
    alloc = choose_allocation(network, method, shares)
    base_size = sim.select_base_size(network, alloc, base_size)
    store = sim.make_file_store(network, base_size, seed)
    report = sim.verify_all(store, network, alloc)
    outputs = {
        'allocation': alloc.to_list(),
        'verification': report.to_dict(),
        'rate_matches_formula': report.measured_rate == report.formula_rate,
    }
    if reduction:
        outputs['reduction'] = sim.verify_reduction(network, store, alloc).to_dict()
    if dump_path:
        placement = sim.place(store, network, alloc)
        # demand đầu tiên (theo thứ tự từ điển) có bản tin dài nhất
        transcript = max(
            (sim.deliver(store, network, placement, demand) for demand in model.enumerate_demands(network)),
            key=lambda t: t.total_bits,
        )
        outputs['dump'] = {'path': dump_path, 'records': sim.dump_binary(dump_path, store, placement, transcript)}
        logger.info(f"Đã ghi {dump_path}")

    inputs = {'alloc': method, 'shares': shares, 'base_size': base_size,
              'reduction': reduction, 'dump': dump_path}
    record = utils.make_run_record('simulate', inputs, outputs, model.config_to_dict(network), seed)
    rows = [
        [library, bits] for library, bits in enumerate(report.library_bits, start=1)
    ]
    utils.emit(record, options['out'], output_format(options, 'json'), ['library', 'max_payload_bits'], rows)
