"""Ứng dụng dòng lệnh - Coded caching nhiều thư viện"""
import logging

import click

import config
from commands.allocations import allocate_cmd, sweep_cmd
from commands.bounds import converse_cmd
from commands.simulation import simulate_cmd
from commands.tradeoffs import tradeoff_cmd


@click.group()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
              help='File JSON mô tả mạng (NetworkConfig)')
@click.option('--out', default='-', show_default=True, help='File kết quả, "-" là stdout')
@click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default=None,
              help='Định dạng kết quả (mặc định tùy lệnh)')
@click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), default=None, help='Seed sinh nội dung file')
@click.option('--verbose', is_flag=True, help='Ghi log mức DEBUG')
@click.version_option(config.VERSION)
@click.pass_context
def cli(ctx, config_path, out, fmt, seed, verbose):
    """Tính, tối ưu, chặn và mô phỏng rate phát quảng bá cho coded caching nhiều thư viện"""
    logging.basicConfig(level=logging.DEBUG if verbose else config.LOG_LEVEL, format=config.LOG_FORMAT, force=True)
    ctx.obj = {
        'config_path': config_path,
        'out': out,
        'format': fmt,
        'seed': seed,
    }


# Đăng ký các lệnh con
cli.add_command(tradeoff_cmd)
cli.add_command(allocate_cmd)
cli.add_command(sweep_cmd)
cli.add_command(converse_cmd)
cli.add_command(simulate_cmd)

if __name__ == '__main__':
    cli()
