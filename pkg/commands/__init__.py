"""Các lệnh con của CLI"""
import model
from errors import InputError


def current_network(options):
    """Đọc NetworkConfig từ --config"""
    path = options.get('config_path')
    if not path:
        raise InputError("Lệnh này cần --config <file JSON>")
    return model.load_config(path)


def output_format(options, default):
    return options.get('format') or default
