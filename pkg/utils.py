"""Các hàm tiện ích"""
import csv
import decimal
import hashlib
import json
import logging
import os
from dataclasses import dataclass, field
from datetime import datetime
from fractions import Fraction
from functools import wraps

import click

import config
from errors import InputError, VerificationError

logger = logging.getLogger(__name__)


def parse_rational(value, name='value'):
    """Đọc số hữu tỉ chính xác từ chuỗi "p/q", "n", int hoặc Fraction"""
    if isinstance(value, bool):
        raise InputError(f"{name}: không chấp nhận kiểu bool")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{name}: '{value}' không phải số hữu tỉ") from None
    # float làm mất tính chính xác nên bị từ chối
    raise InputError(f"{name}: cần chuỗi 'p/q' hoặc số nguyên, nhận {type(value).__name__}")


def format_rational(value):
    """Chuỗi "p/q" (hoặc "n" khi là số nguyên)"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value, digits=17):
    """Dạng thập phân với 17 chữ số có nghĩa, không phụ thuộc locale"""
    value = Fraction(value)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        result = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    text = format(result, 'f')
    if '.' in text:
        text = text.rstrip('0').rstrip('.')
    return text or '0'


def load_json(path):
    """Đọc file JSON"""
    if not os.path.exists(path):
        raise InputError(f"Không tìm thấy file: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"Lỗi đọc file JSON {path}: {e}") from None


def save_json(path, data):
    """Lưu dữ liệu ra file JSON"""
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=False, indent=2)
            f.write('\n')
    except OSError as e:
        logger.error(f"Lỗi khi lưu {path}: {e}")
        raise


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(',', ':'), ensure_ascii=False)


def digest(data):
    """SHA-256 của JSON chuẩn hóa"""
    return hashlib.sha256(canonical_json(data).encode('utf-8')).hexdigest()


def write_csv(stream, header, rows):
    """Ghi CSV: luôn có dòng tiêu đề, xuống dòng bằng \\n"""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)


@dataclass
class RunRecord:
    """Bản ghi một lần chạy lệnh"""
    command: str
    config_digest: str
    inputs: dict
    outputs: dict
    version: str = config.VERSION
    seed: int = None
    created_at: str = field(default_factory=lambda: datetime.now().strftime('%Y-%m-%d %H:%M:%S'))

    def stable_dict(self):
        """Phần không phụ thuộc thời điểm chạy"""
        return {
            'command': self.command,
            'config_digest': self.config_digest,
            'inputs': self.inputs,
            'outputs': self.outputs,
            'version': self.version,
            'seed': self.seed,
        }

    def to_dict(self):
        data = self.stable_dict()
        data['created_at'] = self.created_at
        return data


def make_run_record(command, inputs, outputs, config_data=None, seed=None):
    """Tạo RunRecord; digest lấy từ cấu hình mạng, nếu không có thì từ inputs"""
    source = config_data if config_data is not None else inputs
    return RunRecord(command=command, config_digest=digest(source),
                     inputs=inputs, outputs=outputs, seed=seed)


def emit(record, out, fmt, header=None, rows=None):
    """Xuất kết quả lệnh dạng JSON hoặc CSV"""
    if fmt == 'csv':
        if header is None:
            raise InputError(f"Lệnh {record.command} không hỗ trợ --format csv")
        with click.open_file(out, 'w', encoding='utf-8') as stream:
            write_csv(stream, header, rows)
        # bản ghi JSON đi kèm khi ghi ra file
        if out != '-':
            save_json(f"{out}.record.json", record.to_dict())
        return
    with click.open_file(out, 'w', encoding='utf-8') as stream:
        stream.write(json.dumps(record.to_dict(), ensure_ascii=False, indent=2))
        stream.write('\n')


def cli_errors(f):
    """Decorator đổi lỗi thành mã thoát: 1 khi kiểm chứng thất bại, 2 khi đầu vào sai"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except VerificationError as e:
            click.echo(f"Lỗi kiểm chứng: {e}", err=True)
            if e.witness is not None:
                click.echo(f"Witness: {e.witness}", err=True)
            raise SystemExit(1)
        except InputError as e:
            click.echo(f"Lỗi đầu vào: {e}", err=True)
            raise SystemExit(2)
    return decorated_function
