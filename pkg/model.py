"""Kiểu dữ liệu cho mạng coded caching nhiều thư viện"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import config
import utils
from errors import EnumerationLimitError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LibrarySpec:
    """Một thư viện: N_ℓ file, mỗi file có kích thước α^(ℓ)·F"""
    num_files: int
    alpha: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'alpha', Fraction(self.alpha))

    @property
    def content(self):
        return self.alpha * self.num_files


@dataclass(frozen=True)
class NetworkConfig:
    libraries: tuple
    num_users: int
    cache_size: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'libraries', tuple(self.libraries))
        object.__setattr__(self, 'cache_size', Fraction(self.cache_size))

    @property
    def num_libraries(self):
        return len(self.libraries)

    @property
    def alphas(self):
        return tuple(lib.alpha for lib in self.libraries)

    @property
    def file_counts(self):
        return tuple(lib.num_files for lib in self.libraries)

    def with_cache_size(self, cache_size):
        return NetworkConfig(self.libraries, self.num_users, Fraction(cache_size))

    def with_libraries(self, libraries):
        return NetworkConfig(tuple(libraries), self.num_users, self.cache_size)


@dataclass(frozen=True)
class DemandVector:
    """Ma trận L×K, phần tử (ℓ,k) là file mà user k yêu cầu từ thư viện ℓ (đánh số từ 1)"""
    demands: tuple

    def __post_init__(self):
        object.__setattr__(self, 'demands', tuple(tuple(row) for row in self.demands))

    def request(self, library, user):
        """Yêu cầu d^(ℓ)_k, library và user đánh số từ 1"""
        return self.demands[library - 1][user - 1]

    def row(self, library):
        return self.demands[library - 1]

    def to_list(self):
        return [list(row) for row in self.demands]


def make_config(alphas, file_counts, num_users, cache_size):
    """Tạo NetworkConfig từ danh sách α và N"""
    libraries = tuple(LibrarySpec(n, Fraction(a)) for a, n in zip(alphas, file_counts))
    return NetworkConfig(libraries, num_users, Fraction(cache_size))


def total_content(network):
    """Tổng nội dung chuẩn hóa Σ_ℓ α^(ℓ)·N_ℓ"""
    return sum((lib.content for lib in network.libraries), Fraction(0))


def validate(network):
    """Trả về danh sách vi phạm (rỗng khi hợp lệ)"""
    violations = []
    if not network.libraries:
        violations.append("không có thư viện nào (L = 0)")
    for index, lib in enumerate(network.libraries, start=1):
        if not isinstance(lib.num_files, int) or isinstance(lib.num_files, bool) or lib.num_files < 1:
            violations.append(f"thư viện {index}: num_files = {lib.num_files} < 1")
        if lib.alpha <= 0:
            violations.append(f"thư viện {index}: alpha = {utils.format_rational(lib.alpha)} ≤ 0")
    if not isinstance(network.num_users, int) or isinstance(network.num_users, bool) or network.num_users < 1:
        violations.append(f"num_users = {network.num_users} < 1")
    if network.libraries:
        alpha_sum = sum(network.alphas, Fraction(0))
        if alpha_sum != 1:
            violations.append(f"normalization sum = {utils.format_rational(alpha_sum)} ≠ 1")
    if network.cache_size < 0:
        violations.append(f"cache_size = {utils.format_rational(network.cache_size)} < 0")
    elif network.libraries and all(lib.num_files >= 1 for lib in network.libraries):
        content = total_content(network)
        if network.cache_size > content:
            violations.append(
                f"cache_size = {utils.format_rational(network.cache_size)} > "
                f"total content {utils.format_rational(content)}"
            )
    return violations


def require_valid(network):
    violations = validate(network)
    if violations:
        raise InputError("Cấu hình không hợp lệ: " + "; ".join(violations))


def clamp_cache(network):
    """Cắt M về tổng nội dung nếu vượt quá"""
    content = total_content(network)
    if network.cache_size > content:
        logger.warning(
            f"M = {utils.format_rational(network.cache_size)} lớn hơn tổng nội dung "
            f"{utils.format_rational(content)}, cắt về {utils.format_rational(content)}"
        )
        return network.with_cache_size(content)
    return network


def demand_count(network):
    return math.prod(n ** network.num_users for n in network.file_counts)


def enumerate_demands(network, cap=None):
    """Liệt kê mọi DemandVector theo thứ tự từ điển"""
    cap = config.MAX_DEMANDS if cap is None else cap
    count = demand_count(network)
    if count > cap:
        raise EnumerationLimitError("Số demand vector", count, cap)
    k = network.num_users
    ranges = [range(1, n + 1) for n in network.file_counts for _ in range(k)]
    for flat in itertools.product(*ranges):
        yield DemandVector(tuple(flat[i * k:(i + 1) * k] for i in range(network.num_libraries)))


def validate_demand(network, demand):
    if len(demand.demands) != network.num_libraries:
        raise InputError(f"Demand có {len(demand.demands)} hàng, cần {network.num_libraries}")
    for index, (row, lib) in enumerate(zip(demand.demands, network.libraries), start=1):
        if len(row) != network.num_users:
            raise InputError(f"Thư viện {index}: demand có {len(row)} user, cần {network.num_users}")
        for value in row:
            if not 1 <= value <= lib.num_files:
                raise InputError(f"Thư viện {index}: file {value} ngoài [1, {lib.num_files}]")


def config_to_dict(network):
    return {
        'libraries': [
            {'num_files': lib.num_files, 'alpha': utils.format_rational(lib.alpha)}
            for lib in network.libraries
        ],
        'num_users': network.num_users,
        'cache_size': utils.format_rational(network.cache_size),
    }


def _parse_count(value, name):
    """Số nguyên trong JSON; float và bool bị từ chối thay vì cắt"""
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{name}: cần số nguyên, nhận {value!r}")
    return value


def config_from_dict(data, clamp=True):
    """Đọc NetworkConfig từ JSON; M vượt tổng nội dung được cắt kèm cảnh báo"""
    try:
        libraries = tuple(
            LibrarySpec(_parse_count(item['num_files'], 'num_files'), utils.parse_rational(item['alpha'], 'alpha'))
            for item in data['libraries']
        )
        network = NetworkConfig(
            libraries,
            _parse_count(data['num_users'], 'num_users'),
            utils.parse_rational(data['cache_size'], 'cache_size'),
        )
    except InputError:
        raise
    except KeyError as e:
        raise InputError(f"Thiếu trường trong cấu hình: {e}") from None
    except (TypeError, ValueError) as e:
        raise InputError(f"Cấu hình sai kiểu dữ liệu: {e}") from None
    if clamp and network.libraries and network.cache_size >= 0:
        network = clamp_cache(network)
    return network


def load_config(path, clamp=True):
    """Đọc cấu hình từ file JSON và kiểm tra hợp lệ"""
    network = config_from_dict(utils.load_json(path), clamp=clamp)
    require_valid(network)
    return network


def save_config(path, network):
    utils.save_json(path, config_to_dict(network))
