"""Chặn dưới bằng cách ghép file của nhiều thư viện thành một thư viện"""
import logging
from dataclasses import dataclass
from fractions import Fraction

import allocation
import model
import tradeoff as tr
import utils
from errors import InputError

logger = logging.getLogger(__name__)

STATUS_TIGHT = 'tight'
STATUS_OPEN = 'open'
KIND_EXACT = 'exact'
KIND_CUTSET = 'cutset'


@dataclass(frozen=True)
class ConcatenatedLibrary:
    """Thư viện ghép (1, β_[N_L], N_L)

    permutation[j] là chỉ số gốc (từ 1) của thư viện đứng thứ j+1 sau khi sắp xếp N tăng dần.
    """
    num_files: int
    betas: tuple
    source_config: model.NetworkConfig
    permutation: tuple

    @property
    def scale(self):
        """Σα N / N_L: đổi β sang đơn vị F của mạng gốc"""
        return model.total_content(self.source_config) / self.num_files

    @property
    def file_sizes(self):
        """Kích thước file ghép theo đơn vị F của mạng gốc: Σ_{i ≥ f(n)} α^(i)"""
        return tuple(beta * self.scale for beta in self.betas)

    def to_dict(self):
        return {
            'num_files': self.num_files,
            'betas': [utils.format_rational(b) for b in self.betas],
            'file_sizes': [utils.format_rational(s) for s in self.file_sizes],
            'permutation': list(self.permutation),
        }


@dataclass(frozen=True)
class GapReport:
    achievable: Fraction
    converse: Fraction
    converse_kind: str

    @property
    def gap(self):
        return self.achievable - self.converse

    @property
    def status(self):
        return STATUS_TIGHT if self.gap == 0 else STATUS_OPEN

    def to_dict(self):
        return {
            'achievable': utils.format_rational(self.achievable),
            'converse': utils.format_rational(self.converse),
            'gap': utils.format_rational(self.gap),
            'status': self.status,
            'converse_kind': self.converse_kind,
        }


def sort_by_file_count(network):
    """Sắp xếp thư viện theo N tăng dần (ổn định), trả về cấu hình mới và hoán vị"""
    order = sorted(range(network.num_libraries), key=lambda j: network.libraries[j].num_files)
    sorted_network = network.with_libraries(network.libraries[j] for j in order)
    return sorted_network, tuple(j + 1 for j in order)


def subfile_level(network, n):
    """f(n): chỉ số j nhỏ nhất với n ≤ N_j"""
    counts = network.file_counts
    if any(a > b for a, b in zip(counts, counts[1:])):
        raise InputError(f"Cấu hình chưa sắp xếp theo N tăng dần: {list(counts)}")
    if not 1 <= n <= counts[-1]:
        raise InputError(f"n = {n} ngoài [1, {counts[-1]}]")
    return next(j for j, count in enumerate(counts, start=1) if n <= count)


def concatenate(network):
    """β_n = (Σ_{i=f(n)}^L α^(i)) / (Σ_ℓ α^(ℓ) N_ℓ) · N_L"""
    model.require_valid(network)
    sorted_network, permutation = sort_by_file_count(network)
    largest = sorted_network.file_counts[-1]
    content = model.total_content(sorted_network)
    alphas = sorted_network.alphas
    betas = []
    for n in range(1, largest + 1):
        level = subfile_level(sorted_network, n)
        betas.append(sum(alphas[level - 1:], Fraction(0)) / content * largest)
    return ConcatenatedLibrary(largest, tuple(betas), network, permutation)


def concatenated_cutset_bound(library, num_users):
    """Cut-set trên các file ghép: max_{s,b} (tổng s·b file lớn nhất − s·M)/b"""
    sizes = sorted(library.file_sizes, reverse=True)
    prefix = [Fraction(0)]
    for size in sizes:
        prefix.append(prefix[-1] + size)
    n_files = library.num_files

    def bound(memory):
        memory = Fraction(memory)
        best = Fraction(0)
        for s in range(1, min(n_files, num_users) + 1):
            for b in range(1, n_files // s + 1):
                best = max(best, (prefix[s * b] - s * memory) / b)
        return best

    return bound


def converse_bound(network, single_library_bound):
    """Chặn dưới của R*(L, M, ...) qua thư viện ghép"""
    return Fraction(single_library_bound(network.cache_size))


def _shared_exact_tradeoff(network, tradeoffs):
    """Đường cong chính xác dùng chung khi mọi N_ℓ bằng nhau, ngược lại None"""
    if len(set(network.file_counts)) != 1:
        return None
    base = tradeoffs[0]
    for t in tradeoffs:
        if not t.exact or (t.breakpoints, t.slopes) != (base.breakpoints, base.slopes):
            return None
    return base


def conjecture_gap(network, tradeoffs):
    """So sánh rate memory-sharing tối ưu với chặn dưới tốt nhất hiện có"""
    trace = allocation.greedy_allocate(network, tradeoffs)
    library = concatenate(network)
    cutset = converse_bound(network, concatenated_cutset_bound(library, network.num_users))
    shared = _shared_exact_tradeoff(network, tradeoffs)
    if shared is not None:
        exact = converse_bound(network, lambda m: tr.evaluate(shared, m))
        if exact >= cutset:
            return GapReport(trace.rate, exact, KIND_EXACT)
    report = GapReport(trace.rate, cutset, KIND_CUTSET)
    if report.status == STATUS_OPEN:
        logger.info(f"Khoảng cách chưa đóng: {utils.format_rational(report.gap)}")
    return report
