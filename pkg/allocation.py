"""Phân bổ bộ nhớ cache giữa các thư viện (memory-sharing)"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

import config
import model
import tradeoff as tr
import utils
from errors import EnumerationLimitError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Allocation:
    """Phần cache M_ℓ dành cho từng thư viện"""
    per_library: tuple

    def __post_init__(self):
        object.__setattr__(self, 'per_library', tuple(Fraction(m) for m in self.per_library))

    @property
    def total(self):
        return sum(self.per_library, Fraction(0))

    def to_list(self):
        return [utils.format_rational(m) for m in self.per_library]


@dataclass(frozen=True)
class AllocationStep:
    library: int
    segment_index: int
    delta: Fraction
    allocated: Fraction

    def to_dict(self):
        return {
            'library': self.library,
            'segment_index': self.segment_index,
            'delta': utils.format_rational(self.delta),
            'allocated': utils.format_rational(self.allocated),
        }


@dataclass(frozen=True)
class AllocationTrace:
    steps: tuple
    final: Allocation
    rate: Fraction
    tradeoff_labels: tuple

    def to_dict(self):
        return {
            'steps': [step.to_dict() for step in self.steps],
            'final': self.final.to_list(),
            'rate': utils.format_rational(self.rate),
            'tradeoff_labels': list(self.tradeoff_labels),
        }


@dataclass(frozen=True)
class CornerStructure:
    """Cấu trúc nghiệm: chỉ số góc i_ℓ, thư viện lệch góc ℓ̂ và phần dư M_rem"""
    indices: tuple
    partial_library: int
    remainder: Fraction
    partial_count: int


@dataclass(frozen=True)
class SweepSegment:
    start: Fraction
    end: Fraction
    intercept: Fraction
    slope: Fraction

    def to_dict(self):
        return {
            'start': utils.format_rational(self.start),
            'end': utils.format_rational(self.end),
            'intercept': utils.format_rational(self.intercept),
            'slope': utils.format_rational(self.slope),
        }


@dataclass(frozen=True)
class SweepResult:
    points: tuple
    breakpoints: tuple
    segments: tuple
    minimizer: Fraction
    minimum: Fraction

    def to_dict(self):
        return {
            'breakpoints': [utils.format_rational(x) for x in self.breakpoints],
            'segments': [segment.to_dict() for segment in self.segments],
            'minimizer': utils.format_rational(self.minimizer),
            'minimum': utils.format_rational(self.minimum),
            'num_points': len(self.points),
        }


@dataclass(frozen=True)
class EqualNCertificate:
    single_library_rate: Fraction
    proportional_rate: Fraction
    greedy_rate: Fraction
    tradeoff_label: str

    @property
    def holds(self):
        return self.single_library_rate == self.proportional_rate == self.greedy_rate

    def to_dict(self):
        return {
            'single_library_rate': utils.format_rational(self.single_library_rate),
            'proportional_rate': utils.format_rational(self.proportional_rate),
            'greedy_rate': utils.format_rational(self.greedy_rate),
            'tradeoff_label': self.tradeoff_label,
            'holds': self.holds,
        }


def check_tradeoffs(network, tradeoffs):
    if len(tradeoffs) != network.num_libraries:
        raise InputError(f"Cần {network.num_libraries} đường cong, nhận {len(tradeoffs)}")
    for index, (lib, t) in enumerate(zip(network.libraries, tradeoffs), start=1):
        if t.num_files != lib.num_files:
            raise InputError(f"Thư viện {index}: đường cong cho N = {t.num_files}, cần N = {lib.num_files}")


def tradeoffs_for(network, kinds):
    """Dựng đường cong cho từng thư viện; một loại dùng chung hoặc mỗi thư viện một loại"""
    if isinstance(kinds, str):
        kinds = [kinds]
    kinds = list(kinds)
    if len(kinds) == 1:
        kinds = kinds * network.num_libraries
    if len(kinds) != network.num_libraries:
        raise InputError(f"Cần 1 hoặc {network.num_libraries} loại đường cong, nhận {len(kinds)}")
    return [tr.resolve_tradeoff(kind, lib.num_files, network.num_users)
            for kind, lib in zip(kinds, network.libraries)]


def memory_sharing_rate(network, alloc, tradeoffs):
    """Σ_ℓ α^(ℓ)·R*(1, M_ℓ/α^(ℓ), 1, N_ℓ)"""
    check_tradeoffs(network, tradeoffs)
    if len(alloc.per_library) != network.num_libraries:
        raise InputError(f"Phân bổ có {len(alloc.per_library)} phần, cần {network.num_libraries}")
    if alloc.total != network.cache_size:
        raise InputError(
            f"Tổng phân bổ {utils.format_rational(alloc.total)} ≠ M = {utils.format_rational(network.cache_size)}"
        )
    rate = Fraction(0)
    for index, (lib, share, t) in enumerate(zip(network.libraries, alloc.per_library, tradeoffs), start=1):
        if share < 0:
            raise InputError(f"Thư viện {index}: M_ℓ = {utils.format_rational(share)} < 0")
        rate += lib.alpha * tr.evaluate(t, share / lib.alpha)
    return rate


def greedy_allocate(network, tradeoffs):
    """Cấp phát tham lam: mỗi bước chọn thư viện có right-slope γ_i lớn nhất

    Đạo hàm của α·R*(M_ℓ/α) theo M_ℓ là −γ_i, nên khóa so sánh là γ_i (không chia α);
    δ đo bằng đơn vị bộ nhớ: α·(θ_{i+1} − θ_i).
    """
    model.require_valid(network)
    check_tradeoffs(network, tradeoffs)
    size = network.num_libraries
    segments = [0] * size
    shares = [Fraction(0)] * size
    allocated = Fraction(0)
    steps = []
    while allocated < network.cache_size:
        best, best_slope = None, Fraction(0)
        for index in range(size):
            slope = tradeoffs[index].right_slope(segments[index])
            # so sánh chặt: hòa thì giữ thư viện có chỉ số nhỏ
            if slope > best_slope:
                best, best_slope = index, slope
        if best is None:
            raise InputError("M vượt quá tổng nội dung, không còn thư viện nào để cấp phát")
        t = tradeoffs[best]
        i = segments[best]
        alpha = network.libraries[best].alpha
        width = alpha * (t.breakpoints[i + 1] - t.breakpoints[i])
        delta = min(width, network.cache_size - allocated)
        shares[best] += delta
        allocated += delta
        steps.append(AllocationStep(best + 1, i, delta, allocated))
        logger.debug(f"Bước {len(steps)}: thư viện {best + 1}, đoạn {i}, δ = {utils.format_rational(delta)}")
        if delta == width:
            segments[best] += 1
    final = Allocation(tuple(shares))
    rate = memory_sharing_rate(network, final, tradeoffs)
    return AllocationTrace(tuple(steps), final, rate, tuple(t.label for t in tradeoffs))


def corner_structure(network, tradeoffs, alloc):
    """Tách phân bổ thành các góc θ_{i_ℓ}·α^(ℓ) cộng phần dư của thư viện ℓ̂"""
    check_tradeoffs(network, tradeoffs)
    indices = []
    partial = []
    remainder = Fraction(0)
    for index, (lib, share, t) in enumerate(zip(network.libraries, alloc.per_library, tradeoffs)):
        local = share / lib.alpha
        i = min(t.segment_index(local), t.num_segments)
        indices.append(i)
        rem = share - t.breakpoints[i] * lib.alpha
        if rem != 0:
            partial.append(index)
            remainder = rem
    if partial:
        hat = partial[0]
    else:
        # mọi thư viện nằm ở góc: ℓ̂ là thư viện có right-slope lớn nhất
        right = [t.right_slope(i) for t, i in zip(tradeoffs, indices)]
        hat = max(range(len(right)), key=lambda j: (right[j], -j))
    return CornerStructure(tuple(indices), hat + 1, remainder, len(partial))


def structure_violations(network, tradeoffs, alloc):
    """Các điều kiện cấu trúc nghiệm tối ưu bị vi phạm (rỗng khi thỏa)"""
    structure = corner_structure(network, tradeoffs, alloc)
    found = []
    if structure.partial_count > 1:
        found.append(f"{structure.partial_count} thư viện nằm giữa hai góc")
    size = network.num_libraries
    right = [t.right_slope(i) for t, i in zip(tradeoffs, structure.indices)]
    left = [t.left_slope(i) for t, i in zip(tradeoffs, structure.indices)]
    for a, b in itertools.product(range(size), repeat=2):
        if left[b] is not None and right[a] > left[b]:
            found.append(f"γ_i của thư viện {a + 1} > γ_(i−1) của thư viện {b + 1}")
    hat = structure.partial_library - 1
    for a in range(size):
        if right[a] > right[hat]:
            found.append(f"γ_i của thư viện {a + 1} > γ_i của ℓ̂ = {hat + 1}")
    return found


def _grid_allocations(network, step):
    """Phân bổ trên lưới: L−1 thư viện đầu là bội của step, thư viện cuối nhận phần còn lại"""
    units = int(network.cache_size // step)
    size = network.num_libraries

    def compose(prefix, remaining, depth):
        if depth == size - 1:
            yield prefix
            return
        for u in range(remaining + 1):
            yield from compose(prefix + (u,), remaining - u, depth + 1)

    for counts in compose((), units, 0):
        shares = [step * u for u in counts]
        last = network.cache_size - sum(shares, Fraction(0))
        yield tuple(shares) + (last,)


def _corner_allocations(network, tradeoffs):
    """Mọi phân bổ mà L−1 thư viện ở góc, thư viện còn lại bù cho đủ M"""
    size = network.num_libraries
    corners = [[theta * lib.alpha for theta in t.breakpoints] for t, lib in zip(tradeoffs, network.libraries)]
    for free in range(size):
        others = [corners[j] for j in range(size) if j != free]
        for choice in itertools.product(*others):
            rest = network.cache_size - sum(choice, Fraction(0))
            shares = list(choice)
            shares.insert(free, rest)
            yield tuple(shares)


def brute_force_allocate(network, tradeoffs, grid_step, cap=None):
    """Tìm vét cạn trên lưới đơn hình cộng các phân bổ góc"""
    cap = config.MAX_GRID_POINTS if cap is None else cap
    model.require_valid(network)
    check_tradeoffs(network, tradeoffs)
    grid_step = Fraction(grid_step)
    if grid_step <= 0:
        raise InputError(f"grid_step = {utils.format_rational(grid_step)} ≤ 0")
    size = network.num_libraries
    units = int(network.cache_size // grid_step)
    estimate = size * (units + 1) ** (size - 1)
    for t in tradeoffs:
        estimate += size * len(t.breakpoints) ** (size - 1)
    if estimate > cap:
        raise EnumerationLimitError("Số điểm lưới", estimate, cap)

    limits = [lib.content for lib in network.libraries]
    best = None
    evaluated = 0
    for shares in itertools.chain(_grid_allocations(network, grid_step), _corner_allocations(network, tradeoffs)):
        if any(s < 0 or s > limit for s, limit in zip(shares, limits)):
            continue
        evaluated += 1
        rate = memory_sharing_rate(network, Allocation(shares), tradeoffs)
        if best is None or (rate, shares) < best:
            best = (rate, shares)
    logger.debug(f"Oracle đã đánh giá {evaluated} phân bổ")
    return Allocation(best[1]), best[0]


def proportional_allocation(network):
    """M_ℓ = α^(ℓ)·M"""
    return Allocation(tuple(lib.alpha * network.cache_size for lib in network.libraries))


def _sweep_rate(network, tradeoffs, lam):
    first, second = network.libraries
    share = lam * network.cache_size
    return (first.alpha * tr.evaluate(tradeoffs[0], share / first.alpha)
            + second.alpha * tr.evaluate(tradeoffs[1], (network.cache_size - share) / second.alpha))


def lambda_sweep(network, tradeoffs, num_samples):
    """R(λ) với phân bổ (λM, (1−λ)M) cho mạng hai thư viện"""
    if network.num_libraries != 2:
        raise InputError(f"lambda_sweep cần L = 2, nhận L = {network.num_libraries}")
    if num_samples < 1:
        raise InputError(f"num_samples = {num_samples} < 1")
    check_tradeoffs(network, tradeoffs)
    m = network.cache_size
    candidates = {Fraction(0), Fraction(1)}
    if m > 0:
        first, second = network.libraries
        for theta in tradeoffs[0].breakpoints:
            candidates.add(theta * first.alpha / m)
        for theta in tradeoffs[1].breakpoints:
            candidates.add(1 - theta * second.alpha / m)
    candidates = sorted(x for x in candidates if 0 <= x <= 1)

    segments = []
    for a, b in zip(candidates, candidates[1:]):
        ra, rb = _sweep_rate(network, tradeoffs, a), _sweep_rate(network, tradeoffs, b)
        slope = (rb - ra) / (b - a)
        intercept = ra - slope * a
        if segments and segments[-1].slope == slope:
            prev = segments[-1]
            segments[-1] = SweepSegment(prev.start, b, prev.intercept, prev.slope)
        else:
            segments.append(SweepSegment(a, b, intercept, slope))
    breakpoints = tuple(segment.start for segment in segments[1:])

    grid = {Fraction(i, num_samples) for i in range(num_samples + 1)}
    grid.update(candidates)
    points = tuple((lam, _sweep_rate(network, tradeoffs, lam)) for lam in sorted(grid))
    minimum, minimizer = min((_sweep_rate(network, tradeoffs, lam), lam) for lam in candidates)
    return SweepResult(points, breakpoints, tuple(segments), minimizer, minimum)


def certify_equal_n_optimality(network, tradeoffs):
    """Kiểm chứng Σ α·R*(1, M, 1, N) = R*(1, M, 1, N) = rate tham lam khi mọi N_ℓ bằng nhau"""
    model.require_valid(network)
    check_tradeoffs(network, tradeoffs)
    if len(set(network.file_counts)) != 1:
        raise InputError(f"Các thư viện có số file khác nhau: {list(network.file_counts)}")
    base = tradeoffs[0]
    for t in tradeoffs[1:]:
        if (t.breakpoints, t.slopes, t.intercepts) != (base.breakpoints, base.slopes, base.intercepts):
            raise InputError("Các thư viện dùng đường cong khác nhau")
    single = tr.evaluate(base, network.cache_size)
    proportional = memory_sharing_rate(network, proportional_allocation(network), tradeoffs)
    greedy = greedy_allocate(network, tradeoffs).rate
    return EqualNCertificate(single, proportional, greedy, base.label)
