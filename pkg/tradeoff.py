"""Đường cong memory-rate tuyến tính từng đoạn cho mạng một thư viện"""
import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction

import utils
from errors import InputError, TradeoffError

logger = logging.getLogger(__name__)

KIND_SCHEME = 'scheme'
KIND_EXACT_2X2 = 'exact2x2'
KIND_AUTO = 'auto'
KINDS = (KIND_AUTO, KIND_SCHEME, KIND_EXACT_2X2)

LABEL_EXACT = 'exact'
LABEL_SCHEME = 'scheme'


@dataclass(frozen=True)
class CornerPoint:
    memory: Fraction
    rate: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'memory', Fraction(self.memory))
        object.__setattr__(self, 'rate', Fraction(self.rate))


@dataclass(frozen=True)
class PiecewiseLinearTradeoff:
    """R*(1, M, 1, N) = ζ_i − γ_i·M trên đoạn θ_i ≤ M < θ_{i+1}

    γ lưu dưới dạng độ lớn dương. Quy ước biên: γ_{-1} = ∞ (left_slope trả về None),
    γ_r = 0 (right_slope), θ_{r+1} = ∞.
    """
    num_files: int
    breakpoints: tuple
    slopes: tuple
    intercepts: tuple
    label: str = LABEL_SCHEME

    def __post_init__(self):
        object.__setattr__(self, 'breakpoints', tuple(Fraction(x) for x in self.breakpoints))
        object.__setattr__(self, 'slopes', tuple(Fraction(x) for x in self.slopes))
        object.__setattr__(self, 'intercepts', tuple(Fraction(x) for x in self.intercepts))
        violations = self.violations()
        if violations:
            raise TradeoffError("Đường cong không hợp lệ: " + "; ".join(violations))

    def violations(self):
        theta, gamma, zeta = self.breakpoints, self.slopes, self.intercepts
        n = self.num_files
        if n < 1:
            return [f"num_files = {n} < 1"]
        r = len(gamma)
        if r < 1 or len(theta) != r + 1 or len(zeta) != r:
            return [f"số đoạn không khớp: {len(theta)} điểm gãy, {r} hệ số góc, {len(zeta)} hệ số chặn"]
        found = []
        if theta[0] != 0:
            found.append(f"θ_0 = {utils.format_rational(theta[0])} ≠ 0")
        if theta[-1] != n:
            found.append(f"θ_r = {utils.format_rational(theta[-1])} ≠ N = {n}")
        if any(a >= b for a, b in zip(theta, theta[1:])):
            found.append("điểm gãy không tăng ngặt")
        if any(g <= 0 for g in gamma):
            found.append("hệ số góc phải dương")
        if any(a <= b for a, b in zip(gamma, gamma[1:])):
            found.append("vi phạm tính lồi: γ không giảm ngặt")
        for i in range(1, r):
            if zeta[i - 1] - gamma[i - 1] * theta[i] != zeta[i] - gamma[i] * theta[i]:
                found.append(f"gián đoạn tại θ_{i} = {utils.format_rational(theta[i])}")
        if zeta[-1] - gamma[-1] * n != 0:
            found.append("rate tại M = N khác 0")
        if zeta[0] > n:
            found.append(f"ζ_0 = {utils.format_rational(zeta[0])} > N")
        return found

    @property
    def num_segments(self):
        return len(self.slopes)

    @property
    def exact(self):
        return self.label == LABEL_EXACT

    def right_slope(self, index):
        """γ_i, bằng 0 khi i ≥ r"""
        if index >= self.num_segments:
            return Fraction(0)
        return self.slopes[index]

    def left_slope(self, index):
        """γ_{i−1}, None nghĩa là vô cùng (i = 0)"""
        if index <= 0:
            return None
        return self.slopes[index - 1]

    def segment_index(self, memory):
        """Chỉ số i với θ_i ≤ memory < θ_{i+1}; bằng r khi memory ≥ N"""
        return bisect.bisect_right(self.breakpoints, memory) - 1

    def corner_points(self):
        return [CornerPoint(theta, evaluate(self, theta)) for theta in self.breakpoints]

    @classmethod
    def from_corners(cls, points, num_files, label=LABEL_SCHEME):
        """Dựng đường cong từ các điểm gãy (phải là các góc thực sự)"""
        points = sorted((CornerPoint(p.memory, p.rate) for p in points), key=lambda p: p.memory)
        if len(points) < 2:
            raise TradeoffError("Cần ít nhất 2 điểm góc")
        breakpoints = [p.memory for p in points]
        slopes, intercepts = [], []
        for left, right in zip(points, points[1:]):
            if right.memory == left.memory:
                raise TradeoffError(f"Trùng memory {utils.format_rational(left.memory)}")
            gamma = (left.rate - right.rate) / (right.memory - left.memory)
            slopes.append(gamma)
            intercepts.append(left.rate + gamma * left.memory)
        return cls(num_files, tuple(breakpoints), tuple(slopes), tuple(intercepts), label)


def evaluate(tradeoff, memory):
    """Giá trị R*(1, memory, 1, N); bằng 0 khi memory ≥ N"""
    memory = Fraction(memory)
    if memory < 0:
        raise InputError(f"memory = {utils.format_rational(memory)} < 0")
    if memory >= tradeoff.num_files:
        return Fraction(0)
    i = tradeoff.segment_index(memory)
    return tradeoff.intercepts[i] - tradeoff.slopes[i] * memory


def _cross(o, a, b):
    return (a.memory - o.memory) * (b.rate - o.rate) - (a.rate - o.rate) * (b.memory - o.memory)


def lower_convex_envelope(points, num_files, label=LABEL_SCHEME):
    """Bao lồi dưới của tập điểm góc (M, R)"""
    points = [CornerPoint(p.memory, p.rate) for p in points]
    if len(points) < 2:
        raise TradeoffError("Cần ít nhất 2 điểm")
    memories = [p.memory for p in points]
    if len(set(memories)) != len(memories):
        raise TradeoffError("Các điểm có memory trùng nhau")
    if not any(p.memory == 0 for p in points):
        raise TradeoffError("Thiếu điểm neo tại memory = 0")
    if not any(p.memory == num_files and p.rate == 0 for p in points):
        raise TradeoffError(f"Thiếu điểm neo ({num_files}, 0)")
    for p in points:
        if not 0 <= p.memory <= num_files:
            raise TradeoffError(f"memory {utils.format_rational(p.memory)} ngoài [0, {num_files}]")
        if p.rate < 0:
            raise TradeoffError(f"rate {utils.format_rational(p.rate)} < 0")

    # monotone chain, bỏ cả điểm thẳng hàng
    hull = []
    for p in sorted(points, key=lambda q: q.memory):
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return PiecewiseLinearTradeoff.from_corners(hull, num_files, label)


def cut_set_bound(num_files, num_users, memory):
    """Chặn dưới cut-set: max_s (s − s·M/⌊N/s⌋)"""
    memory = Fraction(memory)
    if not 0 <= memory <= num_files:
        raise InputError(f"memory = {utils.format_rational(memory)} ngoài [0, {num_files}]")
    return max(s - s * memory / (num_files // s) for s in range(1, min(num_files, num_users) + 1))


def certify_exact(tradeoff, num_users):
    """True khi cut-set trùng đường cong tại mọi điểm gãy và trung điểm mỗi đoạn"""
    theta = tradeoff.breakpoints
    points = list(theta) + [(a + b) / 2 for a, b in zip(theta, theta[1:])]
    return all(
        cut_set_bound(tradeoff.num_files, num_users, m) == evaluate(tradeoff, m) for m in points
    )


def build_centralized_scheme_tradeoff(num_files, num_users):
    """Bao lồi các điểm (0, min(N,K)) và (tN/K, (K−t)/(1+t)), t = 1..K"""
    if num_files < 1 or num_users < 1:
        raise InputError(f"Cần N ≥ 1 và K ≥ 1, nhận N = {num_files}, K = {num_users}")
    points = [CornerPoint(0, min(num_files, num_users))]
    points += [
        CornerPoint(Fraction(t * num_files, num_users), Fraction(num_users - t, 1 + t))
        for t in range(1, num_users + 1)
    ]
    tradeoff = lower_convex_envelope(points, num_files)
    if certify_exact(tradeoff, num_users):
        logger.debug(f"Sơ đồ N = {num_files}, K = {num_users} trùng cut-set, gán nhãn exact")
        return PiecewiseLinearTradeoff(tradeoff.num_files, tradeoff.breakpoints, tradeoff.slopes,
                                       tradeoff.intercepts, LABEL_EXACT)
    return tradeoff


def build_exact_two_by_two():
    """Đường cong chính xác cho N = K = 2: (0,2), (1/2,1), (1,1/2), (2,0)"""
    corners = [
        CornerPoint(0, 2),
        CornerPoint(Fraction(1, 2), 1),
        CornerPoint(1, Fraction(1, 2)),
        CornerPoint(2, 0),
    ]
    return PiecewiseLinearTradeoff.from_corners(corners, 2, LABEL_EXACT)


def resolve_tradeoff(kind, num_files, num_users):
    """Chọn đường cong theo loại: auto, scheme hoặc exact2x2"""
    if kind == KIND_EXACT_2X2:
        if (num_files, num_users) != (2, 2):
            raise InputError(f"exact2x2 chỉ dùng cho N = K = 2, nhận N = {num_files}, K = {num_users}")
        return build_exact_two_by_two()
    if kind == KIND_SCHEME:
        return build_centralized_scheme_tradeoff(num_files, num_users)
    if kind == KIND_AUTO:
        if (num_files, num_users) == (2, 2):
            return build_exact_two_by_two()
        return build_centralized_scheme_tradeoff(num_files, num_users)
    raise InputError(f"Loại đường cong không hợp lệ: {kind}")


def sample_tradeoff(tradeoff, num_samples):
    """Lưới đánh giá đều trên [0, N], luôn chứa mọi điểm gãy"""
    if num_samples < 1:
        raise InputError(f"num_samples = {num_samples} < 1")
    grid = {Fraction(tradeoff.num_files * i, num_samples) for i in range(num_samples + 1)}
    grid.update(tradeoff.breakpoints)
    return [CornerPoint(m, evaluate(tradeoff, m)) for m in sorted(grid)]


def tradeoff_to_json(tradeoff):
    return [[utils.format_rational(p.memory), utils.format_rational(p.rate)] for p in tradeoff.corner_points()]


def tradeoff_from_json(data, num_files, label=LABEL_SCHEME):
    """Dựng lại dạng đoạn từ danh sách điểm góc và kiểm tra lại bất biến"""
    try:
        corners = [
            CornerPoint(utils.parse_rational(m, 'memory'), utils.parse_rational(r, 'rate'))
            for m, r in data
        ]
    except (TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise TradeoffError(f"Danh sách điểm góc sai định dạng: {e}") from None
    return PiecewiseLinearTradeoff.from_corners(corners, num_files, label)
