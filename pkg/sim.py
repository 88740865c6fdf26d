"""Mô phỏng chính xác từng bit: đặt nội dung, phát quảng bá XOR và giải mã

Mỗi thư viện chạy sơ đồ coded caching tập trung độc lập trên phân đoạn cache của mình;
cache của user và bản tin quảng bá là phép ghép các phân đoạn theo thư viện.
"""
import itertools
import logging
import math
import struct
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

import config
import converse
import model
import tradeoff as tr
import utils
from errors import DivisibilityError, EnumerationLimitError, InputError, VerificationError

logger = logging.getLogger(__name__)

EMPTY = np.zeros(0, dtype=np.uint8)


@dataclass(frozen=True)
class PlacementPart:
    """Một phần của mỗi file, chia thành C(K,t) subfile theo các tập t user"""
    t: int
    weight: Fraction
    offset: int
    file_bits: int
    subfile_bits: int


@dataclass(frozen=True)
class LibraryPlan:
    library: int
    num_files: int
    num_users: int
    file_bits: int
    parts: tuple

    def cache_bits(self):
        return sum(
            self.num_files * math.comb(self.num_users - 1, part.t - 1) * part.subfile_bits
            for part in self.parts if part.t > 0
        )


@dataclass(frozen=True, eq=False)
class FileStore:
    """files[ℓ][n] là mảng bit (0/1) của W^(ℓ)_n, đánh số từ 0 bên trong"""
    files: tuple
    base_size: int
    seed: int

    def file(self, library, n):
        return self.files[library - 1][n - 1]

    def replace_file(self, library, n, bits):
        files = [list(row) for row in self.files]
        files[library - 1][n - 1] = np.asarray(bits, dtype=np.uint8)
        return FileStore(tuple(tuple(row) for row in files), self.base_size, self.seed)


@dataclass(frozen=True, eq=False)
class PlacementState:
    """caches[k][ℓ] là phân đoạn ℓ trong cache Z_k"""
    caches: tuple
    plans: tuple
    base_size: int

    def segment(self, user, library):
        return self.caches[user - 1][library - 1]

    def cache_bits(self, user):
        return sum(segment.size for segment in self.caches[user - 1])


@dataclass(frozen=True, eq=False)
class DeliveryTranscript:
    demand: model.DemandVector
    payloads: tuple
    total_bits: int

    def payload(self, library):
        return self.payloads[library - 1]


@dataclass(frozen=True)
class VerificationReport:
    demands_checked: int
    base_size: int
    seed: int
    max_transcript_bits: int
    measured_rate: Fraction
    formula_rate: Fraction
    library_bits: tuple
    cache_bits: int
    errors: int = 0

    def to_dict(self):
        return {
            'demands_checked': self.demands_checked,
            'errors': self.errors,
            'base_size': self.base_size,
            'seed': self.seed,
            'max_transcript_bits': self.max_transcript_bits,
            'measured_rate': utils.format_rational(self.measured_rate),
            'formula_rate': utils.format_rational(self.formula_rate),
            'formula_tradeoff': tr.LABEL_SCHEME,
            'library_bits': list(self.library_bits),
            'cache_bits': self.cache_bits,
        }


@dataclass(frozen=True)
class ReductionReport:
    demand_prime: tuple
    induced_demand: model.DemandVector
    transcript_bits: int
    cache_bits: int
    recovered_bits: tuple
    discarded: int
    transcript: DeliveryTranscript

    def to_dict(self):
        return {
            'demand_prime': list(self.demand_prime),
            'induced_demand': self.induced_demand.to_list(),
            'transcript_bits': self.transcript_bits,
            'cache_bits': self.cache_bits,
            'recovered_bits': list(self.recovered_bits),
            'discarded': self.discarded,
        }


@dataclass(frozen=True)
class ReductionSummary:
    demands_checked: int
    max_transcript_bits: int
    discarded: int

    def to_dict(self):
        return {
            'demands_checked': self.demands_checked,
            'max_transcript_bits': self.max_transcript_bits,
            'discarded': self.discarded,
        }


def scheme_parts(lib, share, num_users):
    """Các cặp (t, tỉ lệ) để đạt M_ℓ/α bằng memory-sharing giữa hai góc kề nhau"""
    local = Fraction(share) / lib.alpha
    if local < 0 or local > lib.num_files:
        raise InputError(
            f"M_ℓ = {utils.format_rational(share)} ngoài [0, {utils.format_rational(lib.content)}]"
        )
    scheme = tr.build_centralized_scheme_tradeoff(lib.num_files, num_users)
    theta = scheme.breakpoints

    def users_per_subset(memory):
        return int(memory * num_users / lib.num_files)

    if local in theta:
        return [(users_per_subset(local), Fraction(1))]
    i = scheme.segment_index(local)
    weight = (local - theta[i]) / (theta[i + 1] - theta[i])
    return [(users_per_subset(theta[i]), 1 - weight), (users_per_subset(theta[i + 1]), weight)]


def required_base_size(network, alloc):
    """F nhỏ nhất để mọi phần file và subfile có số bit nguyên"""
    base = 1
    for lib, share in zip(network.libraries, alloc.per_library):
        base = math.lcm(base, lib.alpha.denominator)
        for t, weight in scheme_parts(lib, share, network.num_users):
            base = math.lcm(base, (lib.alpha * weight / math.comb(network.num_users, t)).denominator)
    return base


def _require_positive_base(base_size):
    if isinstance(base_size, bool) or not isinstance(base_size, int) or base_size < 1:
        raise InputError(f"F = {base_size!r} phải là số nguyên ≥ 1")


def build_plans(network, alloc, base_size):
    _require_positive_base(base_size)
    required = required_base_size(network, alloc)
    if base_size % required != 0:
        raise DivisibilityError(
            f"F = {base_size} không chia hết cho {required} (bội số cần thiết)", required
        )
    plans = []
    for index, (lib, share) in enumerate(zip(network.libraries, alloc.per_library), start=1):
        file_bits = int(lib.alpha * base_size)
        parts, offset = [], 0
        for t, weight in scheme_parts(lib, share, network.num_users):
            bits = int(lib.alpha * weight * base_size)
            parts.append(PlacementPart(t, weight, offset, bits, bits // math.comb(network.num_users, t)))
            offset += bits
        plans.append(LibraryPlan(index, lib.num_files, network.num_users, file_bits, tuple(parts)))
    return tuple(plans)


def make_file_store(network, base_size, seed=None):
    """Sinh nội dung file giả ngẫu nhiên từ seed"""
    _require_positive_base(base_size)
    seed = config.DEFAULT_SEED if seed is None else seed
    rng = np.random.default_rng(seed)
    files = []
    for index, lib in enumerate(network.libraries, start=1):
        bits = lib.alpha * base_size
        if bits.denominator != 1:
            raise DivisibilityError(
                f"Thư viện {index}: α·F = {utils.format_rational(bits)} không nguyên", lib.alpha.denominator
            )
        files.append(tuple(rng.integers(0, 2, size=int(bits), dtype=np.uint8) for _ in range(lib.num_files)))
    return FileStore(tuple(files), base_size, seed)


def _chunk(bits, part, index):
    start = part.offset + index * part.subfile_bits
    return bits[start:start + part.subfile_bits]


def _concat(blocks):
    return np.concatenate(blocks) if blocks else EMPTY


def place(store, network, alloc):
    """Hàm caching: user k lưu mọi subfile có tập chỉ số chứa k"""
    model.require_valid(network)
    if len(alloc.per_library) != network.num_libraries or alloc.total != network.cache_size:
        raise InputError("Phân bổ không khớp với cấu hình")
    plans = build_plans(network, alloc, store.base_size)
    caches = []
    for k in range(network.num_users):
        segments = []
        for plan in plans:
            blocks = []
            for part in plan.parts:
                subsets = list(itertools.combinations(range(plan.num_users), part.t))
                for n in range(1, plan.num_files + 1):
                    bits = store.file(plan.library, n)
                    blocks.extend(_chunk(bits, part, j) for j, s in enumerate(subsets) if k in s)
            segments.append(_concat(blocks))
        caches.append(tuple(segments))
    return PlacementState(tuple(caches), plans, store.base_size)


def deliver(store, network, placement, demand):
    """Hàm mã hóa: với mỗi tập S gồm t+1 user, phát ⊕_{k∈S} subfile của W_{d_k} chỉ số S∖{k}"""
    model.validate_demand(network, demand)
    payloads = []
    for plan in placement.plans:
        row = demand.row(plan.library)
        blocks = []
        for part in plan.parts:
            if part.t == plan.num_users:
                continue
            if part.t == 0:
                # không có cache: phát mỗi file được yêu cầu một lần
                blocks.extend(_chunk(store.file(plan.library, n), part, 0) for n in sorted(set(row)))
                continue
            index = {s: j for j, s in enumerate(itertools.combinations(range(plan.num_users), part.t))}
            for group in itertools.combinations(range(plan.num_users), part.t + 1):
                block = np.zeros(part.subfile_bits, dtype=np.uint8)
                for k in group:
                    rest = tuple(u for u in group if u != k)
                    np.bitwise_xor(block, _chunk(store.file(plan.library, row[k]), part, index[rest]), out=block)
                blocks.append(block)
        payloads.append(_concat(blocks))
    return DeliveryTranscript(demand, tuple(payloads), sum(p.size for p in payloads))


def decode(placement, transcript, network, user, library):
    """Hàm giải mã của user cho thư viện library (đánh số từ 1), chỉ dùng Z_k và bản tin"""
    plan = placement.plans[library - 1]
    cache = placement.segment(user, library)
    payload = transcript.payload(library)
    row = transcript.demand.row(library)
    k = user - 1
    wanted = row[k]
    pieces = []
    cache_pos = payload_pos = 0
    for part in plan.parts:
        c = part.subfile_bits
        subsets = list(itertools.combinations(range(plan.num_users), part.t))
        own = {s: j for j, s in enumerate(x for x in subsets if k in x)}

        def cached(n, subset, base=cache_pos, own=own, c=c):
            start = base + ((n - 1) * len(own) + own[subset]) * c
            return cache[start:start + c]

        recovered = {s: cached(wanted, s) for s in own}
        if part.t == 0:
            distinct = sorted(set(row))
            start = payload_pos + distinct.index(wanted) * c
            recovered[()] = payload[start:start + c]
            payload_pos += len(distinct) * c
        elif part.t < plan.num_users:
            groups = list(itertools.combinations(range(plan.num_users), part.t + 1))
            for j, group in enumerate(groups):
                if k not in group:
                    continue
                block = payload[payload_pos + j * c:payload_pos + (j + 1) * c].copy()
                for other in group:
                    if other != k:
                        side = tuple(u for u in group if u != other)
                        np.bitwise_xor(block, cached(row[other], side), out=block)
                recovered[tuple(u for u in group if u != k)] = block
            payload_pos += len(groups) * c
        pieces.extend(recovered[s] for s in subsets)
        cache_pos += plan.num_files * len(own) * c
    return _concat(pieces)


def formula_rate(network, alloc):
    """Σ α^(ℓ)·R_ℓ với R_ℓ lấy từ bao lồi của sơ đồ tập trung"""
    rate = Fraction(0)
    for lib, share in zip(network.libraries, alloc.per_library):
        scheme = tr.build_centralized_scheme_tradeoff(lib.num_files, network.num_users)
        rate += lib.alpha * tr.evaluate(scheme, share / lib.alpha)
    return rate


def verify_all(store, network, alloc, cap=None):
    """Giải mã mọi demand vector, mọi user, mọi thư viện và so sánh từng bit"""
    placement = place(store, network, alloc)
    checked = 0
    max_bits = 0
    library_bits = [0] * network.num_libraries
    for demand in model.enumerate_demands(network, cap):
        transcript = deliver(store, network, placement, demand)
        for library in range(1, network.num_libraries + 1):
            for user in range(1, network.num_users + 1):
                decoded = decode(placement, transcript, network, user, library)
                if not np.array_equal(decoded, store.file(library, demand.request(library, user))):
                    witness = {'demand': demand.to_list(), 'user': user, 'library': library}
                    raise VerificationError(f"Giải mã sai tại {witness}", witness)
            library_bits[library - 1] = max(library_bits[library - 1], transcript.payload(library).size)
        max_bits = max(max_bits, transcript.total_bits)
        checked += 1
    report = VerificationReport(
        demands_checked=checked,
        base_size=store.base_size,
        seed=store.seed,
        max_transcript_bits=max_bits,
        measured_rate=Fraction(max_bits, store.base_size),
        formula_rate=formula_rate(network, alloc),
        library_bits=tuple(library_bits),
        cache_bits=max(placement.cache_bits(user) for user in range(1, network.num_users + 1)),
    )
    logger.info(
        f"Đã kiểm {checked} demand, rate đo được {utils.format_rational(report.measured_rate)}, "
        f"công thức {utils.format_rational(report.formula_rate)}"
    )
    return report


def select_base_size(network, alloc, base_size=None, budget=None):
    """Chọn F tự động hoặc kiểm tra F do người dùng đưa vào"""
    budget = config.MAX_BASE_SIZE if budget is None else budget
    required = required_base_size(network, alloc)
    if base_size is None:
        if required > budget:
            raise DivisibilityError(f"F cần là bội của {required}, vượt ngân sách {budget} bit", required)
        logger.info(f"Tự chọn F = {required}")
        return required
    _require_positive_base(base_size)
    if base_size % required != 0:
        raise DivisibilityError(f"F = {base_size} phải là bội của {required}", required)
    return base_size


def run_verification(network, alloc, seed=None, base_size=None, cap=None):
    base_size = select_base_size(network, alloc, base_size)
    store = make_file_store(network, base_size, seed)
    return verify_all(store, network, alloc, cap)


def reduction_demo(network, store, alloc, demand_prime, placement=None):
    """Phục vụ demand d' của thư viện ghép bằng chính các hàm của mạng nhiều thư viện"""
    library = converse.concatenate(network)
    demand_prime = tuple(demand_prime)
    if len(demand_prime) != network.num_users:
        raise InputError(f"d' có {len(demand_prime)} phần tử, cần {network.num_users}")
    if any(not 1 <= d <= library.num_files for d in demand_prime):
        raise InputError(f"d' = {list(demand_prime)} ngoài [1, {library.num_files}]")
    sorted_network, _ = converse.sort_by_file_count(network)
    induced = model.DemandVector(
        tuple(min(d, lib.num_files) for d in demand_prime) for lib in network.libraries
    )
    if placement is None:
        placement = place(store, network, alloc)
    transcript = deliver(store, network, placement, induced)
    recovered_bits = []
    discarded = 0
    for user, n in enumerate(demand_prime, start=1):
        level = converse.subfile_level(sorted_network, n)
        pieces, expected = [], []
        for position, original in enumerate(library.permutation, start=1):
            decoded = decode(placement, transcript, network, user, original)
            if position < level:
                # yêu cầu giả d = min(d', N_ℓ): bỏ kết quả
                discarded += 1
                continue
            pieces.append(decoded)
            expected.append(store.file(original, n))
        if not np.array_equal(_concat(pieces), _concat(expected)):
            witness = {'demand_prime': list(demand_prime), 'user': user}
            raise VerificationError(f"Không khôi phục được file ghép tại {witness}", witness)
        recovered_bits.append(sum(piece.size for piece in pieces))
    return ReductionReport(
        demand_prime=demand_prime,
        induced_demand=induced,
        transcript_bits=transcript.total_bits,
        cache_bits=max(placement.cache_bits(user) for user in range(1, network.num_users + 1)),
        recovered_bits=tuple(recovered_bits),
        discarded=discarded,
        transcript=transcript,
    )


def verify_reduction(network, store, alloc, cap=None):
    """Chạy reduction_demo cho mọi d' ∈ [N_L]^K"""
    cap = config.MAX_DEMANDS if cap is None else cap
    largest = max(network.file_counts)
    count = largest ** network.num_users
    if count > cap:
        raise EnumerationLimitError("Số demand d'", count, cap)
    placement = place(store, network, alloc)
    checked = max_bits = discarded = 0
    for demand_prime in itertools.product(range(1, largest + 1), repeat=network.num_users):
        report = reduction_demo(network, store, alloc, demand_prime, placement)
        checked += 1
        max_bits = max(max_bits, report.transcript_bits)
        discarded += report.discarded
    return ReductionSummary(checked, max_bits, discarded)


def _pack_record(bits):
    data = np.packbits(bits).tobytes() if bits.size else b''
    return struct.pack('>IB', len(data), (-bits.size) % 8) + data


def dump_binary(path, store, placement, transcript):
    """Ghi (store, placement, transcript) thành các bản ghi có tiền tố độ dài 4 byte big-endian"""
    records = [bits for row in store.files for bits in row]
    records += [segment for cache in placement.caches for segment in cache]
    records += list(transcript.payloads)
    with open(path, 'wb') as f:
        f.write(struct.pack('>I', len(records)))
        for bits in records:
            f.write(_pack_record(bits))
    return len(records)


def load_binary_dump(path):
    with open(path, 'rb') as f:
        data = f.read()
    (count,), pos = struct.unpack_from('>I', data, 0), 4
    records = []
    for _ in range(count):
        length, pad = struct.unpack_from('>IB', data, pos)
        pos += 5
        raw = np.frombuffer(data[pos:pos + length], dtype=np.uint8)
        pos += length
        bits = np.unpackbits(raw) if length else EMPTY
        records.append(bits[:bits.size - pad] if pad else bits)
    return records
