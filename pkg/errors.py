"""Các lỗi dùng chung"""


class CachingError(Exception):
    """Lỗi gốc của bộ công cụ"""


class InputError(CachingError, ValueError):
    """Đầu vào không hợp lệ hoặc vi phạm điều kiện tiên quyết"""


class EnumerationLimitError(InputError):
    """Số phần tử cần liệt kê vượt quá giới hạn cấu hình"""

    def __init__(self, what, count, cap):
        super().__init__(f"{what}: {count} vượt quá giới hạn {cap}")
        self.count = count
        self.cap = cap


class TradeoffError(InputError):
    """Đường cong memory-rate vi phạm bất biến"""


class DivisibilityError(InputError):
    """Không chọn được F thỏa mãn điều kiện chia hết"""

    def __init__(self, message, required_multiple):
        super().__init__(message)
        self.required_multiple = required_multiple


class VerificationError(CachingError):
    """Giải mã sai hoặc hai bộ tối ưu không khớp"""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
