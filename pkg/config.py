"""Cấu hình ứng dụng"""
import os

from dotenv import load_dotenv

load_dotenv()

VERSION = '0.3.0'

# Thư mục chứa cấu hình mạng mẫu
DATA_DIR = os.environ.get('CACHING_DATA_DIR', os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data'))
EXAMPLE_S2_FILE = os.path.join(DATA_DIR, 'example_s2.json')
UNEQUAL_N_FILE = os.path.join(DATA_DIR, 'unequal_n.json')
EQUAL_N3_FILE = os.path.join(DATA_DIR, 'equal_n3.json')

# Giới hạn liệt kê
MAX_DEMANDS = int(os.environ.get('CACHING_MAX_DEMANDS', '65536'))
MAX_GRID_POINTS = int(os.environ.get('CACHING_MAX_GRID_POINTS', '200000'))

# Ngân sách bit khi tự chọn F
MAX_BASE_SIZE = int(os.environ.get('CACHING_MAX_BASE_SIZE', str(1 << 20)))

DEFAULT_SEED = int(os.environ.get('CACHING_DEFAULT_SEED', '2017'))

LOG_LEVEL = os.environ.get('CACHING_LOG_LEVEL', 'WARNING')
LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'
