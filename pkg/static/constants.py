# static/constants.py
import logging
import math
from typing import Dict, List, Tuple

from colorama import Fore, Style, init

from config import settings

# Initialize colorama
init(autoreset=True)

# Custom formatter with colors
class ColoredFormatter(logging.Formatter):
    COLORS = {
        'DEBUG': Fore.BLUE,
        'INFO': Fore.GREEN,
        'WARNING': Fore.YELLOW,
        'ERROR': Fore.RED,
        'CRITICAL': Fore.RED + Style.BRIGHT
    }

    def format(self, record):
        format_orig = self._style._fmt

        if record.levelname in self.COLORS:
            self._style._fmt = f"{self.COLORS[record.levelname]}%(asctime)s - %(name)s - %(levelname)s - %(message)s{Style.RESET_ALL}"

        result = super().format(record)

        # Restore original format
        self._style._fmt = format_orig

        return result

# Configure logging with colored formatter
def configure_colored_logging(level: str = settings.LOG_LEVEL):
    root_logger = logging.getLogger()

    # Clear existing handlers to avoid duplication
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(ColoredFormatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    ))

    root_logger.addHandler(console_handler)
    root_logger.setLevel(getattr(logging, level.upper(), logging.INFO))

configure_colored_logging()
logger = logging.getLogger("hktbrane")

# Exit code contract of the CLI
EXIT_OK = 0
EXIT_CHECK_FAILED = 2
EXIT_CONFIG_ERROR = 3

# Acceptance thresholds
HKT_PASS_THRESHOLD = 1e-5
HKT_FAIL_THRESHOLD = 1e-2
CLOSURE_THRESHOLD = 1e-6
HERMITIAN_THRESHOLD = 1e-10
MEMBER_THRESHOLD = 1e-3
NONMEMBER_THRESHOLD = 1e-1
DEGENERATE_CURVATURE = 1e-10
EOM_THRESHOLD = 1e-4
EOM_ORDER = 2.0
EOM_ORDER_TOLERANCE = 0.3
CALIBRATION_MAX_TOLERANCE = 1e-6
COMASS_SLACK = 1e-9
CORRESPONDENCE_TOLERANCE = 1e-9
FLUX_RADIUS_TOLERANCE = 0.01
FLUX_LINEARITY_TOLERANCE = 1e-3
QUADRATURE_TOLERANCE = 0.01

# int_{S^4} F = 4 pi^2 q_5 for F = -1/2 *dh, h = 1 + q_5/|y|^3
FLUX_NORMALIZATION_M5 = 4.0 * math.pi ** 2

# Contact-set dimensions of the four quaternionic calibrations
CONTACT_DIMENSIONS: Dict[str, int] = {
    "mixed_ij": 1,
    "kahler2_phi": 2,
    "cayley_phi": 3,
    "phi_j": 4,
}

# Holonomy table: expected membership of the nabla^- curvature per parameter class
HOLONOMY_TABLE: Dict[str, Dict[str, bool]] = {
    "real": {"sp2_I": True},
    "complex": {"su4": True, "sp2_I": False},
    "imaginary": {"spin7": True, "su4": False},
    "quaternion": {"spin7": False},
}

# Calibration whose contact set holds ker dτ for each parameter class
CLASS_CALIBRATION: Dict[str, str] = {
    "real": "mixed_ij",
    "complex": "kahler2_phi",
    "imaginary": "cayley_phi",
    "quaternion": "phi_j",
}

# Quaternions are written [w, x, y, z]
Q = List[float]

# For unit testing: two-map configurations, one per parameter class of p1-bar p2
CLASS_CONFIGS: Dict[str, List[Tuple[Q, Q, Q, float]]] = {
    "real": [
        ([1.0, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], 1.0),
        ([1.0, 0.0, 0.0, 0.0], [-1.5, 0.0, 0.0, 0.0], [0.2, 0.4, -0.3, 0.1], 0.8),
    ],
    "complex": [
        ([1.0, 0.0, 0.0, 0.0], [0.5, 0.8, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], 1.0),
        ([1.0, 0.0, 0.0, 0.0], [-0.7, 0.3, 0.0, 0.0], [0.2, 0.4, -0.3, 0.1], 0.8),
    ],
    "imaginary": [
        ([1.0, 0.0, 0.0, 0.0], [0.0, 0.6, 0.5, -0.2], [0.0, 0.0, 0.0, 0.0], 1.0),
        ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, -0.4, 0.7], [0.2, 0.4, -0.3, 0.1], 0.8),
    ],
    "quaternion": [
        ([1.0, 0.0, 0.0, 0.0], [0.3, 0.5, -0.4, 0.2], [0.0, 0.0, 0.0, 0.0], 1.0),
        ([0.8, 0.0, 0.3, 0.0], [-0.2, 0.1, 0.6, -0.5], [0.2, 0.4, -0.3, 0.1], 0.8),
    ],
}

# Generic three-map configuration: the quaternion pair plus a third brane
THREE_MAP_CONFIG: List[Tuple[Q, Q, Q, float]] = CLASS_CONFIGS["quaternion"] + [
    ([0.5, 0.0, 0.0, 0.0], [0.2, -0.7, 0.1, 0.4], [-0.3, 0.1, 0.5, -0.2], 0.6),
]

# Single-map configuration reproducing the NS-5-brane on the first factor
SINGLE_MAP_CONFIG: List[Tuple[Q, Q, Q, float]] = [
    ([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0], 1.0),
]

# Chart points on Q^2 away from the singular planes of the fixtures
SAMPLE_POINTS: List[List[float]] = [
    [0.9, -0.4, 0.7, 0.3, -0.5, 0.8, 0.2, -0.6],
    [-0.6, 0.8, 0.5, -0.7, 0.9, 0.1, -0.4, 0.5],
    [1.1, 0.2, -0.6, 0.8, 0.3, -0.9, 0.7, 0.4],
]

# Points on the unit three-sphere in Q
UNIT_QUATERNION_POINTS: List[List[float]] = [
    [1.0, 0.0, 0.0, 0.0],
    [0.5, 0.5, 0.5, 0.5],
    [0.0, 0.6, -0.8, 0.0],
    [0.3, -0.1, 0.6, math.sqrt(1.0 - 0.09 - 0.01 - 0.36)],
]
