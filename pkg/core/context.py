from enum import Enum, IntEnum


class ProcessKind(Enum):
    """Driving process and the norm whose unit ball defines a "small ball"."""

    BM1 = "bm1"  # 1D Brownian motion, interval (-1, 1)
    BM2 = "bm2"  # 2D Brownian motion, unit disc
    HEIS = "heis"  # hypoelliptic Brownian motion, unit rho-ball
    AREA = "area"  # Levy area alone, |A| < 1


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class TraceMode(Enum):
    GROUP = "group"
    AREA = "area"


class OutputFormat(Enum):
    JSON = "json"
    CSV = "csv"


class Stream(IntEnum):
    """
    Substream tags. Each experiment arm draws from its own tag so arms are
    independent even when they share a seed and path indices.
    """

    PATHS = 0
    SCALED_SHORT = 1
    SCALED_LONG = 2
    EXIT = 3
    TIMECHANGE_AREA = 4
    TIMECHANGE_CLOCK = 5
    INCREMENTS = 6
    FRESH = 7
    LIL = 8
    SMALL_BALL = 9
    SCALING_DIRECT = 10
    SCALING_EXIT = 11
    HORIZON_SHORT = 12
    HORIZON_LONG = 13
    CHECK = 14
