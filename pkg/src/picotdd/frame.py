"""LTE TDD frame structure: the seven DL/UL configurations plus the two
codecs used to exchange configuration information between cells."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Direction(enum.Enum):
    """Link direction of one subframe."""

    DOWNLINK = "D"
    SPECIAL = "S"
    UPLINK = "U"


class SubframeClass(enum.Enum):
    """Fixed subframes keep the same effective direction in every
    configuration; flexible subframes may differ from cell to cell."""

    FIXED = "fixed"
    FLEXIBLE = "flexible"


# The seven standard TDD uplink-downlink patterns, subframes 0..9.
_PATTERNS = (
    "DSUUUDSUUU",  # 0
    "DSUUDDSUUD",  # 1
    "DSUDDDSUDD",  # 2
    "DSUUUDDDDD",  # 3
    "DSUUDDDDDD",  # 4
    "DSUDDDDDDD",  # 5
    "DSUUUDSUUD",  # 6
)

NUM_CONFIGS = len(_PATTERNS)
SUBFRAMES_PER_FRAME = 10
FIXED_SUBFRAMES = (0, 1, 2, 5, 6)
FLEXIBLE_SUBFRAMES = (3, 4, 7, 8, 9)

# Position of each flexible subframe inside the 5-bit bitmap.
FLEXIBLE_BIT_POSITION = {s: i for i, s in enumerate(FLEXIBLE_SUBFRAMES)}

CONFIG_ID_BITS = 3


@dataclass(frozen=True)
class TddConfiguration:
    """One of the seven per-subframe direction patterns."""

    config_id: int
    pattern: tuple[Direction, ...]


def _check_config_id(config_id):
    if not isinstance(config_id, int) or not 0 <= config_id < NUM_CONFIGS:
        raise ValueError(f"config_id must be in 0..{NUM_CONFIGS - 1}, got {config_id!r}")


def _check_subframe(subframe):
    if not isinstance(subframe, int) or not 0 <= subframe < SUBFRAMES_PER_FRAME:
        raise ValueError(f"subframe must be in 0..9, got {subframe!r}")


def configuration(config_id: int) -> TddConfiguration:
    """Return the full direction pattern for one configuration id."""
    _check_config_id(config_id)
    pattern = tuple(Direction(ch) for ch in _PATTERNS[config_id])
    return TddConfiguration(config_id, pattern)


def subframe_direction(config_id: int, subframe: int) -> Direction:
    """Direction of `subframe` under configuration `config_id`."""
    _check_config_id(config_id)
    _check_subframe(subframe)
    return Direction(_PATTERNS[config_id][subframe])


def classify_subframe(subframe: int) -> SubframeClass:
    """Fixed for subframes {0,1,2,5,6}, flexible for {3,4,7,8,9}."""
    _check_subframe(subframe)
    if subframe in FIXED_SUBFRAMES:
        return SubframeClass.FIXED
    return SubframeClass.FLEXIBLE


def is_downlink_like(direction: Direction) -> bool:
    """Special subframes carry DL data, so they count as downlink."""
    return direction is not Direction.UPLINK


def downlink_fraction(config_id: int) -> float:
    """Share of subframes transmitting downlink (special included)."""
    _check_config_id(config_id)
    n_dl = sum(1 for ch in _PATTERNS[config_id] if ch in "DS")
    return n_dl / SUBFRAMES_PER_FRAME


def encode_flexible_bitmap(config_id: int) -> str:
    """5-bit string over subframes (3,4,7,8,9): '1' where downlink."""
    _check_config_id(config_id)
    pattern = _PATTERNS[config_id]
    return "".join("1" if pattern[s] in "DS" else "0" for s in FLEXIBLE_SUBFRAMES)


def encode_config_id(config_id: int) -> str:
    """3-bit unsigned binary encoding, most significant bit first."""
    _check_config_id(config_id)
    return format(config_id, f"0{CONFIG_ID_BITS}b")


def decode_config_id(bits: str) -> str:
    """Expand a received 3-bit configuration id to its 5-bit flexible bitmap."""
    if len(bits) != CONFIG_ID_BITS or any(ch not in "01" for ch in bits):
        raise ValueError(f"expected a 3-bit string of 0/1, got {bits!r}")
    config_id = int(bits, 2)
    if config_id >= NUM_CONFIGS:
        raise ValueError(f"no configuration with id {config_id} (only 0..6 exist)")
    return encode_flexible_bitmap(config_id)
