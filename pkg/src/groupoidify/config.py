"""Process-wide resource caps."""

import os

DEFAULT_PULLBACK_CAP = 10**6

# Largest truncation of the groupoid of finite sets that build_E accepts.
# The skeletal representation never enumerates S_n unless asked to, so the
# cap guards composite constructions rather than E itself.
E_MAX = 10

# Largest prime for which SL(3, q) is enumerated element by element.
GROUP_ENUM_MAX_Q = 3

PLANE_MAX_Q = 7


def pullback_cap() -> int:
    """Candidate-triple cap for weak pullbacks.

    An explicit ``set_pullback_cap`` wins over ``GPD_CAP``, which wins over
    the default.
    """
    if _cap_override is not None:
        return _cap_override
    raw = os.environ.get("GPD_CAP")
    return int(raw) if raw else DEFAULT_PULLBACK_CAP


_cap_override: int | None = None


def set_pullback_cap(cap: int | None) -> None:
    global _cap_override
    _cap_override = cap
