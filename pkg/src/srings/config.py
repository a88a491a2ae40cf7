"""Default resource bounds; each can be overridden through the environment."""

from __future__ import annotations

import os


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else default


# all_subgroups / automorphism_group / holomorph
GROUP_BOUND = _env_int("SRINGS_GROUP_BOUND", 256)
# operation tables are never materialised beyond this order
TABLE_BOUND = 4096
# orbitals on ordered pairs
ORBITAL_BOUND = _env_int("SRINGS_ORBITAL_BOUND", 512)
# automorphism group of an S-ring
AUT_BOUND = _env_int("SRINGS_AUT_BOUND", 128)
# exhaustive enumeration
ENUM_BOUND = _env_int("SRINGS_ENUM_BOUND", 24)
BRUTE_BOUND = 8
# elements visited by the generic setwise-stabilizer search
SEARCH_BOUND = _env_int("SRINGS_SEARCH_BOUND", 10**6)
