from .compact import (
    POLICIES,
    POLICY_MAX,
    POLICY_MEAN,
    POLICY_MIN,
    POLICY_OPERATIONAL,
    POLICY_WEIGHTED,
    CompactBuildOutput,
    build_compact,
    collapse_profiles,
    normalize_policy,
)
from .simple import SimpleBuildOutput, build_simple
from .vintage import VintageBuildOutput, build_vintage

METHOD_BUILDERS = {
    "simple": lambda scenario, policy=None: build_simple(scenario),
    "vintage": lambda scenario, policy=None: build_vintage(scenario),
    "compact": lambda scenario, policy=POLICY_OPERATIONAL: build_compact(
        scenario, policy or POLICY_OPERATIONAL
    ),
}

METHODS = tuple(METHOD_BUILDERS)

__all__ = [
    "CompactBuildOutput",
    "METHODS",
    "METHOD_BUILDERS",
    "POLICIES",
    "POLICY_MAX",
    "POLICY_MEAN",
    "POLICY_MIN",
    "POLICY_OPERATIONAL",
    "POLICY_WEIGHTED",
    "SimpleBuildOutput",
    "VintageBuildOutput",
    "build_compact",
    "build_simple",
    "build_vintage",
    "collapse_profiles",
    "normalize_policy",
]
