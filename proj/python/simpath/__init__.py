# Copyright 2026 The SimPath Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the simpath display engine."""

from ._simpath import (  # noqa: F401
    BendParams,
    SimPathError,
    anova_oneway,
    bend_coefficient,
    bend_road,
    despike,
    lateral_deviation,
    ms_score,
    msdv,
    parse_log,
    pearson,
    replay,
    replay_synthetic,
    resample,
    scheduler_trace,
    sim_step,
    weighting_gain,
    z_norm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
