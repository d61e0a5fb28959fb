"""movekin: movement relatedness analytics for multi-species GPS collar data."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    ArenaBounds,
    Dataset,
    Fix,
    GridSpec,
    PlanarPoint,
    Role,
    SlotState,
    Species,
    TimeWindow,
    TrackSeries,
    season_of,
    slot_of,
    time_of,
)
