"""Exciton transport on chromophore networks with Haken-Strobl dephasing."""

from ._core import (
    Error,
    LindbladModel,
    SiteGraph,
    TrapSpec,
    __version__,
    assemble_oligomer,
    commands,
    concurrence,
    delocalization,
    dephasing_from_temperature,
    efficiency,
    fit_timescales,
    load_site_graph,
    localized,
    mutual_information,
    negativity,
    parse_site_graph,
    populations,
    propagate,
    run_command,
    spectrum,
)

__all__ = [
    "Error",
    "LindbladModel",
    "SiteGraph",
    "TrapSpec",
    "__version__",
    "assemble_oligomer",
    "commands",
    "concurrence",
    "delocalization",
    "dephasing_from_temperature",
    "efficiency",
    "fit_timescales",
    "load_site_graph",
    "localized",
    "mutual_information",
    "negativity",
    "parse_site_graph",
    "populations",
    "propagate",
    "run_command",
    "spectrum",
]
