"""Quadrangularity analysis of tournaments and orthogonal-pattern search."""

__version__ = "0.1.0"

from quadtourn.tournament import (  # noqa: E402
    RotationalSymbol,
    Tournament,
    TournamentError,
    VertexSet,
    add_receiver,
    add_transmitter,
    compose,
    qr_tournament,
    random_tournament,
    rotational,
    three_cycle,
)
from quadtourn.quad import (  # noqa: E402
    domination_number,
    is_strongly_quadrangular,
    quadrangularity,
    rotational_quadrangular,
)

__all__ = [
    "RotationalSymbol",
    "Tournament",
    "TournamentError",
    "VertexSet",
    "add_receiver",
    "add_transmitter",
    "compose",
    "domination_number",
    "is_strongly_quadrangular",
    "qr_tournament",
    "quadrangularity",
    "random_tournament",
    "rotational",
    "rotational_quadrangular",
    "three_cycle",
]
