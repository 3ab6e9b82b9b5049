from typing import Text

from typing_extensions import TypedDict


class ConfigDict(TypedDict, total=False):
    """
    A dictionary representation of a powerlog configuration file.
    """

    # target absolute eigenvalue accuracy
    tolerance: float
    # number of interior mesh points of the coarsest grid
    grid_points: int
    # whether halving-step extrapolation is used
    richardson: bool
    # fixed outer cutoff, sized automatically if absent
    r_max: float
    # refinement stops with an error beyond this many points
    max_grid_points: int
    # admissible relative amplitude of the eigenfunction near the outer cutoff
    tail_tolerance: float
    # number of levels solved in parallel
    workers: int
    # location of the P dataset cache
    cache: Text


class DatasetRecord(TypedDict):
    """
    One row of the P dataset cache file.
    """

    n: int
    ell: int
    # P values at the nodes q = -1, 0, 1, 2
    p_m1: float
    p_0: float
    p_1: float
    p_2: float
    # provenance flags of the node values
    prov_m1: Text
    prov_0: Text
    prov_1: Text
    prov_2: Text
