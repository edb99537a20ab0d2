from .core import (
    CuspPath,
    CuspTriangle,
    GluingError,
    LinkError,
    PeripheralError,
    Triangulation,
    TriangulationError,
    ccw_corners,
    edge_shape_index,
)
from .fileformat import TriSyntaxError, UngluedFaceError, parse_triangulation, serialize_triangulation
from .census import CENSUS_NAMES, CensusLookupError, census
from .link import cusp_link
