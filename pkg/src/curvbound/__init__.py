"""Comparison geometry for lower curvature bounds.

Generalized trigonometry of the model planes, triangle solvers, concrete
geodesic spaces, the comparison properties of hinges, and the
globalization machinery (thin-hinge iteration, defect descent).
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AmbiguityError,
    CurvBoundError,
    DomainError,
    EstimationError,
    InconsistencyError,
    PreconditionError,
)
from .trig import cs, md, model_diameter, sn, sn_inverse, within_diameter  # noqa: E402
from .model import (  # noqa: E402
    AlexandrovConfig,
    HingeSAS,
    TriangleData,
    alexandrov_compare,
    angle_from_sss,
    midpoint_distance,
    side_from_sas,
    signs_agree,
    triple_exists,
)
from .spaces import (  # noqa: E402
    Cone,
    GeodesicSpace,
    HyperbolicPlane,
    Plane,
    Segment,
    Sphere,
    distance,
    interpolate,
    segment,
    space_from_json,
)
from .comparison import (  # noqa: E402
    AngleEstimate,
    Hinge,
    Verdict,
    check_balanced,
    check_property,
    comparison_angle,
    estimate_curvature_floor,
    perimeter,
    upper_angle,
)
from .globalization import (  # noqa: E402
    DescentTrace,
    IterationTrace,
    defect_descent,
    globalize_check,
    subdivision_check,
    thin_hinge_iteration,
)
