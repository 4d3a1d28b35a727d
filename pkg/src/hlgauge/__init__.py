"""Mixed-norm summing exponents and Hardy-Littlewood checks for multilinear forms."""

__version__ = "0.1.0"

from .exponents import (  # noqa: E402
    INF,
    Exponent,
    ExponentVector,
    ScheduleResult,
    anps_min_schedule,
    bhhl_admissible,
    dsp_exponent,
    schedule_bayart,
    schedule_hl,
    schedule_inclusion,
    schedule_pellegrino,
    tail_sum,
)
from .estimate import NormEstimate  # noqa: E402
from .mforms import (  # noqa: E402
    MultilinearForm,
    evaluate,
    norm_alternating,
    norm_sign_enum,
    norm_svd_bilinear,
    summing_norm_probe,
)
from .tensor_norms import (  # noqa: E402
    VectorSequence,
    dual_align,
    minkowski_gap,
    mixed_norm,
    norm_monotonicity_gap,
    weak_p_norm,
    weak_p_norm_basis,
)
