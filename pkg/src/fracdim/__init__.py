"""fracdim: exact expansions of rationals and box-counting dimension tools.

Three classical digit expansions (continued fraction, greedy Egyptian,
Engel), constructive approximators with proven error bounds, explicit
interval covers, and an exact grid-occupancy engine that estimates the
box-counting dimension of the sets of rationals whose expansion has a
prescribed length.
"""

from .core import (
    DomainError,
    Interval,
    Rational,
    ResourceError,
    SetDescriptor,
    SetFamily,
    Word,
    WordKind,
    format_rational,
    interval_intersect,
    parse_rational,
    parse_set_spec,
    word_decrement_last,
    word_parent,
    word_product,
)
from .expansions import (
    Expansion,
    cf_eval,
    cf_expand,
    egy_eval,
    egy_expand,
    engel_eval,
    engel_expand,
    expand,
    gauss_shift,
    is_greedy_admissible,
)
from .constructions import (
    CoverContext,
    CoverElement,
    IntegerRootCap,
    bound_cf,
    bound_engel,
    bound_sumset,
    cf_headroom,
    cf_near_unit_fraction,
    cf_within_budget,
    egy_approximate,
    egy_cover,
    engel_approximate,
    engel_digit_cap,
    engel_within_budget,
    enumerate_egy_cover_words,
    ln_upper,
    sample_rationals,
)
from .boxcount import (
    BoundCheck,
    Grid,
    MeshReport,
    SlopeFit,
    cell_contains,
    dim_estimate,
    measure_union,
    mesh_count,
    neighborhood_covers,
    verify_bounds,
    verify_cover,
)

__version__ = "0.1.0"
