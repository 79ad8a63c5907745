"""
Benchmark problem catalog, random instance generator and instance serialization.
"""

from .catalog import (
    CATALOG,
    TEN_DIM_E2,
    ProblemInstance,
    build_catalog_problem,
    cubic_counterexample,
    fractional_max_small,
    fractional_max_ten,
    random_fractional,
    root_quadratic_problem,
)
from .serialization import (
    config_from_dict,
    config_to_dict,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    prox_method_from_dict,
    prox_method_to_dict,
    save_instance,
)

__all__ = [
    # Catalog
    "CATALOG",
    "TEN_DIM_E2",
    "ProblemInstance",
    "build_catalog_problem",
    "root_quadratic_problem",
    "fractional_max_small",
    "fractional_max_ten",
    "random_fractional",
    "cubic_counterexample",

    # Serialization
    "config_to_dict",
    "config_from_dict",
    "instance_to_dict",
    "instance_from_dict",
    "prox_method_to_dict",
    "prox_method_from_dict",
    "save_instance",
    "load_instance",
]
