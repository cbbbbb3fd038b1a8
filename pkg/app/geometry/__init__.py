"""
Geometry package for Wind Causality Studio

This package contains the pointwise and field-level geometry:
- norm_kernel: Minkowski norms, Zermelo sheets F and F_l, conic domains,
  fundamental tensors and convexity checks
- wind_field: domains with exclusions, wind and norm fields, region
  classification and the WindStructure bundle
"""

from .norm_kernel import (
    GeneralNorm,
    KropinaNorm,
    RandersNorm,
    RiemannianNorm,
    Sheet,
    ZermeloSheet,
    classify_signature,
    conic_domain,
    dual_norm,
    eval_norm,
    fundamental_tensor,
    indicatrix_sample,
    strong_convexity_check,
    zermelo_roots,
)
from .wind_field import (
    BaseDomain,
    ConstantWind,
    Disk,
    ExpressionWind,
    RadialWind,
    Rect,
    RegionClass,
    RigidRotationWind,
    WindStructure,
    build_wind_structure,
    classify_grid,
)

__all__ = [
    "BaseDomain",
    "ConstantWind",
    "Disk",
    "ExpressionWind",
    "GeneralNorm",
    "KropinaNorm",
    "RadialWind",
    "RandersNorm",
    "Rect",
    "RegionClass",
    "RiemannianNorm",
    "RigidRotationWind",
    "Sheet",
    "WindStructure",
    "ZermeloSheet",
    "build_wind_structure",
    "classify_grid",
    "classify_signature",
    "conic_domain",
    "dual_norm",
    "eval_norm",
    "fundamental_tensor",
    "indicatrix_sample",
    "strong_convexity_check",
    "zermelo_roots",
]
