"""Dyadic Hankel, BMO and paraproduct kernels with the batch experiment harness."""

from ._core import (
    ConfigError,
    Stream,
    ValidationError,
    __version__,
    bmo_dyadic,
    bmo_product,
    bmo_rect,
    carleson_ratio,
    catalog,
    commutator_residual,
    haar_energy,
    haar_roundtrip,
    hankel_matrix,
    hankel_operator,
    hardy_projection,
    hilbert_transform,
    operator_norm,
    para_haar,
    parrott_min,
    run,
)

__all__ = [
    "ConfigError",
    "Stream",
    "ValidationError",
    "__version__",
    "bmo_dyadic",
    "bmo_product",
    "bmo_rect",
    "carleson_ratio",
    "catalog",
    "commutator_residual",
    "haar_energy",
    "haar_roundtrip",
    "hankel_matrix",
    "hankel_operator",
    "hardy_projection",
    "hilbert_transform",
    "operator_norm",
    "para_haar",
    "parrott_min",
    "run",
]
