"""Badly approximable targets over F_q((1/t)).

Series are given in the text form ``poly=[...]; frac=...`` with frac one of
``[digits]``, ``prefix:[digits]``, ``rational:[num]/[den]``,
``periodic:[pre]|[per]`` or ``rule:liminf``.
"""

import json

from ._ffba import (
    Certificate,
    FfbaError,
    Field,
    InsufficientPrecision,
    Schedule,
    Series,
    Weight,
    c_depth,
    c_depth_weighted,
    dimension_bound,
    hankel,
    indices,
    invertibility_spectrum,
    kappa,
    left_null_vector,
    liminf_theta,
    m0,
    matrix_condition,
    measure,
    rank_profile,
    witness,
)


def series(field, *texts):
    """Parse one series per text."""
    return [Series.parse(field, t) for t in texts]


def certificate_dict(cert):
    return json.loads(cert.to_json())


__all__ = [
    "Certificate",
    "FfbaError",
    "Field",
    "InsufficientPrecision",
    "Schedule",
    "Series",
    "Weight",
    "c_depth",
    "c_depth_weighted",
    "certificate_dict",
    "dimension_bound",
    "hankel",
    "indices",
    "invertibility_spectrum",
    "kappa",
    "left_null_vector",
    "liminf_theta",
    "m0",
    "matrix_condition",
    "measure",
    "rank_profile",
    "series",
    "witness",
]
