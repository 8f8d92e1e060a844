from ..errors import (  # noqa: F401
    DivisionError,
    FieldMismatch,
    ParseError,
    X1GonError,
    ZeroPolynomial,
)
