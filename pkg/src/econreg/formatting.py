"""Number formatting in the SPSS output style."""

import math


def spss(value: float, decimals: int = 3) -> str:
    """Format ``value`` with fixed decimals and no leading zero below 1.

    >>> spss(0.9972)
    '.997'
    >>> spss(-0.0049)
    '-.005'
    >>> spss(52.8921)
    '52.892'
    """
    if value is None:
        return ""
    if math.isnan(value):
        return "."
    if math.isinf(value):
        return "-inf" if value < 0 else "inf"
    text = f"{value:.{decimals}f}"
    if text.startswith("0."):
        return text[1:]
    if text.startswith("-0."):
        return "-" + text[2:]
    return text


def plain(value: float) -> str:
    """Full-precision rendering, used by ``--plain`` output."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def count(value: int) -> str:
    return str(int(value))
