from fractions import Fraction

from utils.exceptions import PreconditionError


def format_ratio(value: Fraction) -> str:
    """Format an exact rational as num/den (den kept even when 1)"""
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = 6) -> str:
    """Format a rational as a fixed-point approximation"""
    return f"{float(value):.{places}f}"


def parse_ratio(text: str) -> Fraction:
    """Parse 'num/den' or a plain integer into an exact rational"""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise PreconditionError(f"not a rational number: {text!r}") from e


def format_residues(values: list[int], limit: int = 20) -> str:
    """Brace-enclosed residue list, truncated after `limit` entries"""
    shown = ", ".join(str(v) for v in values[:limit])
    if len(values) > limit:
        shown += f", ... ({len(values)} total)"
    return "{" + shown + "}"
