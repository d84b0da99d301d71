"""Ket-notation rendering of states, e.g. (1/√5)(|01'⟩ + ω^2|12'⟩ - |23'⟩)."""

import cmath
import math
from typing import List

import numpy as np

from .constructions import BasisSet
from .correspondence import PureState


RENDER_TOL = 1e-9


def _ket(k: int, l: int, wide: bool) -> str:
    return f"|{k},{l}'⟩" if wide else f"|{k}{l}'⟩"


def format_phase(phase: complex, d: int, tol: float = RENDER_TOL) -> str:
    """
    Unit-modulus phase as a power of omega_d = exp(2 pi i / d) when it is one.

    Returns "" for 1, "-" for -1, "ω^p" for other powers, and a decimal complex
    number otherwise.
    """
    if abs(phase - 1) <= tol:
        return ""
    if abs(phase + 1) <= tol:
        return "-"
    p = round(cmath.phase(phase) * d / (2 * math.pi)) % d
    if abs(phase - cmath.exp(2j * math.pi * p / d)) <= tol:
        return f"ω^{p}"
    return f"({phase.real:.6g}{phase.imag:+.6g}i)"


def format_state(state: PureState, tol: float = RENDER_TOL) -> str:
    coeffs = state.coeffs
    support = [(int(k), int(l)) for k, l in zip(*np.nonzero(np.abs(coeffs) > tol))]
    if not support:
        return "0"
    wide = max(state.d, state.d_prime) > 10
    magnitudes = [abs(coeffs[k, l]) for k, l in support]
    uniform = max(magnitudes) - min(magnitudes) <= tol
    terms: List[str] = []
    for k, l in support:
        c = complex(coeffs[k, l])
        if uniform:
            text = format_phase(c / abs(c), state.d, tol)
        else:
            text = f"({c.real:.6g}{c.imag:+.6g}i)"
        if not terms:
            terms.append(f"{text}{_ket(k, l, wide)}")
        elif text.startswith("-"):
            terms.append(f" - {text[1:]}{_ket(k, l, wide)}")
        else:
            terms.append(f" + {text}{_ket(k, l, wide)}")
    body = "".join(terms)
    if not uniform:
        return body
    count = 1.0 / (magnitudes[0] ** 2)
    if abs(count - round(count)) <= 1e-6 and round(count) > 1:
        n = round(count)
        root = math.isqrt(n)
        prefix = f"1/{root}" if root * root == n else f"1/√{n}"
        return f"({prefix})({body})"
    if abs(magnitudes[0] - 1.0) <= tol:
        return body
    return f"{magnitudes[0]:.6g}({body})"


def format_basis(basis: BasisSet) -> List[str]:
    """One line per member: label, then the state."""
    return [
        f"({','.join(str(x) for x in label)}): {format_state(state)}"
        for label, state in zip(basis.labels, basis.states)
    ]
