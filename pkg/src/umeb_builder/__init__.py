"""
Main package for umeb-builder.

Constructions live in ``umeb_builder.constructions``, checks in
``umeb_builder.verification``; most users go through the ``umeb-builder``
console script. The two entry points below are imported lazily so that
``import umeb_builder`` stays cheap.
"""


def verify_umeb(*args, **kwargs):
    """Lazily import and run ``umeb_builder.verification.verify_umeb``."""
    from .verification import verify_umeb as _verify_umeb

    return _verify_umeb(*args, **kwargs)


def fixture_basis(*args, **kwargs):
    """Lazily import and build a named reference basis."""
    from .fixtures import fixture_basis as _fixture_basis

    return _fixture_basis(*args, **kwargs)


__all__ = [
    "fixture_basis",
    "verify_umeb",
]
