"""
Test package for umeb-builder.

The bootstrap helper from the project root makes the local ``src/`` directory
importable when running ``python3 -m unittest`` from a checkout.
"""

from bootstrap import ensure_src_on_path

ensure_src_on_path()
