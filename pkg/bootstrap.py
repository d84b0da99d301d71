"""
Put the local ``src/`` directory on ``sys.path``.

Shared by ``main.py`` and ``tests/__init__.py`` so umeb_builder can be run and
tested from a checkout without installing it.
"""

import os
import sys


def ensure_src_on_path() -> None:
    root = os.path.dirname(os.path.abspath(__file__))
    src_dir = os.path.join(root, "src")
    if src_dir not in sys.path:
        sys.path.insert(0, src_dir)
