#!/usr/bin/env python3
"""
Developer convenience entrypoint for umeb-builder.

Installed usage goes through the ``umeb-builder`` console script. This file
bootstraps the local ``src/`` layout and forwards to ``umeb_builder.cli.main``.
"""

import sys

from bootstrap import ensure_src_on_path

ensure_src_on_path()

from umeb_builder.cli import main


if __name__ == "__main__":
    sys.exit(main())
