"""Module entry point: ``python -m typebench_oracle``."""

import sys

from .cli import main

sys.exit(main())
