"""Allow running the command-line front end as `python -m modeguide`."""

import sys

from .cli import main

sys.exit(main())
