import sys

from quasiconvex_ep.cli import main

sys.exit(main())
