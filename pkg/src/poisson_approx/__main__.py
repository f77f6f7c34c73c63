import sys

from poisson_approx.cli import main

sys.exit(main())
