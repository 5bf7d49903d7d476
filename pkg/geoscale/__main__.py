import sys

from geoscale.main import run

sys.exit(run())
