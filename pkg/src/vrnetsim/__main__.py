import sys

from vrnetsim.harness.cli import main

sys.exit(main())
