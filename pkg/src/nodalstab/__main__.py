import sys

from nodalstab.cli import main

sys.exit(main())
