import sys

from fairflow.cli import main

sys.exit(main())
