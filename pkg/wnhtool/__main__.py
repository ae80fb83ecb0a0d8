import sys

from .WNHtool import main

sys.exit(main())
