import sys

from fato.cli import main

sys.exit(main())
