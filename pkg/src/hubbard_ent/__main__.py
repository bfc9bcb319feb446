import sys

from hubbard_ent.cli import main

sys.exit(main())
