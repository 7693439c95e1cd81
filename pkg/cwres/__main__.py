import sys

from cwres.main import main

sys.exit(main())
