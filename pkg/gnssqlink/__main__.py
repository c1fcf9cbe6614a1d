# -*- coding: utf-8 -*-
import sys

from gnssqlink.cli import main

sys.exit(main())
