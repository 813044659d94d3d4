import sys

from hidden_topics.cli import main

sys.exit(main())
