"""To call detbound as a module."""

# pylint: skip-file

from .detboundapp import main

main()
