#!/usr/bin/env python
"""Command-line utility for the Heisenberg lab.

Every lab subcommand (``bounds``, ``simulate``, ``smallball``, ...) is a Django
management command; ``heislab.cli`` adds the ``check`` alias and the exit-code
contract on top of Django's dispatcher.
"""

from heislab.cli import main

if __name__ == "__main__":
    main()
