"""
Allow linmap to be run as a module:
    python -m linmap
"""

from .cli import main

if __name__ == '__main__':
    main()
