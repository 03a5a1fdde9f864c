#!/usr/bin/env python
"""hanlm command-line utility."""
import sys


def main():
    """Run a hanlm command."""
    try:
        from core.cli import dispatch
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == '__main__':
    main()
