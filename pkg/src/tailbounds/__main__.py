"""Allow running the CLI as `python -m tailbounds`."""

from .cli import entry

if __name__ == "__main__":
    entry()
