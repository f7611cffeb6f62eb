from circinv.cli.main import main

__all__ = ["main"]
