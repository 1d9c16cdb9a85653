"""Entry point for running as a module: python -m collisim."""

from collisim.cli import app

if __name__ == "__main__":
    app()
