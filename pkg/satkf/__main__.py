# satkf/__main__.py
from satkf.cmd_interface import app


def main():
    app()


if __name__ == "__main__":
    main()
