#!/usr/bin/env python3
"""
Ridge Bench - Main Entry Point

This module serves as the entry point for the Ridge Bench command line.
It builds the click command group and runs it.
"""
from app.main import app


def main():
    """Run the command-line application"""
    app(prog_name="ridgebench")


if __name__ == "__main__":
    main()
