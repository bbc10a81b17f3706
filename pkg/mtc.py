"""
MTC bound engine entry point.

Usage: python mtc.py <command> <model file> [options]; see plugins/cli/main.py.
"""
import sys
import os

# Add plugins directory to path
plugins_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "plugins")
sys.path.insert(0, plugins_path)
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli.main import main


if __name__ == "__main__":
    sys.exit(main())
