"""Root-level entry point for the eqcoho command line."""
import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "eqcoho"))
from run_report import main

if __name__ == "__main__":
    raise SystemExit(main())
