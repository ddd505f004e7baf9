#!/usr/bin/env python3
"""
dynkin-walk - walk matrices, Smith normal forms and the D_n verification harness
Exact integer linear algebra for algebraic graph theory
"""

from src.cli_interface import main

if __name__ == "__main__":
    main()
