#!/usr/bin/env python3
# Copyright 2026 The npverify Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Solves an exported DIMACS file with CaDiCaL (python-sat).

Prints SAT or UNSAT once per `a <lits> 0` line of the assumptions file, or
once for the plain formula when no assumptions file is given.
"""

import argparse
import sys

from pysat.formula import CNF
from pysat.solvers import Cadical153


def read_assumptions(path):
    queries = []
    with open(path) as f:
        for line in f:
            fields = line.split()
            if not fields or fields[0] != "a":
                continue
            lits = [int(t) for t in fields[1:]]
            if lits and lits[-1] == 0:
                lits.pop()
            queries.append(lits)
    return queries


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("cnf")
    parser.add_argument("assumptions", nargs="?")
    args = parser.parse_args()
    formula = CNF(from_file=args.cnf)
    queries = read_assumptions(args.assumptions) if args.assumptions else [[]]
    with Cadical153(bootstrap_with=formula.clauses) as solver:
        for lits in queries:
            print("SAT" if solver.solve(assumptions=lits) else "UNSAT")
    return 0


if __name__ == "__main__":
    sys.exit(main())
