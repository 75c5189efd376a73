"""
Driving everything from the command line
========================================

The ``pideals`` command reads one JSON config and writes JSON lines, CSV or
a table.  ``pideals reproduce`` runs the full property suite.
"""
import json
import subprocess
import sys

config = {"op": "eval", "submeasure": {"preset": "farah"},
          "set": {"kind": "explicit", "elements": [8, 9]}}
out = subprocess.run([sys.executable, "-m", "pideals", "--config", "-"],
                     input=json.dumps(config), capture_output=True, text=True)
print(out.stdout)

# a positional op and target override the config; here the config is empty
out = subprocess.run([sys.executable, "-m", "pideals", "witness", "trace-family",
                      "--format", "table", "--config", "-"],
                     input=json.dumps({"params": {"m": 3, "T": 8}}),
                     capture_output=True, text=True)
print(out.stdout)

# the reproduction run: one row per property, exit code 0 when all pass
out = subprocess.run([sys.executable, "-m", "pideals", "reproduce", "--seed", "0",
                      "--format", "table"], capture_output=True, text=True)
print(out.stdout)
print("exit code:", out.returncode)
