"""The mpbrent command-line tool, driven from Python.

The same commands work from a shell, e.g. ``mpbrent eval pi --digits 50``.
Exit codes: 0 ok, 2 usage, 3 domain or range error, 4 golden-table
mismatch.
"""

from mpbrent import cli

for argv in (["eval", "pi", "--digits", "50"],
             ["eval", "log", "1e6", "--digits", "10"],
             ["eval", "artan", "0.5", "--digits", "8"],
             ["table", "9.1", "--check"],
             ["bench", "basic", "--sizes", "2^12", "--output", "csv"]):
    print("$ mpbrent", " ".join(argv))
    print(cli.run(argv))

print("$ mpbrent eval log -- -1")
print("exit code", cli.main(["eval", "log", "--", "-1"]))
