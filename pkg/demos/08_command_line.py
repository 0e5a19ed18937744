"""
The command line
================

Drive the whole workflow through ``treeroute``'s subcommands and read the
JSON artifacts back.
"""

import json
import tempfile
from pathlib import Path

from treeroute.cli import main

work = Path(tempfile.mkdtemp(prefix="treeroute-"))
host, tree, emb = work / "host.json", work / "tree.json", work / "embed.json"

main(["network", "verify", "--builder", "odd-even", "--n", "8"])
main(["gadget", "--k", "6", "--out", str(work / "gadget.json"), "--dot", str(work / "gadget.dot")])
main(["route", "--registers", "4", "--k", "2", "--phi", "4,1,2,3", "--out", str(work / "route.json")])
main(["gen-host", "--n", "600", "--d", "30", "--seed", "5", "--out", str(host)])
main(["gen-tree", "--kind", "caterpillar", "--n", "600", "--seed", "5", "--out", str(tree)])
main(["spectra", "--host", str(host)])
main(["embed", "--host", str(host), "--tree", str(tree), "--out", str(emb)])
main(["verify", "--host", str(host), "--tree", str(tree), "--map", str(emb)])
main(["cycle-factor", "--host", str(host), "--k", "150", "--out", str(work / "cycles.json")])
main(["export-dot", "--in", str(work / "cycles.json"), "--graph", str(host), "--out", str(work / "cycles.dot")])

doc = json.loads(emb.read_text())
print("schema:", doc["schema"], "| mapped vertices:", len(doc["map"]))
print("artifacts in", work, ":", sorted(p.name for p in work.iterdir()))
