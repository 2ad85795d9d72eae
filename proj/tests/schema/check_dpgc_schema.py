"""Checks the shipped DPGC schema against the bundled configs and a few bad documents."""

import json
import sys
from pathlib import Path

import jsonschema

data = Path(sys.argv[1])
schema = json.loads((data / "dpgc.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)

failures = 0
for path in sorted(data.glob("*/*.dpgc.json")):
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    for e in errors:
        print(f"{path.name}: {'/'.join(map(str, e.path))}: {e.message}")
    failures += bool(errors)
    print(f"{path.name}: {'ok' if not errors else 'INVALID'}")

base = {"domain": "d", "object_pools": [{"id": "p", "type": "t", "quantity": 1, "naming": {"prefix": "x"}}]}
bad = {
    "unknown key": {**base, "extra": 1},
    "string probability": {**base, "variable_init": [
        {"id": "q", "predicates": [{"predicate": "f", "probability": "0.5", "args": ["p"]}]}]},
    "zero quantity": {**base, "object_pools": [{"id": "p", "type": "t", "quantity": 0, "naming": {"prefix": "x"}}]},
    "zero offset": {**base, "variable_init": [
        {"id": "q", "predicates": [{"predicate": "f", "args": ["p$0", "p$0+0"]}]}]},
}
for name, doc in bad.items():
    ok = validator.is_valid(doc)
    print(f"reject {name}: {'MISSED' if ok else 'ok'}")
    failures += ok

sys.exit(1 if failures else 0)
