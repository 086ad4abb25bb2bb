"""Writes the JSON Schemas under data/schema/."""
import json
import pathlib
import sys

D = "https://json-schema.org/draft/2020-12/schema"
CONFIGS = ["TRUSTED", "UNTRUSTED", "UNTRUSTED_KEY_LOCKED", "UNTRUSTED_FSM_OBF"]
CELLS = ["INV", "BUF", "AND2", "OR2", "NAND2", "NOR2", "XOR2", "XNOR2", "DFF"]

num = {"type": "number"}
pos = {"type": "number", "exclusiveMinimum": 0}
nonneg = {"type": "number", "minimum": 0}
bound = {"type": ["number", "null"], "description": "null or absent means unbounded"}
string = {"type": "string"}
strings = {"type": "array", "items": string}
config = {"enum": CONFIGS}


def obj(props, required=(), extra=False):
    o = {"type": "object", "properties": props, "required": list(required)}
    if not extra:
        o["additionalProperties"] = False
    return o


config_metrics = obj({"fmax": pos, "area": pos, "p_dyn_at_fmax": nonneg, "p_static": nonneg},
                     ["fmax", "area", "p_dyn_at_fmax", "p_static"])
characterization = obj({c: {"$ref": "#/$defs/config_metrics"} for c in CONFIGS}, CONFIGS)

constraints = obj({
    "domain_f_min": {"type": ["object", "null"], "additionalProperties": pos},
    "p_total_max": bound, "p_trusted_max": bound, "p_untrusted_max": bound,
    "io_bandwidth_max": bound, "area_total_max": bound,
    "external_io_baseline": nonneg, "inter_chip_delay": nonneg,
    "latency_constraints": {"type": ["array", "null"], "items": obj(
        {"id": string, "path": {"type": "array", "items": string, "minItems": 1}, "max_latency": bound},
        ["id", "path"])},
})

system = {
    "$schema": D, "title": "System", **obj({
        "modules": {"type": "array", "minItems": 1, "items": obj({
            "id": string, "clock_domain": string, "criticality": nonneg,
            "placement": {"anyOf": [config, {"type": "null"}]},
            "characterization": {"$ref": "#/$defs/characterization"},
        }, ["id", "clock_domain", "criticality", "characterization"])},
        "domains": {"type": "array", "items": obj({"id": string, "members": strings}, ["id", "members"])},
        "channels": {"type": "array", "items": obj({
            "id": string, "src": string, "dst": string, "bandwidth": nonneg, "latency": nonneg,
        }, ["src", "dst", "bandwidth"])},
        "exposure": {"anyOf": [obj({c: {"type": "number", "minimum": 0, "maximum": 1} for c in CONFIGS}, CONFIGS),
                               {"type": "null"}]},
        "constraints": {"anyOf": [{"$ref": "#/$defs/constraints"}, {"type": "null"}]},
    }, ["modules", "domains"]),
    "$defs": {"config_metrics": config_metrics, "characterization": characterization, "constraints": constraints},
}

netlist = {"$schema": D, "title": "Netlist", **obj({
    "name": string, "inputs": strings, "outputs": strings,
    "gates": {"type": "array", "items": obj({
        "id": string, "type": {"enum": [c for c in CELLS if c != "DFF"]},
        "inputs": {"type": "array", "items": string, "minItems": 1, "maxItems": 2}, "output": string,
    }, ["id", "type", "inputs", "output"])},
    "dffs": {"type": "array", "items": obj({"id": string, "d": string, "q": string}, ["d", "q"])},
}, ["inputs", "outputs", "gates"])}

fsm = {"$schema": D, "title": "FSM", **obj({
    "states": {"type": "array", "items": string, "minItems": 1},
    "reset": string,
    "input_width": {"type": "integer", "minimum": 0, "maximum": 63},
    "output_width": {"type": "integer", "minimum": 0, "maximum": 63},
    "input_nets": strings, "output_nets": strings,
    "transitions": {"type": "array", "items": obj({
        "state": string, "input": {"type": "string", "pattern": "^[01-]*$"},
        "next": string, "output": {"type": "string", "pattern": "^[01]*$"},
    }, ["state", "input", "next", "output"])},
}, ["states", "reset", "input_width", "output_width", "transitions"])}

cell = obj({"delay": pos, "area": pos, "leakage": pos, "switch_energy": pos},
           ["delay", "area", "leakage", "switch_energy"])
technology = {"$schema": D, "title": "Technology", **obj({
    "name": string,
    "cells": obj({c: cell for c in CELLS}, CELLS),
    "seq_overhead": pos,
    "activity_factor": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
}, ["name", "cells", "seq_overhead"])}

lock = {"$schema": D, "title": "Lock parameters", **obj({
    "key_gates": {"type": ["integer", "null"], "minimum": 0},
    "key_gate_fraction": {"type": "number", "minimum": 0, "maximum": 1},
    "chain_len": {"type": "integer", "minimum": 1},
    "traps": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
})}

config_set = {"type": "array", "items": config, "uniqueItems": True}
axis_path = {"type": "string", "pattern": (
    "^(p_total_max|p_trusted_max|p_untrusted_max|io_bandwidth_max|area_total_max|"
    "external_io_baseline|inter_chip_delay|enabled_configs|domain_f_min\\..+|latency\\..+)$")}
sweep = {"$schema": D, "title": "Sweep", **obj({
    "base": {"$ref": "constraints.schema.json"},
    "enabled_configs": config_set,
    "mode": {"enum": ["product", "zip"]},
    "axes": {"type": "array", "items": obj({"path": axis_path, "values": {"type": "array", "minItems": 1}},
                                           ["path", "values"])},
})}

assignment = {"type": "object", "additionalProperties": config}
evaluation = obj({
    "domain_freq": {"type": "object", "additionalProperties": num},
    "power": obj({"trusted": num, "untrusted": num, "total": num}, ["trusted", "untrusted", "total"]),
    "io_bandwidth": num,
    "latencies": {"type": "object", "additionalProperties": num},
    "area": obj({"trusted": num, "untrusted": num, "total": num}, ["trusted", "untrusted", "total"]),
    "vulnerability": num, "feasible": {"type": "boolean"},
    "violations": {"type": "array", "items": obj({"constraint": string, "required": num, "actual": num},
                                                 ["constraint", "required", "actual"])},
}, ["domain_freq", "power", "io_bandwidth", "latencies", "area", "vulnerability", "feasible", "violations"])
run_record = {"$schema": D, "title": "Run record", **obj({
    "run_id": {"type": "integer", "minimum": 0},
    "timestamp": {"type": "string", "format": "date-time"},
    "constraints": {"$ref": "constraints.schema.json"},
    "enabled_configs": config_set,
    "assignment": {"anyOf": [assignment, {"type": "null"}]},
    "result": obj({
        "best": {"anyOf": [assignment, {"type": "null"}]},
        "best_eval": {"anyOf": [{"$ref": "#/$defs/evaluation"}, {"type": "null"}]},
        "nodes_visited": {"type": "integer"}, "nodes_pruned": {"type": "integer"},
        "proven_optimal": {"type": "boolean"},
    }, ["best", "best_eval", "nodes_visited", "nodes_pruned", "proven_optimal"]),
    "eval": {"anyOf": [{"$ref": "#/$defs/evaluation"}, {"type": "null"}]},
}, ["run_id", "timestamp", "constraints", "enabled_configs", "assignment", "result", "eval"]),
    "$defs": {"evaluation": evaluation}}

api = {"$schema": D, "title": "HTTP API payloads", "$defs": {
    "run_request": obj({"constraints": {"$ref": "constraints.schema.json"}, "enabled_configs": config_set}),
    "status": obj({"active_runs": {"type": "integer"}, "completed_runs": {"type": "integer"},
                   "stored_runs": {"type": "integer"}}, ["active_runs", "completed_runs", "stored_runs"]),
    "error": obj({"error": string, "field": string}, ["error"]),
    "runs": {"type": "array", "items": {"$ref": "run_record.schema.json"}},
}}

out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/schema")
out.mkdir(parents=True, exist_ok=True)
files = {"system": system, "constraints": {"$schema": D, "title": "Constraints", **constraints},
         "netlist": netlist, "fsm": fsm, "technology": technology, "lock": lock, "sweep": sweep,
         "run_record": run_record, "api": api,
         "report": {"$schema": D, "title": "Run report", "type": "array",
                    "items": {"$ref": "run_record.schema.json"}}}
for name, schema in files.items():
    schema["$id"] = f"{name}.schema.json"
    (out / f"{name}.schema.json").write_text(json.dumps(schema, indent=2) + "\n")
