#!/usr/bin/env python3
# Copyright 2026 The SUQL Engine Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Rewrites fixtures/manifest.json with fresh sha256 digests."""

import hashlib
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

CORPORA = {
    "flagbearers": {
        "provenance": "Six query shapes over a toy Olympic flag-bearer table; row content is synthetic.",
        "schema": "flagbearers/schema.sql",
        "tables": {"table": "flagbearers/rows.jsonl"},
        "queries": "flagbearers/queries.json",
        "rules": "flagbearers/rules.json",
    },
    "restaurants": {
        "provenance": "Eleven-column restaurant schema with 30 synthetic rows, conversational target queries "
                      "and a scripted 20-turn dialogue.",
        "schema": "restaurants/schema.sql",
        "annotations": "restaurants/annotations.json",
        "tables": {"restaurants": "restaurants/rows.jsonl"},
        "queries": "restaurants/queries.json",
        "rules": "restaurants/rules.json",
        "dialogue": "restaurants/dialogue.json",
        "reference_ddl": "restaurants/reference_ddl.sql",
    },
    "hybridqa": {
        "provenance": "Twelve table-and-passage QA examples over small synthetic tables.",
        "schema": "hybridqa/schema.sql",
        "tables": {
            "validation_table_8": "hybridqa/validation_table_8.jsonl",
            "validation_table_10": "hybridqa/validation_table_10.jsonl",
            "validation_table_19": "hybridqa/validation_table_19.jsonl",
            "validation_table_30": "hybridqa/validation_table_30.jsonl",
        },
        "questions": "hybridqa/questions.jsonl",
        "rules": "hybridqa/rules.json",
        "dialogue": "hybridqa/dialogue.json",
    },
    "stress": {
        "provenance": "Procedurally generated venue table for retrieval-pruning budgets; rows come from a seeded generator.",
        "schema": "stress/schema.sql",
        "generated": True,
        "queries": "stress/queries.json",
        "rules": "stress/rules.json",
    },
}


def main():
    manifest = {"version": 1, "corpora": {}}
    for cid, spec in CORPORA.items():
        entry = dict(spec)
        files = {}
        for p in sorted((ROOT / cid).iterdir()):
            files[f"{cid}/{p.name}"] = hashlib.sha256(p.read_bytes()).hexdigest()
        entry["files"] = files
        manifest["corpora"][cid] = entry
    (ROOT / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
