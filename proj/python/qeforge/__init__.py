# Copyright 2026 The qeforge Authors
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
"""Python bindings for the qeforge dataset toolkit."""

from qeforge._core import (
    Error,
    MorphLexicon,
    Record,
    decode_dataset,
    encode_dataset,
    enforce_zero_cap,
    lint_source,
    manifest,
    mismatches,
    augment_morph,
    pearson,
    perturb_batch,
    read_dataset,
    run_pipeline,
    sample,
    sentence_bleu,
    symmetric_agreement,
    write_dataset,
    write_fixture,
)

__all__ = [
    "Error",
    "MorphLexicon",
    "Record",
    "augment_morph",
    "decode_dataset",
    "encode_dataset",
    "enforce_zero_cap",
    "lint_source",
    "manifest",
    "mismatches",
    "pearson",
    "perturb_batch",
    "read_dataset",
    "run_pipeline",
    "sample",
    "sentence_bleu",
    "symmetric_agreement",
    "write_dataset",
    "write_fixture",
]
