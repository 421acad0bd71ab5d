# Copyright 2026 The leadopt Authors.
# SPDX-License-Identifier: Apache-2.0

"""Offline oracle: atom/bond/aromatic/H counts for the parser panel.

Run once with RDKit installed; the printed rows are frozen into
tests/test_chemgraph.cpp.
"""
from rdkit import Chem

PANEL = [
    "C", "CCO", "c1ccccc1", "C1=CC=CC=C1", "c1ccncc1", "c1cc[nH]c1", "c1ccoc1",
    "c1ccsc1", "c1ccc2ccccc2c1", "c1ccc2[nH]ccc2c1", "O=c1cccc[nH]1",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "CC(=O)Oc1ccccc1C(=O)O", "Cn1cccc1",
    "c1ccc(-c2ccccc2)cc1", "C1CCCCC1", "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "[NH4+]",
    "C[N+](C)(C)C", "CC(=O)[O-]", "CS(=O)(=O)N", "ClC(Cl)Cl", "c1c[nH]cn1",
    "c1cscn1", "c1ccc2ncccc2c1", "c1cncnc1", "c1cocn1", "C1CC1", "C#N",
    "OC(=O)c1ccc(Br)cc1F", "C[C@H](N)C(=O)O", "F/C=C/F", "C1CC2CCC1C2",
]

for s in PANEL:
    m = Chem.MolFromSmiles(s)
    arom = sum(1 for a in m.GetAtoms() if a.GetIsAromatic())
    h = sum(a.GetTotalNumHs() for a in m.GetAtoms())
    rings = m.GetRingInfo().NumRings()
    print(f'{{"{s}", {m.GetNumAtoms()}, {m.GetNumBonds()}, {arom}, {h}, {rings}}},')
