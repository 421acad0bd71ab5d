# Copyright 2026 The leadopt Authors.
# SPDX-License-Identifier: Apache-2.0

"""Offline oracle: randomized SMILES (different atom orders) for panel molecules.

Each row lists SMILES that RDKit confirms denote the same molecule; frozen
into tests/data/orderings.txt.
"""
from rdkit import Chem

PANEL = [
    "CCO", "c1ccccc1", "c1ccncc1", "c1cc[nH]c1", "c1ccc2[nH]ccc2c1", "O=c1cccc[nH]1",
    "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "CC(=O)Oc1ccccc1C(=O)O", "Cn1cccc1",
    "c1ccc(-c2ccccc2)cc1", "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "C[N+](C)(C)C", "CC(=O)[O-]",
    "CS(=O)(=O)N", "c1cscn1", "c1ccc2ncccc2c1", "OC(=O)c1ccc(Br)cc1F", "C1CC2CCC1C2",
    "CCN(CC)C(=O)c1ccc(O)cc1", "COc1ccc2[nH]cc(CCN)c2c1", "O=C1CCCN1C", "N#Cc1ccc(Cl)cc1",
]
seen = set()
for s in PANEL:
    m = Chem.MolFromSmiles(s)
    ref = Chem.MolToSmiles(m)
    variants = []
    for seed in range(40):
        v = Chem.MolToSmiles(m, doRandom=True, canonical=False, isomericSmiles=False)
        assert Chem.MolToSmiles(Chem.MolFromSmiles(v)) == ref
        if v not in variants:
            variants.append(v)
        if len(variants) == 8:
            break
    print("\t".join([s] + variants))
