"""Builders for synthetic PDB text with correct fixed columns.

Used by the test suite and the runnable experiment scripts; nothing in
the extraction pipeline depends on this module.
"""

from __future__ import annotations

import numpy as np


def atom_line(
    serial: int,
    name: str,
    resname: str,
    chain: str,
    resseq: int,
    x: float,
    y: float,
    z: float,
    element: str,
    icode: str = " ",
    altloc: str = " ",
    record: str = "ATOM  ",
) -> str:
    return (
        f"{record}{serial:>5} {name:<4}{altloc}{resname:<3} {chain}{resseq:>4}{icode}"
        f"   {x:8.3f}{y:8.3f}{z:8.3f}{1.0:6.2f}{0.0:6.2f}          {element:>2}"
    )


def chain_pdb(residues, chain: str = "A", header_id: str = "XXXX") -> str:
    """residues: list of (resseq, atoms) with atoms = [(name, element, x, y, z)].

    Atom names are padded PDB-style: one-letter elements start at column 14.
    """
    lines = [f"HEADER    SYNTHETIC                               01-JAN-00   {header_id}"]
    serial = 1
    for entry in residues:
        if len(entry) == 3:
            resseq, icode, atoms = entry
        else:
            resseq, atoms = entry
            icode = " "
        for name, element, x, y, z in atoms:
            padded = f" {name:<3}" if len(element) == 1 else f"{name:<4}"
            lines.append(
                atom_line(serial, padded, "ALA", chain, resseq, x, y, z, element, icode)
            )
            serial += 1
    lines.append("END")
    return "\n".join(lines) + "\n"


def random_chain_pdb(
    rng: np.random.Generator,
    n_residues: int,
    chain: str = "A",
    step: float = 3.8,
    jitter: float = 1.2,
    atoms_per_residue: tuple[int, int] = (1, 4),
) -> str:
    """A self-avoiding-ish random walk of residues, 1-4 heavy atoms each."""
    residues = []
    center = np.zeros(3)
    names = ["CA", "CB", "CG", "CD"]
    elements = ["C", "C", "C", "N"]
    for idx in range(n_residues):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        center = center + step * direction
        count = int(rng.integers(atoms_per_residue[0], atoms_per_residue[1] + 1))
        atoms = []
        for a in range(count):
            pos = center + rng.normal(scale=jitter, size=3)
            atoms.append((names[a], elements[a], pos[0], pos[1], pos[2]))
        residues.append((idx + 1, atoms))
    return chain_pdb(residues, chain=chain)


def compact_cluster_pdb(
    rng: np.random.Generator, n_residues: int, radius: float = 7.0, chain: str = "A"
) -> str:
    """Residues packed in a ball: dense network, many triangles."""
    residues = []
    for idx in range(n_residues):
        pos = rng.normal(scale=radius / 2.0, size=3)
        residues.append((idx + 1, [("CA", "C", pos[0], pos[1], pos[2])]))
    return chain_pdb(residues, chain=chain)


def extended_strand_pdb(
    rng: np.random.Generator, n_residues: int, spacing: float = 5.0, chain: str = "A"
) -> str:
    """Residues along a line: the network is close to a path."""
    residues = []
    for idx in range(n_residues):
        pos = np.array([idx * spacing, 0.0, 0.0]) + rng.normal(scale=0.3, size=3)
        residues.append((idx + 1, [("CA", "C", pos[0], pos[1], pos[2])]))
    return chain_pdb(residues, chain=chain)
